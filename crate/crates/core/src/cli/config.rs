//! `key=value` defaults file. Blank lines and `#` comments are ignored.
//!
//! Recognised keys: `tol`, `max-iter`, `div-threshold`, `precision`, `format`.

use std::str::FromStr;

use super::{CliError, Format};

#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileDefaults {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub div_threshold: Option<f64>,
    pub precision: Option<usize>,
    pub format: Option<Format>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config line {line}: bad value for {key}: {value:?}")))
}

impl FileDefaults {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut out = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {line}: expected key=value")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "tol" => out.tol = Some(parse_value(key, value, line)?),
                "max-iter" => out.max_iter = Some(parse_value(key, value, line)?),
                "div-threshold" => out.div_threshold = Some(parse_value(key, value, line)?),
                "precision" => out.precision = Some(parse_value(key, value, line)?),
                "format" => {
                    out.format = Some(match value {
                        "csv" => Format::Csv,
                        "svg" => Format::Svg,
                        _ => {
                            return Err(CliError::Usage(format!(
                                "config line {line}: format must be csv or svg"
                            )))
                        }
                    })
                }
                _ => {
                    return Err(CliError::Usage(format!(
                        "config line {line}: unknown key {key:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}
