//! Command-line front end. Every subcommand writes data to `--out` (or
//! standard output) and diagnostics to standard error.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 domain or usage error,
//! 3 numerical non-convergence.

mod config;
pub mod format;
pub mod svg;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    attractor, bifurcation_scan, cycle_for_x, cycle_from_p, height_scan, region_scan,
    ConvergenceClass, TwoCycle,
};
use crate::consts::{TANGENT_BASE, TANGENT_FIXED_POINT};
use crate::dynamics::{
    cobweb_trace, iterate_double_step, iterate_tower, IterationConfig, IterationOutcome,
};
use crate::lambertw::{lambert_w, tower_fixed_point, tower_fixed_point_repulsive, Branch};
use crate::series::{revert, PowerSeries};
use crate::tower::{finite_tower, g_inflections, sample_g, step_unchecked};
use crate::Error;

pub use config::FileDefaults;
use format::fmt_num;
use svg::Plot;

/// Number of samples used for smooth curves in plots.
const CURVE_SAMPLES: usize = 512;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(Error::NonConvergence(_) | Error::Bracket { .. }) => 3,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Principal,
    Secondary,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Principal => Branch::Principal,
            BranchArg::Secondary => Branch::Secondary,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "powertower",
    version,
    about = "Explore the infinite power tower x^x^x^... as an iterated map"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format for table/figure commands
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Significant digits in numeric output (6..=17)
    #[arg(long, global = true)]
    pub precision: Option<usize>,

    /// Orbit-difference convergence tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Iteration cap
    #[arg(long = "max-iter", global = true)]
    pub max_iter: Option<usize>,

    /// Orbit value past which divergence is declared
    #[arg(long = "div-threshold", global = true)]
    pub div_threshold: Option<f64>,

    /// key=value defaults file; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
#[command(rename_all = "lower")]
pub enum Command {
    /// Finite tower f_n(x) of the given height
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        height: u32,
    },
    /// Convergence regime and attractor value(s)
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Closed-form fixed point W(-ln x)/(-ln x)
    Fixedpoint {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Repulsive fixed point (1 < x < e^(1/e))
        #[arg(long)]
        repulsive: bool,
    },
    /// Iterate the tower map and report the orbit's fate
    Iterate {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Use the double-step map y -> x^(x^y)
        #[arg(long)]
        double: bool,
        /// Starting value (default: x)
        #[arg(long, allow_negative_numbers = true)]
        y0: Option<f64>,
        /// Emit the orbit as CSV (n,y) instead of the outcome line
        #[arg(long)]
        trace: bool,
    },
    /// Cobweb diagram with the curve z = x^y and the line z = y
    Cobweb {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Starting value (default: x)
        #[arg(long, allow_negative_numbers = true)]
        y0: Option<f64>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Attractor values over a range of bases
    Bifurcation {
        #[arg(long = "x-min", allow_negative_numbers = true, default_value_t = 0.01)]
        x_min: f64,
        #[arg(long = "x-max", allow_negative_numbers = true, default_value_t = 1.6)]
        x_max: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Sample finite towers of this height and the next instead of iterating
        #[arg(long)]
        height: Option<u32>,
    },
    /// Where the double-step map contracts: |x^(x^y+y) ln^2 x| < 1
    Region {
        #[arg(long = "x-min", allow_negative_numbers = true, default_value_t = 0.01)]
        x_min: f64,
        #[arg(long = "x-max", allow_negative_numbers = true, default_value_t = 1.6)]
        x_max: f64,
        #[arg(long = "y-min", allow_negative_numbers = true, default_value_t = 0.01)]
        y_min: f64,
        #[arg(long = "y-max", allow_negative_numbers = true, default_value_t = 3.0)]
        y_max: f64,
        #[arg(long, default_value_t = 100)]
        nx: usize,
        #[arg(long, default_value_t = 100)]
        ny: usize,
    },
    /// 2-cycle from its ratio p or from its base x
    #[command(group(clap::ArgGroup::new("source").required(true).args(["p", "x"])))]
    Cycle {
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
    },
    /// Real Lambert W
    Lambertw {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, value_enum, default_value_t = BranchArg::Principal)]
        branch: BranchArg,
    },
    /// Reverse a power series a_1 t + a_2 t^2 + ...
    Revert {
        /// Comma-separated a_1,a_2,...
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        coefficients: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// The curve x = g(y) = y^(1/y)
    Curve {
        #[arg(long = "y-min", allow_negative_numbers = true, default_value_t = 0.05)]
        y_min: f64,
        #[arg(long = "y-max", allow_negative_numbers = true, default_value_t = 10.0)]
        y_max: f64,
        #[arg(long, default_value_t = CURVE_SAMPLES)]
        samples: usize,
    },
}

/// Settings after merging defaults, the config file and flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    pub precision: usize,
    pub iteration: IterationConfig,
}

impl Settings {
    pub fn resolve(common: &CommonArgs) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => FileDefaults::parse(&fs::read_to_string(path)?)?,
            None => FileDefaults::default(),
        };
        let precision = common.precision.or(file.precision).unwrap_or(17);
        if !(6..=17).contains(&precision) {
            return Err(CliError::Usage(format!(
                "precision must be in 6..=17, got {precision}"
            )));
        }
        let base = IterationConfig::default();
        let iteration = IterationConfig::new(
            common.tol.or(file.tol).unwrap_or(base.tolerance()),
            common.max_iter.or(file.max_iter).unwrap_or(base.max_iterations()),
            common
                .div_threshold
                .or(file.div_threshold)
                .unwrap_or(base.divergence_threshold()),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self {
            format: common.format.or(file.format).unwrap_or(Format::Csv),
            precision,
            iteration,
        })
    }

    fn num(&self, v: f64) -> String {
        fmt_num(v, self.precision)
    }

    fn text_only(&self, command: &str) -> Result<(), CliError> {
        if self.format == Format::Svg {
            return Err(CliError::Usage(format!("{command} has no SVG output")));
        }
        Ok(())
    }
}

/// Runs one parsed invocation, writing data to `--out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let settings = Settings::resolve(&cli.common)?;
    let text = render(&cli.command, &settings)?;
    match &cli.common.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Produces the full output document for a command.
pub fn render(command: &Command, s: &Settings) -> Result<String, CliError> {
    match *command {
        Command::Eval { x, height } => {
            s.text_only("eval")?;
            Ok(format!("{}\n", s.num(finite_tower(x, height)?)))
        }
        Command::Classify { x } => {
            s.text_only("classify")?;
            let row = attractor(x, &s.iteration)?;
            let mut line = row.class.name().to_string();
            for v in &row.values {
                line.push(' ');
                line.push_str(&s.num(*v));
            }
            line.push('\n');
            Ok(line)
        }
        Command::Fixedpoint { x, repulsive } => {
            s.text_only("fixedpoint")?;
            let y = if repulsive {
                tower_fixed_point_repulsive(x)?
            } else {
                tower_fixed_point(x)?
            };
            Ok(format!("{}\n", s.num(y)))
        }
        Command::Iterate {
            x,
            double,
            y0,
            trace,
        } => render_iterate(x, double, y0, trace, s),
        Command::Cobweb { x, y0, steps } => render_cobweb(x, y0.unwrap_or(x), steps, s),
        Command::Bifurcation {
            x_min,
            x_max,
            samples,
            height,
        } => match height {
            Some(h) => render_heights(x_min, x_max, samples, h, s),
            None => render_bifurcation(x_min, x_max, samples, s),
        },
        Command::Region {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        } => render_region((x_min, x_max), (y_min, y_max), (nx, ny), s),
        Command::Cycle { p, x } => {
            s.text_only("cycle")?;
            let c = match (p, x) {
                (Some(p), None) => cycle_from_p(p)?,
                (None, Some(x)) => cycle_for_x(x, &s.iteration)?,
                _ => return Err(CliError::Usage("give exactly one of --p, --x".into())),
            };
            Ok(render_cycle(&c, s))
        }
        Command::Lambertw { z, branch } => {
            s.text_only("lambertw")?;
            Ok(format!("{}\n", s.num(lambert_w(z, branch.into())?)))
        }
        Command::Revert {
            ref coefficients,
            order,
        } => {
            s.text_only("revert")?;
            let r = revert(&PowerSeries::new(coefficients.clone()), order)?;
            let mut out = String::from("power,coefficient\n");
            for (k, c) in r.coefficients().iter().enumerate() {
                let _ = writeln!(out, "{},{}", k + 1, s.num(*c));
            }
            Ok(out)
        }
        Command::Curve {
            y_min,
            y_max,
            samples,
        } => render_curve(y_min, y_max, samples, s),
    }
}

fn outcome_line(outcome: &IterationOutcome, s: &Settings) -> String {
    match *outcome {
        IterationOutcome::Converged(y) => format!("Converged {}", s.num(y)),
        IterationOutcome::TwoCycle { y_low, y_high } => {
            format!("TwoCycle {} {}", s.num(y_low), s.num(y_high))
        }
        IterationOutcome::Diverged => "Diverged".to_string(),
        IterationOutcome::Undecided => "Undecided".to_string(),
    }
}

fn render_iterate(
    x: f64,
    double: bool,
    y0: Option<f64>,
    trace: bool,
    s: &Settings,
) -> Result<String, CliError> {
    s.text_only("iterate")?;
    let t = if double {
        iterate_double_step(x, y0.unwrap_or(x), &s.iteration)?
    } else {
        if y0.is_some() {
            return Err(CliError::Usage(
                "--y0 applies to --double; the tower starts at y1 = x".into(),
            ));
        }
        iterate_tower(x, &s.iteration)?
    };
    if t.outcome == IterationOutcome::Undecided {
        return Err(Error::NonConvergence(format!(
            "undecided after {} iterations",
            t.steps()
        ))
        .into());
    }
    if !trace {
        return Ok(format!("{}\n", outcome_line(&t.outcome, s)));
    }
    let mut out = String::from("n,y\n");
    for (n, y) in t.values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", n + 1, s.num(*y));
    }
    eprintln!("{}", outcome_line(&t.outcome, s));
    Ok(out)
}

fn render_cobweb(x: f64, y0: f64, steps: usize, s: &Settings) -> Result<String, CliError> {
    let web = cobweb_trace(x, y0, steps)?;
    let extent = web
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .filter(|v| v.is_finite())
        .fold(1.0_f64, f64::max)
        * 1.1;
    let curve: Vec<(f64, f64)> = (0..CURVE_SAMPLES)
        .map(|i| {
            let y = extent * i as f64 / (CURVE_SAMPLES - 1) as f64;
            (y, step_unchecked(x, y))
        })
        .collect();
    let diagonal = [(0.0, 0.0), (extent, extent)];
    match s.format {
        Format::Csv => {
            let mut out = String::from("section,y,z\n");
            for (name, pts) in [
                ("cobweb", &web[..]),
                ("curve", &curve[..]),
                ("identity", &diagonal[..]),
            ] {
                for &(a, b) in pts {
                    let _ = writeln!(out, "{name},{},{}", s.num(a), s.num(b));
                }
            }
            Ok(out)
        }
        Format::Svg => {
            let mut plot = Plot::new(
                &format!("Cobweb of z = x^y, x = {}", fmt_num(x, 8)),
                (0.0, extent),
                (0.0, extent),
            );
            plot.polyline(&diagonal, "#888", 1.0);
            plot.polyline(&curve, "#1f4e9c", 1.5);
            plot.polyline(&web, "#c0392b", 1.0);
            Ok(plot.finish())
        }
    }
}

fn render_bifurcation(
    x_min: f64,
    x_max: f64,
    samples: usize,
    s: &Settings,
) -> Result<String, CliError> {
    let rows = bifurcation_scan(x_min, x_max, samples, &s.iteration)?;
    match s.format {
        Format::Csv => {
            let mut out = String::from("x,class,value1,value2\n");
            for r in &rows {
                let v1 = r.values.first().map(|v| s.num(*v)).unwrap_or_default();
                let v2 = r.values.get(1).map(|v| s.num(*v)).unwrap_or_default();
                let _ = writeln!(out, "{},{},{v1},{v2}", s.num(r.x), r.class);
            }
            Ok(out)
        }
        Format::Svg => {
            let top = rows
                .iter()
                .flat_map(|r| r.values.iter().copied())
                .fold(1.0_f64, f64::max);
            let mut plot = Plot::new("Attractor of the infinite tower", (x_min, x_max), (0.0, top));
            for r in &rows {
                let fill = if r.class == ConvergenceClass::TwoCycleRegime {
                    "#c0392b"
                } else {
                    "#1f4e9c"
                };
                for &v in &r.values {
                    plot.dot(r.x, v, 1.5, fill);
                }
            }
            Ok(plot.finish())
        }
    }
}

fn render_heights(
    x_min: f64,
    x_max: f64,
    samples: usize,
    height: u32,
    s: &Settings,
) -> Result<String, CliError> {
    let rows = height_scan(x_min, x_max, samples, height)?;
    match s.format {
        Format::Csv => {
            let mut out = String::from("x,f_n,f_n_plus_1\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    s.num(r.x),
                    s.num(r.at_height),
                    s.num(r.at_next_height)
                );
            }
            Ok(out)
        }
        Format::Svg => {
            // Diverging bases are clipped at a little above e.
            let top = TANGENT_FIXED_POINT * 1.1;
            let mut plot = Plot::new(
                &format!("Finite towers of height {height} and {}", height as u64 + 1),
                (x_min, x_max),
                (0.0, top),
            );
            let even: Vec<_> = rows
                .iter()
                .filter(|r| r.at_height <= top)
                .map(|r| (r.x, r.at_height))
                .collect();
            let odd: Vec<_> = rows
                .iter()
                .filter(|r| r.at_next_height <= top)
                .map(|r| (r.x, r.at_next_height))
                .collect();
            plot.polyline(&even, "#1f4e9c", 1.5);
            plot.polyline(&odd, "#c0392b", 1.5);
            Ok(plot.finish())
        }
    }
}

fn render_region(
    x_range: (f64, f64),
    y_range: (f64, f64),
    grid: (usize, usize),
    s: &Settings,
) -> Result<String, CliError> {
    let g = region_scan(x_range, y_range, grid)?;
    match s.format {
        Format::Csv => {
            let mut out = String::from("x,y,inside\n");
            for (i, &x) in g.xs.iter().enumerate() {
                for (j, &y) in g.ys.iter().enumerate() {
                    let _ = writeln!(out, "{},{},{}", s.num(x), s.num(y), u8::from(g.get(i, j)));
                }
            }
            Ok(out)
        }
        Format::Svg => {
            let dx = (x_range.1 - x_range.0) / (grid.0 - 1) as f64;
            let dy = (y_range.1 - y_range.0) / (grid.1 - 1) as f64;
            let mut plot = Plot::new(
                "Region |x^(x^y+y) ln^2 x| < 1",
                (x_range.0 - dx / 2.0, x_range.1 + dx / 2.0),
                (y_range.0 - dy / 2.0, y_range.1 + dy / 2.0),
            );
            for (i, &x) in g.xs.iter().enumerate() {
                for (j, &y) in g.ys.iter().enumerate() {
                    if g.get(i, j) {
                        plot.cell(
                            (x - dx / 2.0, x + dx / 2.0),
                            (y - dy / 2.0, y + dy / 2.0),
                            "#7fa7d9",
                        );
                    }
                }
            }
            Ok(plot.finish())
        }
    }
}

fn render_cycle(c: &TwoCycle, s: &Settings) -> String {
    format!(
        "y_low,y_high,p,x\n{},{},{},{}\n",
        s.num(c.y_low),
        s.num(c.y_high),
        s.num(c.p),
        s.num(c.x)
    )
}

fn render_curve(y_min: f64, y_max: f64, samples: usize, s: &Settings) -> Result<String, CliError> {
    let pts = sample_g(y_min, y_max, samples)?;
    match s.format {
        Format::Csv => {
            let mut out = String::from("y,g\n");
            for p in &pts {
                let _ = writeln!(out, "{},{}", s.num(p.y), s.num(p.x));
            }
            Ok(out)
        }
        Format::Svg => {
            let top = pts.iter().map(|p| p.x).fold(TANGENT_BASE, f64::max) * 1.05;
            let mut plot = Plot::new("x = g(y) = y^(1/y)", (0.0, y_max), (0.0, top));
            let line: Vec<_> = pts.iter().map(|p| (p.y, p.x)).collect();
            plot.polyline(&[(0.0, 1.0), (y_max, 1.0)], "#888", 1.0);
            plot.polyline(&line, "#1f4e9c", 1.5);
            plot.dot(TANGENT_FIXED_POINT, TANGENT_BASE, 4.0, "#c0392b");
            let (f1, f2) = g_inflections()?;
            for f in [f1, f2] {
                if f.y <= y_max {
                    plot.dot(f.y, f.x, 3.0, "#27ae60");
                }
            }
            Ok(plot.finish())
        }
    }
}
