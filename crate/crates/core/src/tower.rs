//! Scalar building blocks: the exponentiation step, finite towers, the
//! inverse-map curve `g(y) = y^(1/y)` with its calculus, and the
//! hyperoperation ladder.

use crate::error::{domain, Error, Result};
use crate::roots::bisect;

/// A base/height pair describing a finite tower `x^x^...^x` with `height` levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerInput {
    x: f64,
    height: u32,
}

impl TowerInput {
    pub fn new(x: f64, height: u32) -> Result<Self> {
        check_base(x)?;
        if height < 1 {
            return Err(domain("tower height must be at least 1"));
        }
        Ok(Self { x, height })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn evaluate(&self) -> f64 {
        // Validated on construction.
        let mut y = self.x;
        for _ in 1..self.height {
            y = step_unchecked(self.x, y);
        }
        y
    }
}

/// A point `(y, x)` on the curve `x = g(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub y: f64,
    pub x: f64,
}

impl CurvePoint {
    /// Samples the curve at `y`.
    pub fn at(y: f64) -> Result<Self> {
        Ok(Self { y, x: g(y)? })
    }
}

pub(crate) fn check_base(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("base must be positive and finite, got {x}")))
    }
}

#[inline]
pub(crate) fn step_unchecked(x: f64, y: f64) -> f64 {
    (y * x.ln()).exp()
}

/// One level of the tower: `x^y`, evaluated as `exp(y ln x)`.
///
/// Overflow gives `+inf`; callers decide whether that means divergence.
pub fn tower_step(x: f64, y: f64) -> Result<f64> {
    check_base(x)?;
    if y.is_nan() {
        return Err(domain("exponent is NaN"));
    }
    Ok(step_unchecked(x, y))
}

/// The right-associative tower of height `n`: `f_1 = x`, `f_{k+1} = x^{f_k}`.
pub fn finite_tower(x: f64, n: u32) -> Result<f64> {
    TowerInput::new(x, n).map(|t| t.evaluate())
}

fn check_abscissa(y: f64) -> Result<()> {
    if y > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("g(y) requires y > 0, got {y}")))
    }
}

/// `g(y) = y^(1/y)`: the base whose tower has fixed point `y`.
pub fn g(y: f64) -> Result<f64> {
    check_abscissa(y)?;
    Ok((y.ln() / y).exp())
}

/// `g'(y) = y^(1/y) (1 - ln y) / y^2`.
pub fn g_prime(y: f64) -> Result<f64> {
    let gy = g(y)?;
    Ok(gy * (1.0 - y.ln()) / (y * y))
}

/// `samples` points of `x = g(y)` evenly spaced over `[y_min, y_max]`.
pub fn sample_g(y_min: f64, y_max: f64, samples: usize) -> Result<Vec<CurvePoint>> {
    if !(y_min > 0.0 && y_max > y_min && y_max.is_finite()) {
        return Err(domain(format!(
            "curve range must satisfy 0 < y_min < y_max, got [{y_min}, {y_max}]"
        )));
    }
    if samples < 2 {
        return Err(domain("a curve needs at least 2 samples"));
    }
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let y = if i + 1 == samples {
                y_max
            } else {
                y_min + (y_max - y_min) * (i as f64 / last)
            };
            CurvePoint::at(y)
        })
        .collect()
}

/// Numerator of `g''`: `g''(y) = y^(1/y - 4) * inflection_residual(y)`.
pub fn inflection_residual(y: f64) -> f64 {
    let l = y.ln();
    1.0 - 3.0 * y + (2.0 * y + l - 2.0) * l
}

/// The two inflection points of `g`, near `(0.5819, 0.3944)` and `(4.3678, 1.4015)`.
pub fn g_inflections() -> Result<(CurvePoint, CurvePoint)> {
    let first = bisect(inflection_residual, 0.1, 1.0, 1e-14)?;
    let second = bisect(inflection_residual, 3.0, 6.0, 1e-14)?;
    Ok((CurvePoint::at(first)?, CurvePoint::at(second)?))
}

/// Grade of the hyperoperation ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Grade {
    Successor = 0,
    Addition = 1,
    Multiplication = 2,
    Exponentiation = 3,
    Tetration = 4,
}

impl TryFrom<u8> for Grade {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Ok(match v {
            0 => Grade::Successor,
            1 => Grade::Addition,
            2 => Grade::Multiplication,
            3 => Grade::Exponentiation,
            4 => Grade::Tetration,
            _ => return Err(domain(format!("hyperoperation grade must be 0..=4, got {v}"))),
        })
    }
}

fn checked_pow(base: u64, exp: u64) -> Result<u64> {
    match base {
        0 => Ok(u64::from(exp == 0)),
        1 => Ok(1),
        _ => {
            let exp = u32::try_from(exp).map_err(|_| Error::Overflow)?;
            base.checked_pow(exp).ok_or(Error::Overflow)
        }
    }
}

/// Hyperoperation `H_grade(n, m)` with checked `u64` arithmetic.
///
/// Grade 0 ignores `m`. Grade 4 is the `m`-level tower of `n`, with
/// `n↑↑0 = 1`.
pub fn hyperop(grade: u8, n: u64, m: u64) -> Result<u64> {
    match Grade::try_from(grade)? {
        Grade::Successor => n.checked_add(1).ok_or(Error::Overflow),
        Grade::Addition => n.checked_add(m).ok_or(Error::Overflow),
        Grade::Multiplication => n.checked_mul(m).ok_or(Error::Overflow),
        Grade::Exponentiation => checked_pow(n, m),
        Grade::Tetration => {
            if m == 0 {
                return Ok(1);
            }
            match n {
                // 0^0 = 1, so the tower of zeros alternates 0, 1, 0, ...
                0 => Ok(u64::from(m.is_multiple_of(2))),
                1 => Ok(1),
                _ => {
                    let mut acc = n;
                    // n >= 2 overflows after at most six levels.
                    for _ in 1..m {
                        acc = checked_pow(n, acc)?;
                    }
                    Ok(acc)
                }
            }
        }
    }
}
