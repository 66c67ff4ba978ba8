//! Formal power series without constant term: composition and reversion by
//! coefficient matching.
//!
//! Given `y = a_1 x + a_2 x^2 + ...` with `a_1 != 0`, reversion finds
//! `x = A_1 y + A_2 y^2 + ...` by substituting the first series into the
//! second and equating powers of `x`. The system is triangular:
//!
//! ```text
//! A_1 a_1 = 1
//! A_1 a_2 + A_2 a_1^2 = 0
//! A_1 a_3 + 2 A_2 a_1 a_2 + A_3 a_1^3 = 0
//! ...
//! ```
//!
//! so each `A_n` follows from the ones before it.

use crate::error::{domain, Result};
use crate::lambertw::eval_power_sum;

/// `sum_{k>=1} c_k t^k`, stored as `[c_1, c_2, ...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coefficients: Vec<f64>,
}

impl PowerSeries {
    /// `coefficients[k]` multiplies `t^(k+1)`.
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    /// Rejects series given with a constant term in front.
    ///
    /// `with_constant[0]` is the constant. Shift the variable to remove it
    /// before reverting.
    pub fn from_with_constant(with_constant: &[f64]) -> Result<Self> {
        match with_constant.split_first() {
            Some((&0.0, rest)) => Ok(Self::new(rest.to_vec())),
            Some((&c0, _)) => Err(domain(format!(
                "series has constant term {c0}; shift the variable to remove it first"
            ))),
            None => Ok(Self::new(Vec::new())),
        }
    }

    /// `t`.
    pub fn identity() -> Self {
        Self::new(vec![1.0])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Coefficient of `t^power`; zero past the stored length and at `power = 0`.
    pub fn coefficient(&self, power: usize) -> f64 {
        match power {
            0 => 0.0,
            k => self.coefficients.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn truncated(&self, order: usize) -> Self {
        Self::new((1..=order).map(|k| self.coefficient(k)).collect())
    }

    pub fn eval(&self, t: f64) -> f64 {
        eval_power_sum(&self.coefficients, t)
    }

    /// Largest coefficient distance to `other` over powers `1..=order`.
    pub fn max_abs_diff(&self, other: &PowerSeries, order: usize) -> f64 {
        (1..=order)
            .map(|k| (self.coefficient(k) - other.coefficient(k)).abs())
            .fold(0.0, f64::max)
    }
}

/// Product of two series truncated at `t^order`. Both lack a constant term,
/// so index `k` of the dense buffers holds the coefficient of `t^k`.
fn mul_dense(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    for (i, &ai) in a.iter().enumerate().skip(1) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().skip(1) {
            if i + j > order {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn dense(s: &PowerSeries, order: usize) -> Vec<f64> {
    (0..=order).map(|k| s.coefficient(k)).collect()
}

/// Powers `s^1 .. s^order` of `s`, each truncated at `t^order`.
fn powers(s: &PowerSeries, order: usize) -> Vec<Vec<f64>> {
    let base = dense(s, order);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(order);
    out.push(base.clone());
    for _ in 1..order {
        let next = mul_dense(out.last().expect("non-empty"), &base, order);
        out.push(next);
    }
    out
}

/// `outer(inner(t))` truncated at `t^order`.
pub fn compose(outer: &PowerSeries, inner: &PowerSeries, order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(domain("composition order must be at least 1"));
    }
    let mut out = vec![0.0; order + 1];
    for (k, pk) in powers(inner, order).iter().enumerate() {
        let c = outer.coefficient(k + 1);
        if c == 0.0 {
            continue;
        }
        for (acc, &v) in out.iter_mut().zip(pk) {
            *acc += c * v;
        }
    }
    Ok(PowerSeries::new(out.split_off(1)))
}

/// Compositional inverse of `series` up to `t^order`.
pub fn revert(series: &PowerSeries, order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(domain("reversion order must be at least 1"));
    }
    let a1 = series.coefficient(1);
    if a1 == 0.0 || !a1.is_finite() {
        return Err(domain(format!(
            "series is not invertible at the origin: leading coefficient {a1}"
        )));
    }
    // powers[k-1][n] is the coefficient of x^n in (a_1 x + a_2 x^2 + ...)^k;
    // its diagonal entry powers[n-1][n] is a_1^n.
    let powers = powers(series, order);
    let mut inverse = Vec::with_capacity(order);
    for n in 1..=order {
        let known: f64 = inverse
            .iter()
            .zip(&powers)
            .map(|(a_k, p_k): (&f64, &Vec<f64>)| a_k * p_k[n])
            .sum();
        let target = if n == 1 { 1.0 } else { 0.0 };
        inverse.push((target - known) / powers[n - 1][n]);
    }
    Ok(PowerSeries::new(inverse))
}

/// Maclaurin coefficients of `w e^w`: `1/(k-1)!` for `k = 1..=order`.
pub fn w_exp_w_series(order: usize) -> PowerSeries {
    let mut c = Vec::with_capacity(order);
    let mut factorial = 1.0;
    for k in 1..=order {
        if k > 1 {
            factorial *= (k - 1) as f64;
        }
        c.push(1.0 / factorial);
    }
    PowerSeries::new(c)
}

/// Coefficients of the solution `t = v + v² + 3/2 v³ + 8/3 v⁴ + ...` of `t = v e^t`.
pub const EULER_LN_SERIES: [f64; 4] = [1.0, 1.0, 3.0 / 2.0, 8.0 / 3.0];

/// Truncated series solution of `t = v e^t`, i.e. `ln x` for `x = e^{v x}`.
/// Four terms are accurate to about `2e-6` for `|v| ≤ 0.05`.
pub fn euler_ln_series(v: f64, order: usize) -> Result<f64> {
    if !(1..=EULER_LN_SERIES.len()).contains(&order) {
        return Err(domain(format!("series order must be 1..=4, got {order}")));
    }
    Ok(eval_power_sum(&EULER_LN_SERIES[..order], v))
}
