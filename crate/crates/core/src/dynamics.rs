//! The iteration engine for `y_{n+1} = x^{y_n}` and the double-step map
//! `y_{n+2} = x^{x^{y_n}}`: orbit diagnosis, fixed-point stability and
//! cobweb traces.

use crate::error::{domain, Error, Result};
use crate::tower::{check_base, step_unchecked};

/// Stopping rules shared by the single- and double-step iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    tolerance: f64,
    max_iterations: usize,
    divergence_threshold: f64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 10_000,
            divergence_threshold: 1e15,
        }
    }
}

impl IterationConfig {
    /// Convergent orbits never exceed `e`, so the divergence threshold must.
    pub fn new(tolerance: f64, max_iterations: usize, divergence_threshold: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(domain(format!("tolerance must be positive, got {tolerance}")));
        }
        if max_iterations < 1 {
            return Err(domain("max_iterations must be at least 1"));
        }
        if !(divergence_threshold > std::f64::consts::E) {
            return Err(domain(format!(
                "divergence threshold must exceed e, got {divergence_threshold}"
            )));
        }
        Ok(Self {
            tolerance,
            max_iterations,
            divergence_threshold,
        })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn divergence_threshold(&self) -> f64 {
        self.divergence_threshold
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self> {
        Self::new(tolerance, self.max_iterations, self.divergence_threshold)
    }

    pub fn with_max_iterations(self, max_iterations: usize) -> Result<Self> {
        Self::new(self.tolerance, max_iterations, self.divergence_threshold)
    }
}

/// Diagnosed fate of an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationOutcome {
    Converged(f64),
    TwoCycle { y_low: f64, y_high: f64 },
    Diverged,
    Undecided,
}

/// An orbit together with its diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub x: f64,
    /// The orbit, starting value first.
    pub values: Vec<f64>,
    pub outcome: IterationOutcome,
}

impl IterationTrace {
    /// Number of map applications performed.
    pub fn steps(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// Classification of a fixed point by `|ln y*|` against 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Attractive,
    Repulsive,
    Neutral,
}

const NEUTRAL_WINDOW: f64 = 1e-12;
const FIXED_POINT_RESIDUAL: f64 = 1e-6;

fn run<F>(x: f64, y0: f64, config: &IterationConfig, detect_cycle: bool, map: F) -> IterationTrace
where
    F: Fn(f64) -> f64,
{
    let tol = config.tolerance;
    let mut values = Vec::with_capacity(64);
    values.push(y0);
    let mut outcome = IterationOutcome::Undecided;
    while values.len() <= config.max_iterations {
        let y = values[values.len() - 1];
        let next = map(y);
        values.push(next);
        if !next.is_finite() || next > config.divergence_threshold {
            outcome = IterationOutcome::Diverged;
            break;
        }
        if (next - y).abs() < tol {
            outcome = IterationOutcome::Converged(next);
            break;
        }
        if detect_cycle && values.len() >= 3 {
            let prev = values[values.len() - 3];
            if (next - prev).abs() < tol && (next - y).abs() >= 10.0 * tol {
                outcome = IterationOutcome::TwoCycle {
                    y_low: y.min(next),
                    y_high: y.max(next),
                };
                break;
            }
        }
    }
    IterationTrace { x, values, outcome }
}

/// Iterates `y_{n+1} = x^{y_n}` from `y_1 = x`.
pub fn iterate_tower(x: f64, config: &IterationConfig) -> Result<IterationTrace> {
    check_base(x)?;
    Ok(run(x, x, config, true, |y| step_unchecked(x, y)))
}

/// Iterates the double-step map `y ↦ x^{x^y}` from `y0`.
///
/// A 2-cycle of the single map shows up here as a converged branch value.
pub fn iterate_double_step(x: f64, y0: f64, config: &IterationConfig) -> Result<IterationTrace> {
    check_base(x)?;
    if !(y0 > 0.0 && y0.is_finite()) {
        return Err(domain(format!("starting value must be positive, got {y0}")));
    }
    Ok(run(x, y0, config, false, |y| {
        step_unchecked(x, step_unchecked(x, y))
    }))
}

/// Stability of a fixed point `y_star = x^{y_star}`: the map's slope there is `ln y_star`.
pub fn stability_of(x: f64, y_star: f64) -> Result<StabilityClass> {
    check_base(x)?;
    if !(y_star > 0.0) {
        return Err(domain(format!("fixed point must be positive, got {y_star}")));
    }
    let residual = (step_unchecked(x, y_star) - y_star).abs();
    if !(residual <= FIXED_POINT_RESIDUAL) {
        return Err(Error::Precondition(format!(
            "{y_star} is not a fixed point for x = {x} (residual {residual:e})"
        )));
    }
    let slope = y_star.ln().abs();
    Ok(if slope < 1.0 - NEUTRAL_WINDOW {
        StabilityClass::Attractive
    } else if slope > 1.0 + NEUTRAL_WINDOW {
        StabilityClass::Repulsive
    } else {
        StabilityClass::Neutral
    })
}

/// Derivative of `y ↦ x^{x^y}`: `x^{x^y + y} ln²x`.
pub fn double_step_derivative(x: f64, y: f64) -> Result<f64> {
    check_base(x)?;
    let ln_x = x.ln();
    Ok(((step_unchecked(x, y) + y) * ln_x).exp() * (ln_x * ln_x))
}

/// True where the double-step map contracts: `|x^{x^y+y} ln²x| < 1`.
pub fn in_double_region(x: f64, y: f64) -> Result<bool> {
    Ok(double_step_derivative(x, y)?.abs() < 1.0)
}

/// Cobweb polyline for `y ↦ x^y` from `y0`.
///
/// Points are `(y0, 0), (y0, y1), (y1, y1), (y1, y2), ...`: a riser to the
/// curve followed by a run to the diagonal, `2 * steps + 1` points in all.
/// The list ends early at the last finite point if the orbit overflows.
pub fn cobweb_trace(x: f64, y0: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    check_base(x)?;
    if !(y0 > 0.0 && y0.is_finite()) {
        return Err(domain(format!("starting value must be positive, got {y0}")));
    }
    if steps < 1 {
        return Err(domain("cobweb needs at least one step"));
    }
    let mut points = Vec::with_capacity(2 * steps + 1);
    points.push((y0, 0.0));
    let mut y = y0;
    for _ in 0..steps {
        let next = step_unchecked(x, y);
        if !next.is_finite() {
            break;
        }
        points.push((y, next));
        points.push((next, next));
        y = next;
    }
    Ok(points)
}
