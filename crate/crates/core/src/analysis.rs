//! Regime classification, the tangency point, 2-cycle algebra, parity
//! limits and the grid scans behind the bifurcation and region plots.

use std::fmt;

use crate::consts::{within_ulp, CYCLE_BASE, INV_E, TANGENT_BASE, TANGENT_FIXED_POINT};
use crate::dynamics::{
    double_step_derivative, in_double_region, iterate_double_step, iterate_tower,
    IterationConfig, IterationOutcome,
};
use crate::error::{domain, Error, Result};
use crate::lambertw::tower_fixed_point;
use crate::roots::bisect;
use crate::tower::{check_base, finite_tower, step_unchecked};

/// Convergence regime of the infinite tower at base `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvergenceClass {
    /// `x > e^(1/e)`: no fixed point, the tower grows without bound.
    DivergesToInfinity,
    /// `x = e^(1/e)`: a single fixed point `e`, approached tangentially.
    TangentConvergence,
    /// `1 < x < e^(1/e)`: converges to the lower of two fixed points.
    TwoFixedPoints,
    /// `x = 1`.
    Unity,
    /// `e^(-e) ≤ x < 1`: oscillating convergence to the single fixed point.
    OscillatingConvergence,
    /// `0 < x < e^(-e)`: the fixed point is unstable and orbits settle on a 2-cycle.
    TwoCycleRegime,
}

impl ConvergenceClass {
    pub const ALL: [ConvergenceClass; 6] = [
        ConvergenceClass::DivergesToInfinity,
        ConvergenceClass::TangentConvergence,
        ConvergenceClass::TwoFixedPoints,
        ConvergenceClass::Unity,
        ConvergenceClass::OscillatingConvergence,
        ConvergenceClass::TwoCycleRegime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConvergenceClass::DivergesToInfinity => "DivergesToInfinity",
            ConvergenceClass::TangentConvergence => "TangentConvergence",
            ConvergenceClass::TwoFixedPoints => "TwoFixedPoints",
            ConvergenceClass::Unity => "Unity",
            ConvergenceClass::OscillatingConvergence => "OscillatingConvergence",
            ConvergenceClass::TwoCycleRegime => "TwoCycleRegime",
        }
    }

    /// Closed range spanned by the attractor values in this regime.
    pub fn fixed_point_range(&self) -> Option<(f64, f64)> {
        match self {
            ConvergenceClass::DivergesToInfinity => None,
            ConvergenceClass::TangentConvergence => Some((TANGENT_FIXED_POINT, TANGENT_FIXED_POINT)),
            ConvergenceClass::TwoFixedPoints => Some((1.0, TANGENT_FIXED_POINT)),
            ConvergenceClass::Unity => Some((1.0, 1.0)),
            ConvergenceClass::OscillatingConvergence => Some((INV_E, 1.0)),
            ConvergenceClass::TwoCycleRegime => Some((0.0, 1.0)),
        }
    }

    /// Number of attractor values (0 for divergence, 2 for the cycle).
    pub fn attractor_len(&self) -> usize {
        match self {
            ConvergenceClass::DivergesToInfinity => 0,
            ConvergenceClass::TwoCycleRegime => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ConvergenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Regime of `x` by interval membership alone. The two boundary bases are
/// matched within one ulp: `e^(1/e)` is tangent convergence and `e^(-e)`
/// still converges (to `1/e`).
pub fn classify(x: f64) -> Result<ConvergenceClass> {
    check_base(x)?;
    Ok(if within_ulp(x, TANGENT_BASE) {
        ConvergenceClass::TangentConvergence
    } else if x > TANGENT_BASE {
        ConvergenceClass::DivergesToInfinity
    } else if x > 1.0 {
        ConvergenceClass::TwoFixedPoints
    } else if x == 1.0 {
        ConvergenceClass::Unity
    } else if x > CYCLE_BASE || within_ulp(x, CYCLE_BASE) {
        ConvergenceClass::OscillatingConvergence
    } else {
        ConvergenceClass::TwoCycleRegime
    })
}

/// The base at which `z = x^y` touches `z = y`, and the touching point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency {
    pub x: f64,
    pub point: (f64, f64),
}

/// Point `(y_T, z_T)` where `z = x^y` has unit slope, for `x > 1`:
/// `y_T = -ln(ln x)/ln x`, `z_T = 1/ln x`.
pub fn unit_slope_point(x: f64) -> Result<(f64, f64)> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(domain(format!("unit-slope point needs x > 1, got {x}")));
    }
    let l = x.ln();
    Ok((-l.ln() / l, 1.0 / l))
}

/// `(e^(1/e), (e, e))`.
pub fn tangency() -> Tangency {
    let (y_t, z_t) = unit_slope_point(TANGENT_BASE).expect("tangent base exceeds 1");
    debug_assert!((y_t - z_t).abs() < 1e-12 && (y_t - TANGENT_FIXED_POINT).abs() < 1e-12);
    Tangency {
        x: TANGENT_BASE,
        point: (TANGENT_FIXED_POINT, TANGENT_FIXED_POINT),
    }
}

/// A 2-cycle `y_low ↔ y_high` of `y ↦ x^y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCycle {
    pub y_low: f64,
    pub y_high: f64,
    /// `y_high / y_low`.
    pub p: f64,
    /// The base generating the cycle.
    pub x: f64,
}

impl TwoCycle {
    fn degenerate() -> Self {
        Self {
            y_low: INV_E,
            y_high: INV_E,
            p: 1.0,
            x: CYCLE_BASE,
        }
    }

    /// `max(|x^{y_low} - y_high|, |x^{y_high} - y_low|)`.
    pub fn residual(&self) -> f64 {
        let a = (step_unchecked(self.x, self.y_low) - self.y_high).abs();
        let b = (step_unchecked(self.x, self.y_high) - self.y_low).abs();
        a.max(b)
    }

    /// `|y_low^{y_low} - y_high^{y_high}|`, zero on every genuine cycle.
    pub fn self_power_gap(&self) -> f64 {
        (self.y_low.powf(self.y_low) - self.y_high.powf(self.y_high)).abs()
    }
}

/// The cycle with ratio `p = y_high / y_low > 1`:
/// `y_low = p^{p/(1-p)}`, `y_high = p^{1/(1-p)}`, `x = y_low^{1/y_high}`.
///
/// Within `1e-9` of `p = 1` the cycle has collapsed onto `(1/e, 1/e)` at
/// `x = e^(-e)` and that limit is returned.
pub fn cycle_from_p(p: f64) -> Result<TwoCycle> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain(format!("cycle ratio must satisfy p > 1, got {p}")));
    }
    let q = p - 1.0;
    if q < 1e-9 {
        return Ok(TwoCycle::degenerate());
    }
    // ln(p)/(p-1) without cancellation near p = 1.
    let l = q.ln_1p() / q;
    let y_low = (-p * l).exp();
    let y_high = (-l).exp();
    let x = (y_low.ln() / y_high).exp();
    Ok(TwoCycle { y_low, y_high, p, x })
}

fn double_step_residual(x: f64, y: f64) -> f64 {
    step_unchecked(x, step_unchecked(x, y)) - y
}

/// Newton steps on `x^{x^y} - y`, kept only while the residual shrinks.
fn polish_branch(x: f64, mut y: f64) -> f64 {
    let mut r = double_step_residual(x, y);
    for _ in 0..8 {
        if r == 0.0 {
            break;
        }
        let slope = match double_step_derivative(x, y) {
            Ok(d) => d - 1.0,
            Err(_) => break,
        };
        if slope == 0.0 {
            break;
        }
        let next = y - r / slope;
        let r_next = double_step_residual(x, next);
        if !(r_next.abs() < r.abs()) {
            break;
        }
        y = next;
        r = r_next;
    }
    y
}

/// Lower cycle value as the root of `x^{x^y} - y` below the unstable fixed point.
fn bracket_lower_branch(x: f64, y_mid: f64) -> Result<f64> {
    let mut gap = 0.5 * y_mid;
    while gap > y_mid * 1e-15 {
        let hi = y_mid - gap;
        if double_step_residual(x, hi) < 0.0 {
            return bisect(|y| double_step_residual(x, y), 0.0, hi, 0.0);
        }
        gap *= 0.5;
    }
    Err(Error::NonConvergence(format!(
        "2-cycle at x = {x} is narrower than binary64 can resolve"
    )))
}

/// The stable 2-cycle for `0 < x < e^(-e)`.
///
/// The lower (odd-height) value is the limit of the double-step map started
/// at `y0 = x`; the upper value is `x^{y_low}`. Close to `e^(-e)` the
/// double-step map converges too slowly for the iteration cap, and the lower
/// value is then bracketed between 0 and the unstable fixed point instead.
pub fn cycle_for_x(x: f64, config: &IterationConfig) -> Result<TwoCycle> {
    if !(x > 0.0 && x < CYCLE_BASE) || within_ulp(x, CYCLE_BASE) {
        return Err(domain(format!(
            "a stable 2-cycle exists only for 0 < x < e^(-e), got {x}"
        )));
    }
    let y_mid = tower_fixed_point(x)?;
    let trace = iterate_double_step(x, x, config)?;
    let y_low = match trace.outcome {
        IterationOutcome::Converged(y) if y < y_mid => polish_branch(x, y),
        IterationOutcome::Converged(_) | IterationOutcome::Undecided => {
            bracket_lower_branch(x, y_mid)?
        }
        IterationOutcome::Diverged | IterationOutcome::TwoCycle { .. } => {
            return Err(Error::NonConvergence(format!(
                "double-step iteration at x = {x} ended in {:?}",
                trace.outcome
            )))
        }
    };
    let y_high = step_unchecked(x, y_low);
    if !(y_high > y_low) {
        return Err(Error::NonConvergence(format!(
            "2-cycle at x = {x} is narrower than binary64 can resolve"
        )));
    }
    Ok(TwoCycle {
        y_low,
        y_high,
        p: y_high / y_low,
        x,
    })
}

/// `(f_{2n}(x), f_{2n+1}(x))` with `n = n_pairs`; tends to `(1, 0)` as `x → 0`.
pub fn parity_limits(x: f64, n_pairs: u32) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < CYCLE_BASE) {
        return Err(domain(format!(
            "parity limits are defined for 0 < x < e^(-e), got {x}"
        )));
    }
    if n_pairs < 1 {
        return Err(domain("n_pairs must be at least 1"));
    }
    let even_height = n_pairs
        .checked_mul(2)
        .filter(|h| *h < u32::MAX)
        .ok_or_else(|| domain("n_pairs too large"))?;
    let even = finite_tower(x, even_height)?;
    Ok((even, step_unchecked(x, even)))
}

/// Attractor of the tower at one base.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    /// One value for convergent regimes, two (ascending) for the 2-cycle, none for divergence.
    pub values: Vec<f64>,
    pub class: ConvergenceClass,
}

/// Classifies `x` and finds its attractor by iteration. When iteration does
/// not settle (tangential or near-pitchfork slowdown), or reports a fate that
/// contradicts the regime, the closed-form fixed point or the bracketed
/// 2-cycle is used instead.
pub fn attractor(x: f64, config: &IterationConfig) -> Result<ScanRow> {
    let class = classify(x)?;
    let values = match class {
        ConvergenceClass::DivergesToInfinity => Vec::new(),
        ConvergenceClass::TwoCycleRegime => match iterate_tower(x, config)?.outcome {
            IterationOutcome::TwoCycle { y_low, y_high } => {
                vec![polish_branch(x, y_low), polish_branch(x, y_high)]
            }
            _ => {
                let c = cycle_for_x(x, config)?;
                vec![c.y_low, c.y_high]
            }
        },
        _ => match iterate_tower(x, config)?.outcome {
            IterationOutcome::Converged(y) => vec![y],
            _ => vec![tower_fixed_point(x)?],
        },
    };
    Ok(ScanRow { x, values, class })
}

/// `samples` evenly spaced points from `lo` to `hi`, both ends exact.
pub fn linspace(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let last = samples.saturating_sub(1).max(1) as f64;
    (0..samples)
        .map(|i| {
            if i + 1 == samples {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / last)
            }
        })
        .collect()
}

fn check_range(lo: f64, hi: f64, what: &str) -> Result<()> {
    if lo > 0.0 && hi > lo && hi.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "{what} range must satisfy 0 < min < max, got [{lo}, {hi}]"
        )))
    }
}

/// Attractor rows for `samples` evenly spaced bases in `[x_min, x_max]`.
pub fn bifurcation_scan(
    x_min: f64,
    x_max: f64,
    samples: usize,
    config: &IterationConfig,
) -> Result<Vec<ScanRow>> {
    check_range(x_min, x_max, "x")?;
    if samples < 2 {
        return Err(domain("a scan needs at least 2 samples"));
    }
    linspace(x_min, x_max, samples)
        .into_iter()
        .map(|x| attractor(x, config))
        .collect()
}

/// Finite towers of two consecutive heights at one base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightRow {
    pub x: f64,
    /// `f_h(x)`.
    pub at_height: f64,
    /// `f_{h+1}(x)`.
    pub at_next_height: f64,
}

/// `f_h(x)` and `f_{h+1}(x)` over evenly spaced bases: below `e^(-e)` the
/// two heights land on opposite branches of the 2-cycle.
pub fn height_scan(x_min: f64, x_max: f64, samples: usize, height: u32) -> Result<Vec<HeightRow>> {
    check_range(x_min, x_max, "x")?;
    if samples < 2 {
        return Err(domain("a scan needs at least 2 samples"));
    }
    if height < 1 || height == u32::MAX {
        return Err(domain(format!("height must be in 1..u32::MAX, got {height}")));
    }
    linspace(x_min, x_max, samples)
        .into_iter()
        .map(|x| {
            let at_height = finite_tower(x, height)?;
            Ok(HeightRow {
                x,
                at_height,
                at_next_height: step_unchecked(x, at_height),
            })
        })
        .collect()
}

/// Boolean raster of `|x^{x^y+y} ln²x| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major: `cells[i * ys.len() + j]` is the cell at `(xs[i], ys[j])`.
    pub cells: Vec<bool>,
}

impl RegionGrid {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.ys.len() + j]
    }
}

pub fn region_scan(
    x_range: (f64, f64),
    y_range: (f64, f64),
    grid: (usize, usize),
) -> Result<RegionGrid> {
    check_range(x_range.0, x_range.1, "x")?;
    check_range(y_range.0, y_range.1, "y")?;
    if grid.0 < 2 || grid.1 < 2 {
        return Err(domain(format!(
            "grid dimensions must be at least 2x2, got {}x{}",
            grid.0, grid.1
        )));
    }
    let xs = linspace(x_range.0, x_range.1, grid.0);
    let ys = linspace(y_range.0, y_range.1, grid.1);
    let mut cells = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            cells.push(in_double_region(x, y)?);
        }
    }
    Ok(RegionGrid { xs, ys, cells })
}
