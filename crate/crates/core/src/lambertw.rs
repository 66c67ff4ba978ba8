//! Real Lambert W on both real branches, its truncated Maclaurin series,
//! and the closed-form tower fixed points `W(-ln x) / (-ln x)`.
//!
//! `W` inverts `w ↦ w e^w`. On the reals it has two branches meeting at
//! `(-1/e, -1)`: the principal branch (`w ≥ -1`, defined for `z ≥ -1/e`)
//! and the secondary branch (`w ≤ -1`, defined for `-1/e ≤ z < 0`).
//!
//! Evaluation starts from a branch-point expansion, a small-argument or
//! asymptotic guess, and is polished with Halley's iteration. Very close to
//! the branch point the expansion in `p = sqrt(2(ez + 1))` is used on its
//! own, since Halley steps there are dominated by cancellation in `w e^w - z`.

use std::f64::consts::E;

use crate::consts::{within_ulp, INV_E, INV_E_LO, TANGENT_BASE};
use crate::error::{domain, Result};
use crate::tower::check_base;

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `W_0`: `w ≥ -1`, defined for `z ≥ -1/e`.
    Principal,
    /// `W_{-1}`: `w ≤ -1`, defined for `-1/e ≤ z < 0`.
    Secondary,
}

/// Slack accepted below `-1/e` before reporting a domain error.
const BRANCH_SLACK: f64 = 1e-15;

/// Below this `p` the branch-point expansion is accurate to machine precision.
const SERIES_ONLY_P: f64 = 0.03;

/// Coefficients of `W` in powers of `p = sqrt(2(ez + 1))` around `z = -1/e`.
/// The secondary branch uses `-p`.
const BRANCH_POINT_SERIES: [f64; 10] = [
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680_863.0 / 43_545_600.0,
    -1963.0 / 204_120.0,
    226_287_557.0 / 37_623_398_400.0,
];

/// Maclaurin coefficients of the principal branch, `z - z² + 3/2 z³ - 8/3 z⁴`.
pub const W_SERIES: [f64; 4] = [1.0, -1.0, 3.0 / 2.0, -8.0 / 3.0];

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// Evaluates `sum coeffs[k-1] * t^k` term by term, powers by repeated product.
pub(crate) fn eval_power_sum(coeffs: &[f64], t: f64) -> f64 {
    let mut power = 1.0;
    let mut sum = 0.0;
    for &c in coeffs {
        power *= t;
        sum += c * power;
    }
    sum
}

fn halley(z: f64, mut w: f64, branch: Branch) -> f64 {
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - z;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let mut next = w - f / denom;
        // Keep the iterate on its branch.
        match branch {
            Branch::Principal if next < -1.0 => next = 0.5 * (w - 1.0),
            Branch::Secondary if next > -1.0 => next = 0.5 * (w - 1.0),
            _ => {}
        }
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs();
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Real Lambert W: the `w` on `branch` with `w e^w = z`.
pub fn lambert_w(z: f64, branch: Branch) -> Result<f64> {
    if !z.is_finite() {
        return Err(domain(format!("Lambert W argument must be finite, got {z}")));
    }
    if branch == Branch::Secondary && z >= 0.0 {
        return Err(domain(format!(
            "secondary Lambert W branch requires z < 0, got {z}"
        )));
    }
    // Distance to the branch point, formed without cancellation.
    let d = (z + INV_E) + INV_E_LO;
    if d < -BRANCH_SLACK {
        return Err(domain(format!("Lambert W requires z >= -1/e, got {z}")));
    }
    if d <= 0.0 {
        return Ok(-1.0);
    }
    if z == 0.0 {
        return Ok(0.0);
    }

    let p = (2.0 * E * d).sqrt();
    let signed_p = match branch {
        Branch::Principal => p,
        Branch::Secondary => -p,
    };
    if p < SERIES_ONLY_P {
        return Ok(horner(&BRANCH_POINT_SERIES, signed_p));
    }

    let guess = match branch {
        Branch::Principal if z < -0.32 => horner(&BRANCH_POINT_SERIES[..4], signed_p),
        Branch::Principal => {
            let l = z.ln_1p();
            l * (1.0 - l.ln_1p() / (2.0 + l))
        }
        Branch::Secondary if z < -0.25 => horner(&BRANCH_POINT_SERIES[..4], signed_p),
        Branch::Secondary => {
            let l1 = (-z).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        }
    };
    Ok(halley(z, guess, branch))
}

/// The truncated principal-branch series `z - z² + 3/2 z³ - 8/3 z⁴` up to `order`.
pub fn w_series(z: f64, order: usize) -> Result<f64> {
    if !(1..=W_SERIES.len()).contains(&order) {
        return Err(domain(format!("series order must be 1..=4, got {order}")));
    }
    Ok(eval_power_sum(&W_SERIES[..order], z))
}

/// `W(z)/z` for `z = -ln x`, with the removable singularity at `x = 1`.
fn fixed_point_from_branch(x: f64, branch: Branch) -> Result<f64> {
    let log_x = x.ln();
    if log_x.abs() < 1e-300 {
        return Ok(1.0);
    }
    let mut z = -log_x;
    if within_ulp(x, TANGENT_BASE) {
        // The tangent base itself: -ln x is -1/e and W(-1/e) = -1.
        z = -INV_E;
    }
    Ok(lambert_w(z, branch)? / z)
}

/// The attractive fixed point `y* = W(-ln x)/(-ln x)` of `y ↦ x^y`,
/// for `0 < x ≤ e^(1/e)`.
pub fn tower_fixed_point(x: f64) -> Result<f64> {
    check_base(x)?;
    if x > TANGENT_BASE * (1.0 + 1e-15) {
        return Err(domain(format!(
            "no real fixed point for x > e^(1/e), got {x}"
        )));
    }
    fixed_point_from_branch(x, Branch::Principal)
}

/// The repulsive fixed point of `y ↦ x^y` for `1 < x < e^(1/e)`, from the
/// secondary branch.
pub fn tower_fixed_point_repulsive(x: f64) -> Result<f64> {
    if !(x > 1.0 && x < TANGENT_BASE) || within_ulp(x, TANGENT_BASE) {
        return Err(domain(format!(
            "repulsive fixed point exists only for 1 < x < e^(1/e), got {x}"
        )));
    }
    fixed_point_from_branch(x, Branch::Secondary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::tower::tower_step;
    use std::f64::consts::SQRT_2;

    #[test]
    fn spot_values() {
        assert!((lambert_w(2.0, Branch::Principal).unwrap() - 0.852606).abs() < 1e-6);
        assert_eq!(lambert_w(0.0, Branch::Principal).unwrap(), 0.0);
        assert_eq!(lambert_w(-INV_E, Branch::Principal).unwrap(), -1.0);
        assert_eq!(lambert_w(-INV_E, Branch::Secondary).unwrap(), -1.0);
        assert!((lambert_w(E, Branch::Principal).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn secondary_against_bisection() {
        // Bisection of w e^w + 0.1 over [-20, -1], run to exhaustion.
        let oracle = -3.577_152_063_957_297_6;
        let w = lambert_w(-0.1, Branch::Secondary).unwrap();
        assert!(w < -1.0);
        assert!((w - oracle).abs() < 1e-14);
        assert!((w * w.exp() + 0.1).abs() < 1e-16);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(lambert_w(-0.5, Branch::Principal), Err(Error::Domain(_))));
        assert!(matches!(lambert_w(0.0, Branch::Secondary), Err(Error::Domain(_))));
        assert!(matches!(lambert_w(1.0, Branch::Secondary), Err(Error::Domain(_))));
        assert!(matches!(lambert_w(f64::NAN, Branch::Principal), Err(Error::Domain(_))));
        // Within the slack below the branch point.
        assert_eq!(lambert_w(-INV_E - 5e-16, Branch::Principal).unwrap(), -1.0);
    }

    #[test]
    fn near_branch_point_both_sides() {
        for &s in &[1e-14, 1e-10, 1e-6, 1e-4, 1e-3, 0.01] {
            let z = -INV_E + s;
            let w0 = lambert_w(z, Branch::Principal).unwrap();
            let w1 = lambert_w(z, Branch::Secondary).unwrap();
            assert!(w1 <= -1.0 && -1.0 <= w0, "s={s}: {w1} {w0}");
            assert!(((w0 * w0.exp() - z) / z).abs() < 1e-14);
            assert!(((w1 * w1.exp() - z) / z).abs() < 1e-14);
        }
    }

    #[test]
    fn large_and_tiny_arguments() {
        for &z in &[1e-300, 1e-20, 1e3, 1e10, 1e100, 1e300] {
            let w = lambert_w(z, Branch::Principal).unwrap();
            let lhs = w.ln() + w;
            assert!((lhs - z.ln()).abs() < 1e-13 * z.ln().abs().max(1.0), "z={z}");
        }
        let w = lambert_w(-1e-300, Branch::Secondary).unwrap();
        assert!(((-w).ln() + w - 1e-300f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn series_examples() {
        let direct = 0.1 - 0.01 + 0.0015 - (8.0 / 3.0) * 1e-4;
        assert!((w_series(0.1, 4).unwrap() - direct).abs() < 1e-16);
        assert!((w_series(0.1, 4).unwrap() - 0.091_233_333_333_333_35).abs() < 1e-16);
        assert_eq!(w_series(0.0, 4).unwrap(), 0.0);
        assert_eq!(W_SERIES, [1.0, -1.0, 1.5, -8.0 / 3.0]);
        assert_eq!(w_series(0.3, 1).unwrap(), 0.3);
        assert!(w_series(0.1, 0).is_err());
        assert!(w_series(0.1, 5).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        assert!((tower_fixed_point(SQRT_2).unwrap() - 2.0).abs() < 1e-12);
        assert!((tower_fixed_point(TANGENT_BASE).unwrap() - E).abs() < 1e-9);
        assert_eq!(tower_fixed_point(1.0).unwrap(), 1.0);
        assert!((tower_fixed_point(3f64.cbrt()).unwrap() - 2.47805).abs() < 5e-5);
        assert!((tower_fixed_point(crate::consts::CYCLE_BASE).unwrap() - INV_E).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_domain() {
        assert!(tower_fixed_point(0.0).is_err());
        assert!(tower_fixed_point(-1.0).is_err());
        assert!(tower_fixed_point(1.5).is_err());
        assert!(tower_fixed_point(TANGENT_BASE * (1.0 + 5e-16)).is_ok());
        assert!(tower_fixed_point_repulsive(1.0).is_err());
        assert!(tower_fixed_point_repulsive(0.5).is_err());
        assert!(tower_fixed_point_repulsive(TANGENT_BASE).is_err());
        assert!(tower_fixed_point_repulsive(1.5).is_err());
    }

    #[test]
    fn repulsive_examples() {
        assert!((tower_fixed_point_repulsive(SQRT_2).unwrap() - 4.0).abs() < 1e-9);
        // Bisection oracles on y = x^y for x = 1.4446: [e, 50] and [1, e].
        let x = 1.4446;
        let hi = tower_fixed_point_repulsive(x).unwrap();
        let lo = tower_fixed_point(x).unwrap();
        assert!((hi - 2.762_307_470_716_736_5).abs() < 1e-9);
        assert!((lo - 2.675_413_353_822_755).abs() < 1e-9);
        assert!((hi - E).abs() < 0.15 && (lo - E).abs() < 0.15);
        for &x in &[1.1, 1.2, 1.3, 1.4] {
            let y = tower_fixed_point_repulsive(x).unwrap();
            assert!((tower_step(x, y).unwrap() - y).abs() < 1e-9);
            assert!(y > tower_fixed_point(x).unwrap());
        }
    }
}
