//! Interval constants of the power tower.
//!
//! The boundary bases are stored as the binary64 values of `exp(1/e)` and
//! `exp(-e)`; `1/e` additionally carries a low-order correction so that
//! distances to the Lambert W branch point can be formed without
//! cancellation.

use std::f64::consts::E;

/// `1/e` rounded to binary64.
pub const INV_E: f64 = 0.367_879_441_171_442_33;

/// `1/e - INV_E`, the rounding error of [`INV_E`].
pub const INV_E_LO: f64 = -1.242_875_367_278_836_3e-17;

/// `e^(1/e) ≈ 1.44467`: above this base the tower diverges.
pub const TANGENT_BASE: f64 = 1.444_667_861_009_766;

/// `e^(-e) ≈ 0.065988`: below this base the tower settles on a 2-cycle.
pub const CYCLE_BASE: f64 = 0.065_988_035_845_312_54;

/// Fixed point at the tangent base.
pub const TANGENT_FIXED_POINT: f64 = E;

/// Fixed point at the cycle base (where the 2-cycle collapses).
pub const CYCLE_FIXED_POINT: f64 = INV_E;

/// Distance to the next representable value above `x`.
pub(crate) fn ulp(x: f64) -> f64 {
    let x = x.abs();
    f64::from_bits(x.to_bits() + 1) - x
}

/// True if `x` is within one ulp of `c`.
pub(crate) fn within_ulp(x: f64, c: f64) -> bool {
    (x - c).abs() <= ulp(c)
}
