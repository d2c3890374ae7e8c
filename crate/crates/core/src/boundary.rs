//! Regime boundaries in the `(p, θ)` plane.
//!
//! The fidelity boundary is where the left/right and up/down strategies
//! tie. It is located here by bisection on `F_lr − F_ud`, not by the
//! closed-form threshold, so the two can be checked against each other.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::min_error::min_error_threshold;
use crate::numeric::bisect_descending;
use crate::qubit::MirrorEnsemble;
use crate::strategy::abc_coefficients;

/// Smallest `p` used when bracketing; `F_lr − F_ud` vanishes identically at
/// `p = 0`.
pub const P_FLOOR: f64 = 1e-12;

const BRACKET_STEPS: usize = 256;

/// `F_lr − F_ud` at `(p, θ)`.
///
/// Both fidelities are close to 1 for small `p`, so the difference is
/// rewritten without cancellation: with `C ≥ |A|` it is
/// `(A² + B² − C²)/(√(A² + B²) + C)`, where the numerator is expanded as
/// `p(1 − x)[p(1 − x) + x]`, `x = cos2θ`; otherwise it is
/// `B²/(√(A² + B²) + |A|)`.
pub fn fidelity_gap(p: f64, theta: f64) -> f64 {
    let abc =
        abc_coefficients(&MirrorEnsemble::new(p, theta).expect("caller keeps (p, θ) in range"));
    let r = libm::hypot(abc.a, abc.b);
    if abc.c >= abc.a.abs() {
        let x = libm::cos(2.0 * theta);
        let u = p * (1.0 - x);
        u * (u + x) / (r + abc.c)
    } else {
        abc.b * abc.b / (r + abc.a.abs())
    }
}

/// The `p` at which the strategies tie for a given `θ`, by bisection to
/// `tol`. `None` when there is no interior tie (`θ ≤ π/4`).
pub fn fidelity_boundary_p(theta: f64, tol: f64) -> Option<f64> {
    // Up/down wins below the tie and left/right above it, so bracket the
    // first crossing from negative to nonnegative on a coarse grid.
    let g = |p: f64| -fidelity_gap(p, theta);
    let mut lo = P_FLOOR;
    if !(g(lo) > 0.0) {
        return None;
    }
    for i in 1..=BRACKET_STEPS {
        let hi = 0.5 * i as f64 / BRACKET_STEPS as f64;
        if hi <= lo {
            continue;
        }
        if g(hi) <= 0.0 {
            return bisect_descending(g, lo, hi, tol, 200);
        }
        lo = hi;
    }
    None
}

/// The `θ` (radians) at which the strategies tie for a given `p`, by
/// bisection on `[π/4, π/2]`. For `p ≤ 0` the search runs at
/// [`P_FLOOR`], which gives the `p → 0⁺` end of the curve.
pub fn fidelity_boundary_theta(p: f64, tol: f64) -> Option<f64> {
    let p = p.max(P_FLOOR);
    let g = |theta: f64| fidelity_gap(p, theta);
    if g(FRAC_PI_2) == 0.0 {
        return Some(FRAC_PI_2);
    }
    bisect_descending(g, FRAC_PI_4, FRAC_PI_2, tol, 200)
}

/// `(p, θ)` points on the fidelity boundary, one per requested `p`.
pub fn fidelity_boundary_curve(p_values: &[f64], tol: f64) -> Vec<(f64, f64)> {
    p_values
        .iter()
        .filter_map(|&p| fidelity_boundary_theta(p, tol).map(|t| (p, t)))
        .collect()
}

/// `(p, θ)` points where the minimum-error strategy changes form.
pub fn min_error_boundary_curve(theta_values: &[f64]) -> Vec<(f64, f64)> {
    theta_values
        .iter()
        .map(|&t| (min_error_threshold(t), t))
        .collect()
}
