use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

const ROOT_TOL: f64 = 1e-12;
const BRACKET_FLOOR: f64 = 1e-12;

/// Bisection for a sign change of `g` on `[lo, hi]` with `g(lo) < 0 < g(hi)`.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positive root `m*` of `(L - Lbar) m = sqrt(2) a tanh(m / sqrt(2))` for
/// the symmetric coupling `J1 = J2 = J`, `a1 = a2 = a`, where
/// `L - Lbar = 1 / (J + Jbar)`; zero when `a (J + Jbar) <= 1`.
///
/// `m*` is the distance of each global minimizer of the landscape from the
/// origin; the minimizers sit at `(m*/sqrt(2)) (1, 1)` and its negative, so
/// the per-spin magnetization atoms are at `tanh(m*/sqrt(2))`.
pub fn special_case_mstar(j: f64, jbar: f64, alpha: f64) -> Result<f64> {
    if !(j > 0.0 && jbar >= 0.0 && j > jbar && alpha > 0.0 && j.is_finite() && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need J > Jbar >= 0 and alpha > 0 (got J = {j}, Jbar = {jbar}, alpha = {alpha})"
        )));
    }
    let slope = (j - jbar) / (j * j - jbar * jbar);
    if slope >= alpha {
        return Ok(0.0);
    }
    let g = |m: f64| slope * m - SQRT_2 * alpha * (m / SQRT_2).tanh();
    let hi = SQRT_2 * alpha / slope + 1.0;
    if g(BRACKET_FLOOR) >= 0.0 {
        // Threshold so close that the root is below the bracket floor.
        return Ok(0.0);
    }
    Ok(bisect(g, BRACKET_FLOOR, hi))
}

/// Largest solution of `tanh(beta m) = m`: zero for `beta <= 1`.
pub fn one_group_m(beta_eff: f64) -> f64 {
    if beta_eff.is_nan() || beta_eff <= 1.0 {
        return 0.0;
    }
    let h = |m: f64| m - (beta_eff * m).tanh();
    if h(BRACKET_FLOOR) >= 0.0 {
        return 0.0;
    }
    bisect(h, BRACKET_FLOOR, 1.0)
}
