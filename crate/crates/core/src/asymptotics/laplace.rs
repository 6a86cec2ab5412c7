use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d, QuadOptions};

use super::Landscape;

/// Absolute tolerance of each 2-D quadrature in [`laplace_integral_ratio`].
pub const LAPLACE_ABS_TOL: f64 = 1e-10;

/// `int_{(-1,1)^2} exp(-(N/2) F(t)) t1^K t2^L / ((1 - t1^2)(1 - t2^2)) dt`.
pub fn laplace_integral(ls: &Landscape, n: usize, k: usize, l: usize) -> Result<f64> {
    let half_n = 0.5 * n as f64;
    let integrand = |t1: f64, t2: f64| {
        if t1.abs() >= 1.0 || t2.abs() >= 1.0 {
            return 0.0;
        }
        let jac = (1.0 - t1 * t1) * (1.0 - t2 * t2);
        if jac <= 0.0 {
            return 0.0;
        }
        let weight = (-half_n * ls.f_t_unchecked(t1, t2)).exp();
        if weight == 0.0 {
            return 0.0;
        }
        weight * t1.powi(k as i32) * t2.powi(l as i32) / jac
    };
    let opts = QuadOptions {
        abs_tol: LAPLACE_ABS_TOL,
        rel_tol: 1e-10,
        initial_panels: 8usize.max((n as f64).sqrt().ceil() as usize),
        ..QuadOptions::default()
    };
    Ok(integrate_2d(integrand, (-1.0, 1.0), (-1.0, 1.0), &opts)?.value)
}

/// Ratio of the `(K, L)` integral to the `(0, 0)` integral: a finite-N
/// value of `E(X1...XK Y1...YL)`. When `a_nu = N_nu / N` it reproduces the
/// finite model exactly, up to quadrature error.
pub fn laplace_integral_ratio(ls: &Landscape, n: usize, k: usize, l: usize) -> Result<f64> {
    ls.require_high_temperature()?;
    if n < 10 {
        return Err(Error::InvalidParameter(format!("need N >= 10 (got {n})")));
    }
    if k == 0 && l == 0 {
        return Ok(1.0);
    }
    let base = laplace_integral(ls, n, 0, 0)?;
    Ok(laplace_integral(ls, n, k, l)? / base)
}
