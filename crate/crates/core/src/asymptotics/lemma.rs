//! Elementary inequalities behind the symmetric low-temperature minima.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::landscape::ln_cosh;

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation observed, in the units of the check.
    pub measured: f64,
    pub tolerance: f64,
}

/// Maximizer of a unimodal `f` on `[a, b]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `sup_t sin t cos t = 1/2`.
pub fn check_sin_cos_sup() -> LemmaCheck {
    let f = |t: f64| t.sin() * t.cos();
    let t = golden_max(f, 0.0, FRAC_PI_2, 1e-10);
    let grid_max = (0..=10_000)
        .map(|i| f(i as f64 * FRAC_PI_2 / 10_000.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let measured = (f(t).max(grid_max) - 0.5).abs();
    LemmaCheck {
        name: "sup sin(t)cos(t) = 1/2",
        passed: measured <= 1e-12,
        measured,
        tolerance: 1e-12,
    }
}

/// `x <= sinh x cosh x` on `[0, 5]`.
pub fn check_sinh_cosh_bound() -> LemmaCheck {
    let worst = (0..=5000)
        .map(|i| {
            let x = i as f64 * 1e-3;
            x - x.sinh() * x.cosh()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    LemmaCheck {
        name: "x <= sinh(x)cosh(x) on [0, 5]",
        passed: worst <= 0.0,
        measured: worst,
        tolerance: 0.0,
    }
}

/// `tanh(x) / x` strictly decreasing on a grid of `(0, 10]`.
pub fn check_tanh_ratio_decreasing() -> LemmaCheck {
    let g = |x: f64| x.tanh() / x;
    let worst_step = (1..1000)
        .map(|i| {
            let x = i as f64 * 0.01;
            g(x + 0.01) - g(x)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    LemmaCheck {
        name: "tanh(x)/x strictly decreasing",
        passed: worst_step < 0.0,
        measured: worst_step,
        tolerance: 0.0,
    }
}

/// `argmax_t cosh(r sin t) cosh(r cos t)` over `[0, pi/2]` is `pi/4` for
/// `r` in `{0.5, 1, 2, 4}`.
pub fn check_cosh_product_argmax() -> LemmaCheck {
    let measured = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&r| {
            let log_f = |t: f64| ln_cosh(r * t.sin()) + ln_cosh(r * t.cos());
            (golden_max(log_f, 0.0, FRAC_PI_2, 1e-12) - FRAC_PI_4).abs()
        })
        .fold(0.0, f64::max);
    LemmaCheck {
        name: "argmax cosh(r sin t)cosh(r cos t) = pi/4",
        passed: measured <= 1e-6,
        measured,
        tolerance: 1e-6,
    }
}

pub fn lemma_checks() -> Vec<LemmaCheck> {
    vec![
        check_sin_cos_sup(),
        check_sinh_cosh_bound(),
        check_tanh_ratio_decreasing(),
        check_cosh_product_argmax(),
    ]
}
