use statrs::function::gamma::gamma;

use crate::error::Result;
use crate::quadrature::{integrate, QuadOptions};

/// Beyond this `|x|` the factor `exp(-x^4 / 12)` is below `1e-700`.
const CUTOFF: f64 = 12.0;

/// `f(x) = 2 (12 a)^(-1/4) Gamma(1/4)^(-1) exp(-x^4 / 12)`, the critical
/// limit density as displayed. Its total mass is `a^(-1/4)`, so it is a
/// probability density only for `a = 1`.
pub fn critical_density(x: f64, alpha: f64) -> f64 {
    2.0 * (12.0 * alpha).powf(-0.25) / gamma(0.25) * (-x.powi(4) / 12.0).exp()
}

/// Integrals of `f`, `x^2 f` and `x^4 f` over the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMoments {
    pub mass: f64,
    pub second: f64,
    pub fourth: f64,
}

impl DensityMoments {
    /// `E x^4 / E x^2`; independent of the normalizing constant.
    pub fn ratio(&self) -> f64 {
        self.fourth / self.second
    }
}

pub fn critical_density_moments(alpha: f64) -> Result<DensityMoments> {
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        ..QuadOptions::default()
    };
    let moment = |p: i32| integrate(|x| x.powi(p) * critical_density(x, alpha), -CUTOFF, CUTOFF, &opts);
    Ok(DensityMoments {
        mass: moment(0)?.value,
        second: moment(2)?.value,
        fourth: moment(4)?.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(critical_density(1.3, 0.7), critical_density(-1.3, 0.7));
        let f0 = 2.0 * (12.0f64 * 0.5).powf(-0.25) / gamma(0.25);
        assert!((critical_density(0.0, 0.5) - f0).abs() < 1e-15);
    }

    #[test]
    fn moments_match_gamma_closed_forms() {
        let m = critical_density_moments(0.5).unwrap();
        assert!((m.mass - 0.5f64.powf(-0.25)).abs() < 1e-12);
        // E x^4 = 3 and E x^2 = sqrt(12) Gamma(3/4) / Gamma(1/4).
        let second = 12f64.sqrt() * gamma(0.75) / gamma(0.25);
        assert!((m.ratio() - 3.0 / second).abs() < 1e-10);
    }
}
