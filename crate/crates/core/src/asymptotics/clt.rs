use crate::error::{Error, Result};
use crate::gaussmom::{double_factorial, moment_closed, Covariance2};
use crate::model::{classify_regime, Coupling, GroupWeights};

use super::Landscape;

/// Limit covariance `C` of `(S1 / sqrt(N1), S2 / sqrt(N2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltCovariance {
    pub c11: f64,
    pub c22: f64,
    pub c12: f64,
}

impl CltCovariance {
    /// `C11 = 1 + 2 a1 s11`, `C22 = 1 + 2 a2 s22`, `C12 = 2 sqrt(a1 a2) s12`.
    pub fn from_sigma(sigma: &Covariance2, weights: &GroupWeights) -> Self {
        let (a1, a2) = (weights.alpha1(), weights.alpha2());
        Self {
            c11: 1.0 + 2.0 * a1 * sigma.s11,
            c22: 1.0 + 2.0 * a2 * sigma.s22,
            c12: 2.0 * (a1 * a2).sqrt() * sigma.s12,
        }
    }

    pub fn as_covariance(&self) -> Covariance2 {
        Covariance2 {
            s11: self.c11,
            s22: self.c22,
            s12: self.c12,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.c11 - other.c11)
            .abs()
            .max((self.c22 - other.c22).abs())
            .max((self.c12 - other.c12).abs())
    }
}

/// `C = [[1 - a2 J2, sqrt(a1 a2) Jbar], [sqrt(a1 a2) Jbar, 1 - a1 J1]] / D`
/// with `D = (1 - a1 J1)(1 - a2 J2) - a1 a2 Jbar^2`.
pub fn clt_covariance(coupling: &Coupling, weights: &GroupWeights) -> Result<CltCovariance> {
    let regime = classify_regime(coupling, weights);
    if !regime.is_high_temperature() {
        return Err(Error::Regime { margin: regime.margin });
    }
    let (a1, a2) = (weights.alpha1(), weights.alpha2());
    let (j1, j2, jbar) = (coupling.j1(), coupling.j2(), coupling.jbar());
    let d = (1.0 - a1 * j1) * (1.0 - a2 * j2) - a1 * a2 * jbar * jbar;
    Ok(CltCovariance {
        c11: (1.0 - a2 * j2) / d,
        c22: (1.0 - a1 * j1) / d,
        c12: (a1 * a2).sqrt() * jbar / d,
    })
}

/// Leading-order `E(X1...XK Y1...YL)`: `(2/N)^((K+L)/2) m_{K,L}(0, Sigma)`.
pub fn asymptotic_correlation(ls: &Landscape, k: usize, l: usize, n: usize) -> Result<f64> {
    ls.require_high_temperature()?;
    if (k + l) % 2 == 1 {
        return Ok(0.0);
    }
    let sigma = ls.sigma()?;
    Ok((2.0 / n as f64).powf((k + l) as f64 / 2.0) * moment_closed(k, l, &sigma))
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Limit of `E((S1 / sqrt(N1))^K (S2 / sqrt(N2))^L)`.
///
/// Each scaled sum is an independent standard normal part plus a part with
/// covariance `[[2 a1 s11, 2 sqrt(a1 a2) s12], [., 2 a2 s22]]`; the moment is
/// expanded binomially in both and summed over the number `r` of mixed
/// pairs of the second part.
pub fn asymptotic_moment(ls: &Landscape, k: usize, l: usize) -> Result<f64> {
    ls.require_high_temperature()?;
    if (k + l) % 2 == 1 {
        return Ok(0.0);
    }
    let sigma = ls.sigma()?;
    let (a1, a2) = (ls.weights().alpha1(), ls.weights().alpha2());
    let (b1, b2) = (2.0 * a1, 2.0 * a2);
    let cross = 2.0 * (a1 * a2).sqrt() * sigma.s12;
    let odd = k % 2 == 1;
    let shift = usize::from(odd);
    let mut total = 0.0;
    // Orders 2p + shift and 2q + shift of the correlated part.
    for p in 0..=(k - shift) / 2 {
        for q in 0..=(l - shift) / 2 {
            let (kp, lq) = (2 * p + shift, 2 * q + shift);
            let outer = binomial(k, kp)
                * double_factorial(k as i64 - kp as i64 - 1)
                * binomial(l, lq)
                * double_factorial(l as i64 - lq as i64 - 1);
            let mut inner = 0.0;
            for r in 0..=p.min(q) {
                let mixed = 2 * r + shift;
                inner += factorial(kp) * factorial(lq)
                    / (factorial(mixed) * factorial(p - r) * factorial(q - r) * 2f64.powi((p + q) as i32))
                    * (b1 * sigma.s11).powi((p - r) as i32)
                    * (b2 * sigma.s22).powi((q - r) as i32)
                    * 4f64.powi(r as i32)
                    * (b1 * b2).powi(r as i32)
                    * sigma.s12.powi(2 * r as i32)
                    * if odd { cross } else { 1.0 };
            }
            total += outer * inner;
        }
    }
    Ok(total)
}
