//! Moments `m_{K,L} = E(Z1^K Z2^L)` of a centered bivariate normal vector.
//!
//! Three independent routes are provided: brute-force Isserlis pairings, the
//! two-term recursions, and closed-form sums over the number of mixed pairs.

use crate::error::{Error, Result};

/// Largest `K + L` accepted by [`moment_pairings`].
pub const MAX_PAIRING_ORDER: usize = 16;

/// Covariance `[[s11, s12], [s12, s22]]` of a bivariate normal vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance2 {
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
}

impl Covariance2 {
    /// Validates positive semidefiniteness up to `1e-12`.
    pub fn new(s11: f64, s22: f64, s12: f64) -> Result<Self> {
        if !(s11.is_finite() && s22.is_finite() && s12.is_finite()) {
            return Err(Error::InvalidParameter("covariance entries must be finite".into()));
        }
        if s11 < 0.0 || s22 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "variances must be nonnegative (got {s11}, {s22})"
            )));
        }
        if s11 * s22 - s12 * s12 < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "covariance is not positive semidefinite (det = {})",
                s11 * s22 - s12 * s12
            )));
        }
        Ok(Self { s11, s22, s12 })
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }

    /// Swaps the two coordinates.
    pub fn transposed(&self) -> Self {
        Self {
            s11: self.s22,
            s22: self.s11,
            s12: self.s12,
        }
    }

    fn entry(&self, a: bool, b: bool) -> f64 {
        match (a, b) {
            (false, false) => self.s11,
            (true, true) => self.s22,
            _ => self.s12,
        }
    }
}

/// `n!!` with the convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Sum over all pair partitions of `{1..K+L}` of products of pair covariances
/// (Isserlis). Positions `1..=K` carry `Z1`, the rest `Z2`.
pub fn moment_pairings(k: usize, l: usize, cov: &Covariance2) -> Result<f64> {
    let order = k + l;
    if order > MAX_PAIRING_ORDER {
        return Err(Error::Complexity(order));
    }
    if order % 2 == 1 {
        return Ok(0.0);
    }
    // labels[i] == true marks a Z2 position.
    let labels: Vec<bool> = (0..order).map(|i| i >= k).collect();

    fn pair_up(remaining: u32, labels: &[bool], cov: &Covariance2) -> f64 {
        if remaining == 0 {
            return 1.0;
        }
        let first = remaining.trailing_zeros() as usize;
        let rest = remaining & !(1 << first);
        let mut total = 0.0;
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let c = cov.entry(labels[first], labels[j]);
            if c != 0.0 {
                total += c * pair_up(rest & !(1 << j), labels, cov);
            }
        }
        total
    }

    let all = if order == 0 { 0 } else { (1u32 << order) - 1 };
    Ok(pair_up(all, &labels, cov))
}

/// Table of `m_{k,l}` for `k <= max_k`, `l <= max_l`, filled by the
/// recursions
///
/// `m_{K,L+2} = K m_{1,1} m_{K-1,L+1} + (L+1) m_{0,2} m_{K,L}` and
/// `m_{K+2,L} = (K+1) m_{2,0} m_{K,L} + L m_{1,1} m_{K+1,L-1}`,
///
/// with moments of negative order taken as zero.
#[derive(Debug, Clone)]
pub struct MomentTable {
    max_k: usize,
    max_l: usize,
    values: Vec<f64>,
}

impl MomentTable {
    pub fn new(cov: &Covariance2, max_k: usize, max_l: usize) -> Self {
        // Row k needs row k-1 up to column l+1, so carry extra columns.
        let width = max_l + max_k + 1;
        let rows = max_k + 1;
        let mut v = vec![0.0; rows * width];
        let at = |k: usize, l: usize| k * width + l;

        // Row 0: m_{0,L+2} = (L+1) m_{0,2} m_{0,L}.
        v[at(0, 0)] = 1.0;
        for l in 2..width {
            v[at(0, l)] = (l - 1) as f64 * cov.s22 * v[at(0, l - 2)];
        }
        if rows > 1 {
            // Row 1 from the first recursion with K = 1.
            if width > 1 {
                v[at(1, 1)] = cov.s12;
            }
            for l in 2..width {
                v[at(1, l)] = cov.s12 * v[at(0, l - 1)] + (l - 1) as f64 * cov.s22 * v[at(1, l - 2)];
            }
        }
        // Rows k >= 2 from the second recursion with K = k - 2.
        for k in 2..rows {
            let row_width = width - (k - 1);
            for l in 0..row_width {
                let mut m = (k - 1) as f64 * cov.s11 * v[at(k - 2, l)];
                if l >= 1 {
                    m += l as f64 * cov.s12 * v[at(k - 1, l - 1)];
                }
                v[at(k, l)] = m;
            }
        }
        Self {
            max_k,
            max_l,
            values: v,
        }
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        assert!(k <= self.max_k && l <= self.max_l, "moment ({k}, {l}) outside table");
        if (k + l) % 2 == 1 {
            return 0.0;
        }
        self.values[k * (self.max_l + self.max_k + 1) + l]
    }
}

/// `m_{K,L}` by the recursions; see [`MomentTable`].
pub fn moment_recursive(k: usize, l: usize, cov: &Covariance2) -> f64 {
    MomentTable::new(cov, k, l).get(k, l)
}

/// `m_{K,L}` from the closed-form sums over the number of mixed pairs.
///
/// Each summand is evaluated as `s11^a s22^b s12^c` so the result stays
/// finite for degenerate covariances.
pub fn moment_closed(k: usize, l: usize, cov: &Covariance2) -> f64 {
    if (k + l) % 2 == 1 {
        return 0.0;
    }
    let kl = factorial(k) * factorial(l);
    if k % 2 == 0 {
        let (hk, hl) = (k / 2, l / 2);
        let scale = 2f64.powi((hk + hl) as i32);
        (0..=hk.min(hl))
            .map(|r| {
                let coeff = kl / (factorial(2 * r) * factorial(hk - r) * factorial(hl - r) * scale);
                coeff
                    * cov.s11.powi((hk - r) as i32)
                    * cov.s22.powi((hl - r) as i32)
                    * 4f64.powi(r as i32)
                    * cov.s12.powi(2 * r as i32)
            })
            .sum()
    } else {
        let (hk, hl) = ((k - 1) / 2, (l - 1) / 2);
        let scale = 2f64.powi(((k + l) / 2 - 1) as i32);
        (0..=hk.min(hl))
            .map(|r| {
                let coeff =
                    kl / (factorial(2 * r + 1) * factorial(hk - r) * factorial(hl - r) * scale);
                coeff
                    * cov.s11.powi((hk - r) as i32)
                    * cov.s22.powi((hl - r) as i32)
                    * 4f64.powi(r as i32)
                    * cov.s12.powi(2 * r as i32 + 1)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cov(s11: f64, s22: f64, s12: f64) -> Covariance2 {
        Covariance2::new(s11, s22, s12).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let c = cov(0.7, 1.3, 0.4);
        assert_eq!(moment_pairings(1, 1, &c).unwrap(), 0.4);
        assert_eq!(moment_pairings(2, 0, &c).unwrap(), 0.7);
        assert!((moment_pairings(2, 2, &cov(1.0, 1.0, 0.5)).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(moment_pairings(0, 0, &c).unwrap(), 1.0);
        assert_eq!(moment_pairings(3, 2, &c).unwrap(), 0.0);
        assert_eq!(moment_pairings(9, 8, &c), Err(Error::Complexity(17)));
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(moment_recursive(0, 0, &cov(1.0, 1.0, 0.5)), 1.0);
        assert!((moment_recursive(3, 1, &cov(1.0, 1.0, 0.5)) - 1.5).abs() < 1e-15);
        assert!((moment_recursive(4, 0, &cov(2.0, 1.0, 0.0)) - 12.0).abs() < 1e-14);
    }

    #[test]
    fn closed_examples() {
        assert!((moment_closed(2, 2, &cov(1.0, 1.0, 0.5)) - 1.5).abs() < 1e-15);
        assert!((moment_closed(6, 0, &cov(1.0, 1.0, 0.0)) - 15.0).abs() < 1e-14);
        assert_eq!(moment_closed(1, 2, &cov(0.3, 2.0, 0.1)), 0.0);
    }

    #[test]
    fn closed_form_handles_degenerate_covariance() {
        // s11 = 0: only moments without Z1 survive.
        let c = cov(0.0, 2.0, 0.0);
        assert_eq!(moment_closed(2, 2, &c), 0.0);
        assert!((moment_closed(0, 4, &c) - 12.0).abs() < 1e-14);
        assert_eq!(moment_closed(1, 1, &c), 0.0);
        // Perfectly correlated: Z2 = Z1.
        let c = cov(1.0, 1.0, 1.0);
        assert!((moment_closed(2, 2, &c) - 3.0).abs() < 1e-14);
        assert!((moment_closed(3, 3, &c) - 15.0).abs() < 1e-13);
    }

    #[test]
    fn double_factorial_convention() {
        assert_eq!(double_factorial(-1), 1.0);
        assert_eq!(double_factorial(0), 1.0);
        assert_eq!(double_factorial(5), 15.0);
        assert_eq!(double_factorial(6), 48.0);
    }

    #[test]
    fn covariance_validation() {
        assert!(Covariance2::new(-1.0, 1.0, 0.0).is_err());
        assert!(Covariance2::new(1.0, 1.0, 1.5).is_err());
        assert!(Covariance2::new(1.0, 1.0, 1.0).is_ok());
    }
}
