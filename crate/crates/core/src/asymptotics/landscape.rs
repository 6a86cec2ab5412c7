use crate::error::{Error, Result};
use crate::gaussmom::Covariance2;
use crate::model::{Coupling, GroupWeights, InverseCoupling};

/// `ln cosh y` without overflow for large `|y|`.
pub(crate) fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `l(x) = ln((1 + x) / (1 - x))`.
pub fn l_transform(x: f64) -> f64 {
    2.0 * x.atanh()
}

/// Symmetric 2x2 matrix `[[h11, h12], [h12, h22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub h11: f64,
    pub h22: f64,
    pub h12: f64,
}

impl Sym2 {
    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.h11 + self.h22);
        let radius = (0.25 * (self.h11 - self.h22).powi(2) + self.h12 * self.h12).sqrt();
        [mean - radius, mean + radius]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.h11 > 0.0 && self.det() > 0.0
    }
}

/// The landscape
/// `F(y1, y2) = L1 y1^2 / 2 + L2 y2^2 / 2 - Lbar y1 y2 - a1 ln cosh y1 - a2 ln cosh y2`
/// and its `t = tanh y` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landscape {
    inv: InverseCoupling,
    weights: GroupWeights,
}

impl Landscape {
    pub fn new(coupling: &Coupling, weights: &GroupWeights) -> Self {
        Self {
            inv: coupling.inverse(),
            weights: *weights,
        }
    }

    /// Builds a landscape from raw inverse-coupling entries. No sign or
    /// definiteness checks are made, so perturbed entries can be studied.
    pub fn from_inverse(inv: InverseCoupling, weights: GroupWeights) -> Self {
        Self { inv, weights }
    }

    pub fn inverse(&self) -> &InverseCoupling {
        &self.inv
    }

    pub fn weights(&self) -> &GroupWeights {
        &self.weights
    }

    pub fn eval_f_y(&self, y1: f64, y2: f64) -> f64 {
        let InverseCoupling { l1, l2, lbar } = self.inv;
        0.5 * l1 * y1 * y1 + 0.5 * l2 * y2 * y2 - lbar * y1 * y2
            - self.weights.alpha1() * ln_cosh(y1)
            - self.weights.alpha2() * ln_cosh(y2)
    }

    /// `(F1, F2)`.
    pub fn eval_grad_f_y(&self, y1: f64, y2: f64) -> [f64; 2] {
        let InverseCoupling { l1, l2, lbar } = self.inv;
        [
            l1 * y1 - lbar * y2 - self.weights.alpha1() * y1.tanh(),
            l2 * y2 - lbar * y1 - self.weights.alpha2() * y2.tanh(),
        ]
    }

    /// Second derivatives of `F` in the `y` coordinates.
    pub fn hessian_y(&self, y1: f64, y2: f64) -> Sym2 {
        let sech2 = |y: f64| 1.0 / y.cosh().powi(2);
        Sym2 {
            h11: self.inv.l1 - self.weights.alpha1() * sech2(y1),
            h22: self.inv.l2 - self.weights.alpha2() * sech2(y2),
            h12: -self.inv.lbar,
        }
    }

    /// `(L1 l(t1)^2 - 2 Lbar l(t1) l(t2) + L2 l(t2)^2) / 4 + a1 ln(1 - t1^2) + a2 ln(1 - t2^2)`,
    /// which equals `2 F(atanh t1, atanh t2)`.
    pub fn eval_f_t(&self, t1: f64, t2: f64) -> Result<f64> {
        if !(t1.abs() < 1.0 && t2.abs() < 1.0) {
            return Err(Error::Domain(format!("need |t| < 1 (got ({t1}, {t2}))")));
        }
        Ok(self.f_t_unchecked(t1, t2))
    }

    pub(crate) fn f_t_unchecked(&self, t1: f64, t2: f64) -> f64 {
        let InverseCoupling { l1, l2, lbar } = self.inv;
        let (u, v) = (l_transform(t1), l_transform(t2));
        0.25 * (l1 * u * u - 2.0 * lbar * u * v + l2 * v * v)
            + self.weights.alpha1() * (-t1 * t1).ln_1p()
            + self.weights.alpha2() * (-t2 * t2).ln_1p()
    }

    /// Hessian of the `t` form at the origin:
    /// `[[2(L1 - a1), -2 Lbar], [-2 Lbar, 2(L2 - a2)]]`.
    pub fn hessian_origin(&self) -> Sym2 {
        Sym2 {
            h11: 2.0 * (self.inv.l1 - self.weights.alpha1()),
            h22: 2.0 * (self.inv.l2 - self.weights.alpha2()),
            h12: -2.0 * self.inv.lbar,
        }
    }

    /// Errors unless the origin Hessian is positive definite, which is the
    /// high temperature condition. The reported margin is its smallest
    /// eigenvalue.
    pub fn require_high_temperature(&self) -> Result<()> {
        let h = self.hessian_origin();
        if h.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::Regime {
                margin: h.eigenvalues()[0],
            })
        }
    }

    /// `Sigma = H^-1` for the origin Hessian.
    pub fn sigma(&self) -> Result<Covariance2> {
        let h = self.hessian_origin();
        if !h.is_positive_definite() {
            return Err(Error::Singular(format!(
                "origin Hessian is not positive definite (det = {:.6e})",
                h.det()
            )));
        }
        let det = h.det();
        Ok(Covariance2 {
            s11: h.h22 / det,
            s22: h.h11 / det,
            s12: -h.h12 / det,
        })
    }
}
