//! Parameter types of the two-group model and the high temperature criterion.
//!
//! The inverse temperature is absorbed into the coupling matrix, so a
//! configuration with group magnetizations `(s1, s2)` has Gibbs weight
//! `exp(s'Js / 2N)`.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute slack below which a regime inequality counts as an equality.
pub const REGIME_TOLERANCE: f64 = 1e-9;

/// Symmetric positive definite coupling matrix `[[j1, jbar], [jbar, j2]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    j1: f64,
    j2: f64,
    jbar: f64,
}

impl Coupling {
    pub fn new(j1: f64, j2: f64, jbar: f64) -> Result<Self> {
        if !(j1.is_finite() && j2.is_finite() && jbar.is_finite()) {
            return Err(Error::InvalidParameter("coupling entries must be finite".into()));
        }
        if j1 <= 0.0 || j2 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "J1 > 0 and J2 > 0 required (got J1 = {j1}, J2 = {j2})"
            )));
        }
        if jbar < 0.0 {
            return Err(Error::InvalidParameter(format!("Jbar >= 0 required (got {jbar})")));
        }
        let delta = j1 * j2 - jbar * jbar;
        if delta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Delta = J1*J2 - Jbar^2 > 0 required (got {delta})"
            )));
        }
        Ok(Self { j1, j2, jbar })
    }

    /// Diagonal coupling, the independent-groups case.
    pub fn independent(j1: f64, j2: f64) -> Result<Self> {
        Self::new(j1, j2, 0.0)
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn j2(&self) -> f64 {
        self.j2
    }

    pub fn jbar(&self) -> f64 {
        self.jbar
    }

    /// Determinant `J1*J2 - Jbar^2`.
    pub fn delta(&self) -> f64 {
        self.j1 * self.j2 - self.jbar * self.jbar
    }

    /// `s'Js`, twice the energy scale before division by `N`.
    pub fn quadratic_form(&self, s1: f64, s2: f64) -> f64 {
        self.j1 * s1 * s1 + self.j2 * s2 * s2 + 2.0 * self.jbar * s1 * s2
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J1={}, J2={}, Jbar={}", self.j1, self.j2, self.jbar)
    }
}

/// Entries of `J^-1 = [[l1, -lbar], [-lbar, l2]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseCoupling {
    pub l1: f64,
    pub l2: f64,
    pub lbar: f64,
}

impl InverseCoupling {
    /// Determinant `l1*l2 - lbar^2`, equal to `1/Delta`.
    pub fn det(&self) -> f64 {
        self.l1 * self.l2 - self.lbar * self.lbar
    }

    /// Inverts back to the coupling matrix.
    pub fn to_coupling(&self) -> Result<Coupling> {
        let det = self.det();
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::Singular(format!("inverse coupling has determinant {det}")));
        }
        Coupling::new(self.l2 / det, self.l1 / det, self.lbar / det)
    }
}

/// Inverse of the coupling matrix.
pub fn inverse_coupling(coupling: &Coupling) -> Result<InverseCoupling> {
    let delta = coupling.delta();
    if delta <= 0.0 {
        return Err(Error::Singular(format!("Delta = {delta} is not positive")));
    }
    Ok(InverseCoupling {
        l1: coupling.j2 / delta,
        l2: coupling.j1 / delta,
        lbar: coupling.jbar / delta,
    })
}

impl Coupling {
    pub fn inverse(&self) -> InverseCoupling {
        // Delta > 0 is a construction invariant.
        inverse_coupling(self).expect("coupling invariant guarantees Delta > 0")
    }
}

/// Limiting group fractions `alpha_nu = lim N_nu / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupWeights {
    alpha1: f64,
    alpha2: f64,
}

impl GroupWeights {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        let ok = |a: f64| a.is_finite() && (0.0..=1.0).contains(&a);
        if !ok(alpha1) || !ok(alpha2) {
            return Err(Error::InvalidParameter(format!(
                "group fractions must lie in [0, 1] (got {alpha1}, {alpha2})"
            )));
        }
        if alpha1 + alpha2 > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "alpha1 + alpha2 <= 1 required (got {})",
                alpha1 + alpha2
            )));
        }
        Ok(Self { alpha1, alpha2 })
    }

    /// Equal fractions `alpha` for both groups.
    pub fn symmetric(alpha: f64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    /// Fractions `N1/N`, `N2/N` of a finite model.
    pub fn of_model(model: &FiniteModel) -> Self {
        let n = model.n() as f64;
        Self {
            alpha1: model.n1() as f64 / n,
            alpha2: model.n2() as f64 / n,
        }
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
}

/// Finite system: `n1` spins in group 1 and `n2` in group 2, `N = n1 + n2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteModel {
    n1: usize,
    n2: usize,
}

impl FiniteModel {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "both groups must be nonempty (got N1 = {n1}, N2 = {n2})"
            )));
        }
        Ok(Self { n1, n2 })
    }

    /// Checks `n1 + n2 == n`; the exact engine models no remainder population.
    pub fn with_total(n: usize, n1: usize, n2: usize) -> Result<Self> {
        if n1 + n2 != n {
            return Err(Error::InvalidParameter(format!(
                "N1 + N2 = N required by the exact engine (got {n1} + {n2} != {n})"
            )));
        }
        Self::new(n1, n2)
    }

    /// Group sizes `round(alpha_nu * n)`, rejecting a nonzero remainder.
    pub fn from_weights(n: usize, weights: &GroupWeights) -> Result<Self> {
        let n1 = (weights.alpha1() * n as f64).round() as usize;
        let n2 = (weights.alpha2() * n as f64).round() as usize;
        Self::with_total(n, n1, n2)
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }
}

/// `+s'Js / (2N)`, the negative energy of a configuration with group
/// magnetizations `(s1, s2)`.
pub fn gibbs_log_weight(coupling: &Coupling, n: usize, s1: i64, s2: i64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    if s1.unsigned_abs() as usize > n || s2.unsigned_abs() as usize > n {
        return Err(Error::Domain(format!("|s| must not exceed N = {n} (got s1 = {s1}, s2 = {s2})")));
    }
    Ok(coupling.quadratic_form(s1 as f64, s2 as f64) / (2.0 * n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    HighTemperature,
    Boundary,
    LowTemperature,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::HighTemperature => "HighTemperature",
            RegimeTag::Boundary => "Boundary",
            RegimeTag::LowTemperature => "LowTemperature",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of the high temperature test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    /// Smallest of the three slacks.
    pub margin: f64,
    /// `1/a1 - J1`, `1/a2 - J2`, `(1/a1 - J1)(1/a2 - J2) - Jbar^2`.
    pub slacks: [f64; 3],
}

impl Regime {
    pub fn is_high_temperature(&self) -> bool {
        self.tag == RegimeTag::HighTemperature
    }
}

/// Classifies `(J, alpha)` by the three inequalities
/// `J1 < 1/a1`, `J2 < 1/a2`, `Jbar^2 < (1/a1 - J1)(1/a2 - J2)`.
///
/// A zero fraction makes its inequality, and the product inequality,
/// hold with infinite slack.
pub fn classify_regime(coupling: &Coupling, weights: &GroupWeights) -> Regime {
    let reciprocal_slack = |alpha: f64, j: f64| {
        if alpha == 0.0 {
            f64::INFINITY
        } else {
            1.0 / alpha - j
        }
    };
    let s1 = reciprocal_slack(weights.alpha1, coupling.j1);
    let s2 = reciprocal_slack(weights.alpha2, coupling.j2);
    let s3 = if s1.is_infinite() || s2.is_infinite() {
        f64::INFINITY
    } else {
        s1 * s2 - coupling.jbar * coupling.jbar
    };
    let margin = s1.min(s2).min(s3);
    let tag = if margin.abs() <= REGIME_TOLERANCE {
        RegimeTag::Boundary
    } else if margin > 0.0 {
        RegimeTag::HighTemperature
    } else {
        RegimeTag::LowTemperature
    };
    Regime {
        tag,
        margin,
        slacks: [s1, s2, s3],
    }
}

/// `J^-1 - diag(alpha)` is positive definite, by leading principal minors
/// of a directly inverted matrix.
pub fn regime_matrix_form(coupling: &Coupling, weights: &GroupWeights) -> bool {
    let j = [[coupling.j1, coupling.jbar], [coupling.jbar, coupling.j2]];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let inv = [
        [j[1][1] / det, -j[0][1] / det],
        [-j[1][0] / det, j[0][0] / det],
    ];
    let m = [
        [inv[0][0] - weights.alpha1, inv[0][1]],
        [inv[1][0], inv[1][1] - weights.alpha2],
    ];
    let minor1 = m[0][0];
    let minor2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    minor1 > REGIME_TOLERANCE && minor2 > REGIME_TOLERANCE
}

/// Positivity of the landscape Hessian at the origin:
/// `L1 > a1` and `(L1 - a1)(L2 - a2) > Lbar^2`.
pub fn regime_hessian_form(coupling: &Coupling, weights: &GroupWeights) -> bool {
    let inv = coupling.inverse();
    let d1 = inv.l1 - weights.alpha1;
    let d2 = inv.l2 - weights.alpha2;
    d1 > 0.0 && d1 * d2 > inv.lbar * inv.lbar
}
