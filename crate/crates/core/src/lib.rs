//! Exact and asymptotic analysis of a two-group Curie-Weiss model with
//! heterogeneous coupling.
//!
//! The [`exact`] module computes finite-N laws of the group magnetizations
//! `(S1, S2)` exactly; [`asymptotics`] evaluates the limit theory (landscape,
//! CLT covariance, correlation asymptotics, fixed-point magnetizations) that
//! the exact results converge to.

pub mod error;
pub mod model;
pub mod combinat;
pub mod gaussmom;
pub mod exact;
pub mod quadrature;
pub mod asymptotics;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    classify_regime, gibbs_log_weight, inverse_coupling, Coupling, FiniteModel, GroupWeights,
    InverseCoupling, Regime, RegimeTag,
};
pub use gaussmom::Covariance2;
pub use exact::{MagnetizationTable, Scaling};
