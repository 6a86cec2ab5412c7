//! Limit theory: the landscape `F`, its Hessian and stationary points, the
//! CLT covariance, correlation and moment asymptotics, finite-N Laplace
//! integrals and the fixed-point magnetizations.

mod clt;
mod critical;
mod fixed_point;
mod landscape;
mod laplace;
pub mod lemma;
mod minima;

pub use clt::{asymptotic_correlation, asymptotic_moment, clt_covariance, CltCovariance};
pub use critical::{critical_density, critical_density_moments, DensityMoments};
pub use fixed_point::{one_group_m, special_case_mstar};
pub use landscape::{l_transform, Landscape, Sym2};
pub use laplace::{laplace_integral, laplace_integral_ratio, LAPLACE_ABS_TOL};
pub use minima::{find_minima, global_minima, StationaryKind, StationaryPoint};
