//! Finite-size convergence toward the limit theory.

use cw2_core::asymptotics::{asymptotic_correlation, clt_covariance, laplace_integral_ratio, Landscape};
use cw2_core::exact::{exact_correlation, exact_distribution, sample, Scaling};
use cw2_core::model::{Coupling, FiniteModel, GroupWeights};

fn hot() -> (Coupling, GroupWeights) {
    (Coupling::new(1.0, 1.0, 0.5).unwrap(), GroupWeights::new(0.5, 0.5).unwrap())
}

#[test]
fn cross_moment_near_clt_covariance() {
    let (c, w) = hot();
    let table = exact_distribution(&FiniteModel::new(1000, 1000).unwrap(), &c).unwrap();
    let target = clt_covariance(&c, &w).unwrap().c12;
    let got = table.moment(1, 1, Scaling::SqrtSpin);
    assert!(got > 0.0);
    assert!((got - target).abs() / target < 0.10, "{got} vs {target}");
}

#[test]
fn lln_second_moment_decays_like_one_over_n() {
    let (c, _) = hot();
    let sizes = [250usize, 1000, 4000];
    let scaled: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let table = exact_distribution(&FiniteModel::new(n / 2, n / 2).unwrap(), &c).unwrap();
            table.moment(2, 0, Scaling::PerSpin) * n as f64
        })
        .collect();
    // N E(S1/N1)^2 stays bounded: fit c as the largest value.
    let fitted = scaled.iter().copied().fold(0.0, f64::max);
    for (&n, &v) in sizes.iter().zip(&scaled) {
        assert!(v / n as f64 <= fitted / n as f64 + 1e-15);
    }
    assert!(fitted < 20.0, "{scaled:?}");
}

#[test]
fn asymptotic_correlation_matches_exact_at_n_2000() {
    let (c, w) = hot();
    let exact = exact_correlation(&FiniteModel::new(1000, 1000).unwrap(), &c, 2, 0).unwrap();
    let asym = asymptotic_correlation(&Landscape::new(&c, &w), 2, 0, 2000).unwrap();
    assert!((asym - 2.0 / 2000.0 * 5.0 / 3.0).abs() < 1e-15);
    assert!((exact - asym).abs() / asym < 0.05, "{exact} vs {asym}");
}

#[test]
fn laplace_ratio_approaches_asymptotics() {
    let (c, w) = hot();
    let ls = Landscape::new(&c, &w);
    let rel = |n: usize| {
        let quad = laplace_integral_ratio(&ls, n, 2, 0).unwrap();
        let asym = asymptotic_correlation(&ls, 2, 0, n).unwrap();
        (quad - asym).abs() / asym
    };
    let (a, b) = (rel(100), rel(800));
    assert!(b < a, "{a} then {b}");
}

#[test]
fn sample_covariance_matches_exact_moments() {
    let (c, _) = hot();
    let model = FiniteModel::new(1000, 1000).unwrap();
    let table = exact_distribution(&model, &c).unwrap();
    let draws = sample(&table, 7, 100_000);
    let scale = (1000f64).sqrt();
    let n = draws.len() as f64;
    let mean_xy = draws.iter().map(|&(a, b)| a as f64 * b as f64).sum::<f64>() / n / 1000.0;
    let mean_xx = draws.iter().map(|&(a, _)| (a as f64 / scale).powi(2)).sum::<f64>() / n;
    let m11 = table.moment(1, 1, Scaling::SqrtSpin);
    let m20 = table.moment(2, 0, Scaling::SqrtSpin);
    // Standard errors from the exact fourth moments.
    let se11 = ((table.moment(2, 2, Scaling::SqrtSpin) - m11 * m11) / n).sqrt();
    let se20 = ((table.moment(4, 0, Scaling::SqrtSpin) - m20 * m20) / n).sqrt();
    assert!((mean_xy - m11).abs() < 5.0 * se11, "{mean_xy} vs {m11}");
    assert!((mean_xx - m20).abs() < 5.0 * se20, "{mean_xx} vs {m20}");
}

#[test]
fn uniform_table_sampling_frequencies() {
    let table = exact_distribution(
        &FiniteModel::new(1, 1).unwrap(),
        &Coupling::new(1e-12, 1e-12, 0.0).unwrap(),
    )
    .unwrap();
    let draws = sample(&table, 11, 100_000);
    let sigma = (0.25f64 * 0.75 / 1e5).sqrt();
    for state in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let freq = draws.iter().filter(|&&d| d == state).count() as f64 / 1e5;
        assert!((freq - 0.25).abs() < 4.0 * sigma, "{state:?}: {freq}");
    }
}

#[test]
fn low_temperature_bimodality() {
    // J + Jbar > 2 with a = 1/2: atoms at +-m with m = tanh((J + Jbar) m / 2).
    for (j, jbar) in [(3.0, 1.0), (2.0, 0.5)] {
        let table = exact_distribution(
            &FiniteModel::new(1000, 1000).unwrap(),
            &Coupling::new(j, j, jbar).unwrap(),
        )
        .unwrap();
        let atom = cw2_core::asymptotics::one_group_m(0.5 * (j + jbar));
        let mass = table.mass_near(atom, atom, 0.1) + table.mass_near(-atom, -atom, 0.1);
        assert!(mass > 0.95, "J {j}, Jbar {jbar}: {mass}");
    }
}
