mod common;

use std::f64::consts::SQRT_2;

use cw2_core::asymptotics::{
    asymptotic_moment, clt_covariance, critical_density, find_minima, one_group_m,
    special_case_mstar, CltCovariance, Landscape, StationaryKind,
};
use cw2_core::combinat::{enumerate_profiles, multiplicity, profile_of, MultiIndex};
use cw2_core::exact::{exact_distribution, sample, Scaling};
use cw2_core::gaussmom::{moment_closed, moment_pairings, moment_recursive, Covariance2};
use cw2_core::model::{
    classify_regime, regime_hessian_form, regime_matrix_form, Coupling, FiniteModel, GroupWeights,
    RegimeTag, REGIME_TOLERANCE,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn coupling_strategy() -> impl Strategy<Value = Coupling> {
    (0.05f64..3.0, 0.05f64..3.0, 0.0f64..0.95)
        .prop_map(|(j1, j2, f)| Coupling::new(j1, j2, f * (j1 * j2).sqrt()).unwrap())
}

fn weights_strategy() -> impl Strategy<Value = GroupWeights> {
    (0.0f64..1.0, 0.0f64..1.0).prop_map(|(a, f)| GroupWeights::new(a, f * (1.0 - a)).unwrap())
}

fn high_temperature() -> impl Strategy<Value = (Coupling, GroupWeights)> {
    (coupling_strategy(), weights_strategy())
        .prop_filter("high temperature", |(c, w)| classify_regime(c, w).margin > 1e-3)
}

fn covariance_strategy() -> impl Strategy<Value = Covariance2> {
    (0.0f64..2.0, 0.0f64..2.0, -1.0f64..1.0)
        .prop_map(|(a, b, r)| Covariance2::new(a, b, r * (a * b).sqrt()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn table_is_normalized_symmetric_and_on_lattice(
        n1 in 1usize..30, n2 in 1usize..30, c in coupling_strategy()
    ) {
        let table = exact_distribution(&FiniteModel::new(n1, n2).unwrap(), &c).unwrap();
        prop_assert!((table.total_mass() - 1.0).abs() < 1e-12);
        for (s1, s2, p) in table.iter() {
            prop_assert_eq!(p, table.prob(-s1, -s2));
            prop_assert!((s1 + n1 as i64) % 2 == 0 && (s2 + n2 as i64) % 2 == 0);
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert_eq!(table.prob(n1 as i64 + 1, 0), 0.0);
        prop_assert!((table.moment(0, 0, Scaling::PerSpin) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_parity(n1 in 4usize..20, n2 in 4usize..20, c in coupling_strategy(),
                          k in 0usize..4, l in 0usize..4) {
        let table = exact_distribution(&FiniteModel::new(n1, n2).unwrap(), &c).unwrap();
        let corr = table.correlation(k, l).unwrap();
        if (k + l) % 2 == 1 {
            prop_assert!(corr.abs() < 1e-14);
        } else if k % 2 == 0 && l % 2 == 0 {
            prop_assert!(corr > 0.0);
        }
    }

    #[test]
    fn zero_cross_coupling_factorizes(n1 in 1usize..15, n2 in 1usize..15,
                                      j1 in 0.1f64..2.0, j2 in 0.1f64..2.0) {
        let table = exact_distribution(
            &FiniteModel::new(n1, n2).unwrap(),
            &Coupling::independent(j1, j2).unwrap(),
        ).unwrap();
        let m1 = table.marginal1();
        let m2 = table.marginal2();
        for (a, &(s1, p1)) in m1.iter().enumerate() {
            for &(s2, p2) in &m2 {
                prop_assert!((table.prob(s1, s2) - p1 * p2).abs() < 1e-12, "row {}", a);
            }
        }
    }

    #[test]
    fn regime_formulations_agree(c in coupling_strategy(), w in weights_strategy()) {
        let regime = classify_regime(&c, &w);
        prop_assume!(regime.margin.abs() > REGIME_TOLERANCE);
        let high = regime.tag == RegimeTag::HighTemperature;
        prop_assert_eq!(high, regime_matrix_form(&c, &w));
        prop_assert_eq!(high, regime_hessian_form(&c, &w));
    }

    #[test]
    fn substitution_identity(c in coupling_strategy(), w in weights_strategy(),
                             y1 in -2.0f64..2.0, y2 in -2.0f64..2.0) {
        let ls = Landscape::new(&c, &w);
        let ft = ls.eval_f_t(y1.tanh(), y2.tanh()).unwrap();
        prop_assert!((ft - 2.0 * ls.eval_f_y(y1, y2)).abs() < 1e-10);
    }

    #[test]
    fn covariance_consistency((c, w) in high_temperature()) {
        let direct = clt_covariance(&c, &w).unwrap();
        let sigma = Landscape::new(&c, &w).sigma().unwrap();
        prop_assert!(sigma.s12 >= 0.0);
        let via = CltCovariance::from_sigma(&sigma, &w);
        prop_assert!(direct.max_abs_diff(&via) < 1e-10);
        prop_assert!(direct.c12 >= 0.0);
        prop_assert!(direct.c11 > 0.0 && direct.c11 * direct.c22 - direct.c12 * direct.c12 > 0.0);
    }

    #[test]
    fn strictly_convex_in_high_temperature((c, w) in high_temperature()) {
        let ls = Landscape::new(&c, &w);
        for a in 0..9 {
            for b in 0..9 {
                let h = ls.hessian_y(-4.0 + a as f64, -4.0 + b as f64);
                prop_assert!(h.is_positive_definite());
            }
        }
    }

    #[test]
    fn high_temperature_minimum_is_origin((c, w) in high_temperature()) {
        let pts = find_minima(&Landscape::new(&c, &w)).unwrap();
        prop_assert_eq!(pts.len(), 1);
        prop_assert_eq!(pts[0].kind, StationaryKind::Minimum);
        prop_assert!(pts[0].y1.abs() < 1e-9 && pts[0].y2.abs() < 1e-9);
    }

    #[test]
    fn moment_routes_agree(cov in covariance_strategy(), k in 0usize..9, l in 0usize..9) {
        let p = moment_pairings(k, l, &cov).unwrap();
        let scale = p.abs().max(1.0);
        prop_assert!((moment_recursive(k, l, &cov) - p).abs() / scale < 1e-9);
        prop_assert!((moment_closed(k, l, &cov) - p).abs() / scale < 1e-9);
        prop_assert!((moment_closed(l, k, &cov.transposed()) - p).abs() / scale < 1e-9);
    }

    #[test]
    fn asymptotic_moments_are_gaussian((c, w) in high_temperature(), k in 0usize..6, l in 0usize..6) {
        let ls = Landscape::new(&c, &w);
        let target = moment_closed(k, l, &clt_covariance(&c, &w).unwrap().as_covariance());
        let got = asymptotic_moment(&ls, k, l).unwrap();
        prop_assert!((got - target).abs() / target.abs().max(1.0) < 1e-9);
    }

    #[test]
    fn asymptotic_moment_recursion((c, w) in high_temperature(), k in 0usize..7, l in 1usize..7) {
        prop_assume!(k + l <= 8);
        let ls = Landscape::new(&c, &w);
        let m = |a: usize, b: usize| asymptotic_moment(&ls, a, b).unwrap();
        let lhs = m(k + 2, l);
        let rhs = (k + 1) as f64 * m(2, 0) * m(k, l) + l as f64 * m(1, 1) * m(k + 1, l - 1);
        prop_assert!((lhs - rhs).abs() / lhs.abs().max(1.0) < 1e-9);
    }

    #[test]
    fn mstar_residual(j in 0.2f64..5.0, f in 0.0f64..0.95, alpha in 0.01f64..1.0) {
        let jbar = f * j;
        let m = special_case_mstar(j, jbar, alpha).unwrap();
        let residual = m / (j + jbar) - SQRT_2 * alpha * (m / SQRT_2).tanh();
        prop_assert!(residual.abs() < 1e-10);
        let critical = alpha * (j + jbar);
        if critical > 1.0 + 1e-6 {
            prop_assert!(m > 0.0);
        } else if critical <= 1.0 {
            prop_assert_eq!(m, 0.0);
        }
    }

    #[test]
    fn one_group_residual(beta in 1.01f64..20.0) {
        let m = one_group_m(beta);
        prop_assert!(m > 0.0 && m < 1.0);
        prop_assert!(((beta * m).tanh() - m).abs() < 1e-10);
    }

    #[test]
    fn critical_density_is_even(x in -6.0f64..6.0, alpha in 0.05f64..1.0) {
        prop_assert_eq!(critical_density(x, alpha), critical_density(-x, alpha));
    }

    #[test]
    fn profile_of_matches_enumeration(entries in proptest::collection::vec(1usize..7, 1..7)) {
        let n = 6;
        let len = entries.len();
        let profile = profile_of(&MultiIndex::new(entries, n).unwrap());
        prop_assert!(enumerate_profiles(len, n).contains(&profile));
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>()) {
        let table = exact_distribution(
            &FiniteModel::new(5, 7).unwrap(),
            &Coupling::new(0.9, 1.1, 0.3).unwrap(),
        ).unwrap();
        let a = sample(&table, seed, 200);
        prop_assert_eq!(&a, &sample(&table, seed, 200));
        for (s1, s2) in a {
            prop_assert!(table.prob(s1, s2) > 0.0);
        }
    }
}

#[test]
fn mstar_threshold_on_grid() {
    let j = 2.0;
    for a in 0..50 {
        for b in 0..50 {
            let jbar = 1.9 * a as f64 / 49.0;
            let alpha = 0.02 + 0.98 * b as f64 / 49.0;
            let critical = alpha * (j + jbar);
            if (critical - 1.0).abs() < 1e-9 {
                continue;
            }
            let m = special_case_mstar(j, jbar, alpha).unwrap();
            assert_eq!(m > 0.0, critical > 1.0, "Jbar {jbar}, alpha {alpha}");
        }
    }
}

#[test]
fn profile_multiplicities_sum_to_power() {
    for len in 1..=8usize {
        for n in 1..=12usize {
            let total: BigUint = enumerate_profiles(len, n).iter().map(multiplicity).sum();
            assert_eq!(total, BigUint::from(n).pow(len as u32), "L = {len}, N = {n}");
        }
    }
}

#[test]
fn exhaustive_grouping_matches_multiplicity() {
    for len in 1..=5usize {
        for n in 1..=6usize {
            for (counts, c) in common::profiles_by_enumeration(len, n) {
                let p = cw2_core::combinat::ProfileVector::new(counts, n).unwrap();
                assert_eq!(multiplicity(&p), BigUint::from(c));
            }
        }
    }
}
