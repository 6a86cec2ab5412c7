//! Self-check suite: oracle equivalences, the three moment routes, regime
//! formulations, the landscape substitution identity and the covariance
//! identities, each reported with the deviation it measured.

use num_bigint::BigUint;
use rand_chacha::ChaCha20Rng;

use crate::asymptotics::{
    asymptotic_moment, clt_covariance, lemma, CltCovariance, Landscape,
};
use crate::combinat::{enumerate_profiles, multiplicity};
use crate::exact::{brute_force_distribution, exact_distribution, next_unit, stream_rng};
use crate::gaussmom::{moment_closed, moment_pairings, moment_recursive, Covariance2};
use crate::model::{
    classify_regime, regime_hessian_form, regime_matrix_form, Coupling, FiniteModel, GroupWeights,
    InverseCoupling, RegimeTag, REGIME_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn within(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: measured <= tolerance,
            measured,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Negates `Lbar` in the landscape used by the covariance check; the
    /// check must then fail.
    pub flip_lbar_sign: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 20240901,
            flip_lbar_sign: false,
        }
    }
}

fn uniform(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * next_unit(rng)
}

/// A random coupling with `J1, J2` in `[0.05, 3)` and `Jbar < 0.95 sqrt(J1 J2)`.
pub fn random_coupling(rng: &mut ChaCha20Rng) -> Coupling {
    let j1 = uniform(rng, 0.05, 3.0);
    let j2 = uniform(rng, 0.05, 3.0);
    let jbar = uniform(rng, 0.0, 0.95) * (j1 * j2).sqrt();
    Coupling::new(j1, j2, jbar).expect("sampled coupling is valid")
}

pub fn random_weights(rng: &mut ChaCha20Rng) -> GroupWeights {
    let a1 = uniform(rng, 0.0, 1.0);
    let a2 = uniform(rng, 0.0, 1.0 - a1);
    GroupWeights::new(a1, a2).expect("sampled weights are valid")
}

/// Rejection-samples a parameter pair whose regime margin exceeds `1e-3`.
pub fn random_high_temperature(rng: &mut ChaCha20Rng) -> (Coupling, GroupWeights) {
    loop {
        let (c, w) = (random_coupling(rng), random_weights(rng));
        if classify_regime(&c, &w).margin > 1e-3 {
            return (c, w);
        }
    }
}

pub fn random_covariance(rng: &mut ChaCha20Rng) -> Covariance2 {
    let s11 = uniform(rng, 0.0, 2.0);
    let s22 = uniform(rng, 0.0, 2.0);
    let s12 = uniform(rng, -1.0, 1.0) * (s11 * s22).sqrt();
    Covariance2::new(s11, s22, s12).expect("sampled covariance is PSD")
}

fn oracle_check(rng: &mut ChaCha20Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for n1 in [4usize, 6, 8] {
        let model = FiniteModel::new(n1, 12 - n1).expect("valid sizes");
        for _ in 0..4 {
            let c = random_coupling(rng);
            let fast = exact_distribution(&model, &c).expect("small table");
            let slow = brute_force_distribution(&model, &c).expect("N = 12");
            for (s1, s2, p) in slow.iter() {
                worst = worst.max((p - fast.prob(s1, s2)).abs());
            }
        }
    }
    CheckResult::within("exact vs brute force (N = 12)", worst, 1e-12)
}

fn moment_routes_check(rng: &mut ChaCha20Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let cov = random_covariance(rng);
        for k in 0..=12usize {
            for l in 0..=(12 - k) {
                let p = moment_pairings(k, l, &cov).expect("order <= 12");
                let r = moment_recursive(k, l, &cov);
                let c = moment_closed(k, l, &cov);
                let scale = 1.0 + p.abs();
                worst = worst.max((p - r).abs() / scale).max((p - c).abs() / scale);
            }
        }
    }
    CheckResult::within("pairings = recursion = closed form (K+L <= 12)", worst, 1e-9)
}

fn regime_check(rng: &mut ChaCha20Rng) -> CheckResult {
    let mut mismatches = 0usize;
    for _ in 0..2000 {
        let (c, w) = (random_coupling(rng), random_weights(rng));
        let regime = classify_regime(&c, &w);
        if regime.margin.abs() <= REGIME_TOLERANCE {
            continue;
        }
        let direct = regime.tag == RegimeTag::HighTemperature;
        if direct != regime_matrix_form(&c, &w) || direct != regime_hessian_form(&c, &w) {
            mismatches += 1;
        }
    }
    CheckResult::within("regime formulations agree", mismatches as f64, 0.0)
}

fn substitution_check(rng: &mut ChaCha20Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let ls = Landscape::new(&random_coupling(rng), &random_weights(rng));
        for a in 0..21 {
            for b in 0..21 {
                let y1 = -2.0 + 0.2 * a as f64;
                let y2 = -2.0 + 0.2 * b as f64;
                let ft = ls.eval_f_t(y1.tanh(), y2.tanh()).expect("|tanh y| < 1");
                worst = worst.max((ft - 2.0 * ls.eval_f_y(y1, y2)).abs());
            }
        }
    }
    CheckResult::within("F_t(tanh y) = 2 F_y(y)", worst, 1e-10)
}

fn covariance_check(rng: &mut ChaCha20Rng, flip: bool) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (c, w) = random_high_temperature(rng);
        let direct = clt_covariance(&c, &w).expect("high temperature");
        let mut inv = c.inverse();
        if flip {
            inv = InverseCoupling { lbar: -inv.lbar, ..inv };
        }
        let sigma = Landscape::from_inverse(inv, w).sigma().expect("positive definite");
        worst = worst.max(direct.max_abs_diff(&CltCovariance::from_sigma(&sigma, &w)));
    }
    CheckResult::within("C (closed form) = C (from Sigma)", worst, 1e-10)
}

fn asymptotic_moment_check(rng: &mut ChaCha20Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (c, w) = random_high_temperature(rng);
        let ls = Landscape::new(&c, &w);
        let cov = clt_covariance(&c, &w).expect("high temperature").as_covariance();
        for k in 0..=10usize {
            for l in 0..=(10 - k) {
                let a = asymptotic_moment(&ls, k, l).expect("high temperature");
                let b = moment_closed(k, l, &cov);
                worst = worst.max((a - b).abs() / (1.0 + b.abs()));
            }
        }
    }
    CheckResult::within("asymptotic moments = Gaussian moments of C", worst, 1e-9)
}

fn profile_sum_check() -> CheckResult {
    let mut failures = 0usize;
    for len in 1..=8usize {
        for n in 1..=12usize {
            let total: BigUint = enumerate_profiles(len, n).iter().map(multiplicity).sum();
            if total != BigUint::from(n).pow(len as u32) {
                failures += 1;
            }
        }
    }
    CheckResult::within("sum of profile multiplicities = N^L", failures as f64, 0.0)
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let mut rng = stream_rng(opts.seed);
    let mut results = vec![
        oracle_check(&mut rng),
        moment_routes_check(&mut rng),
        regime_check(&mut rng),
        substitution_check(&mut rng),
        covariance_check(&mut rng, opts.flip_lbar_sign),
        asymptotic_moment_check(&mut rng),
        profile_sum_check(),
    ];
    results.extend(lemma::lemma_checks().into_iter().map(|c| CheckResult {
        name: c.name.to_string(),
        passed: c.passed,
        measured: c.measured,
        tolerance: c.tolerance,
    }));
    results
}
