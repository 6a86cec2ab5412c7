//! Oracles shared by the integration tests. Nothing here calls the code
//! under test except for RNG plumbing.

#![allow(dead_code)]

use std::collections::HashMap;

use cw2_core::exact::{next_unit, stream_rng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    stream_rng(seed)
}

pub fn uniform(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * next_unit(rng)
}

/// `(J1, J2, Jbar)` with `J1, J2 in [0.1, 2.5)` and `Jbar^2 < 0.9 J1 J2`.
pub fn random_coupling_params(rng: &mut ChaCha20Rng) -> (f64, f64, f64) {
    let j1 = uniform(rng, 0.1, 2.5);
    let j2 = uniform(rng, 0.1, 2.5);
    let jbar = uniform(rng, 0.0, 0.9f64.sqrt()) * (j1 * j2).sqrt();
    (j1, j2, jbar)
}

/// Boltzmann weights of all `2^N` configurations, visited with the spin
/// values of each configuration (group 1 first).
fn for_each_configuration(n1: usize, n2: usize, j: (f64, f64, f64), mut visit: impl FnMut(&[i32], f64)) {
    let n = n1 + n2;
    let mut spins = vec![0i32; n];
    let mut max_energy = f64::NEG_INFINITY;
    // Energies are bounded by the all-up configuration's scale; use it as a shift.
    for config in [0u32, (1u32 << n) - 1] {
        for (b, s) in spins.iter_mut().enumerate() {
            *s = if config >> b & 1 == 1 { 1 } else { -1 };
        }
        max_energy = max_energy.max(energy(&spins, n1, j));
    }
    for config in 0u32..(1u32 << n) {
        for (b, s) in spins.iter_mut().enumerate() {
            *s = if config >> b & 1 == 1 { 1 } else { -1 };
        }
        let w = (energy(&spins, n1, j) - max_energy).exp();
        visit(&spins, w);
    }
}

/// `(J1 S1^2 + 2 Jbar S1 S2 + J2 S2^2) / (2N)` summed spin by spin.
fn energy(spins: &[i32], n1: usize, (j1, j2, jbar): (f64, f64, f64)) -> f64 {
    let n = spins.len() as f64;
    let mut e = 0.0;
    for (a, &x) in spins.iter().enumerate() {
        for (b, &y) in spins.iter().enumerate() {
            let c = match (a < n1, b < n1) {
                (true, true) => j1,
                (false, false) => j2,
                _ => jbar,
            };
            e += c * (x * y) as f64;
        }
    }
    e / (2.0 * n)
}

/// `P(S1 = s1, S2 = s2)` keyed by `(s1, s2)`, from all `2^N` configurations.
pub fn brute_distribution(n1: usize, n2: usize, j: (f64, f64, f64)) -> HashMap<(i64, i64), f64> {
    let mut acc: HashMap<(i64, i64), f64> = HashMap::new();
    let mut z = 0.0;
    for_each_configuration(n1, n2, j, |spins, w| {
        let s1: i64 = spins[..n1].iter().map(|&s| s as i64).sum();
        let s2: i64 = spins[n1..].iter().map(|&s| s as i64).sum();
        *acc.entry((s1, s2)).or_default() += w;
        z += w;
    });
    acc.values_mut().for_each(|p| *p /= z);
    acc
}

/// `E(X_1...X_K Y_1...Y_L)` over all `2^N` configurations.
pub fn brute_correlation(n1: usize, n2: usize, j: (f64, f64, f64), k: usize, l: usize) -> f64 {
    let (mut num, mut z) = (0.0, 0.0);
    for_each_configuration(n1, n2, j, |spins, w| {
        let prod: i32 = spins[..k].iter().product::<i32>() * spins[n1..n1 + l].iter().product::<i32>();
        num += w * prod as f64;
        z += w;
    });
    num / z
}

/// Composite Simpson rule with `2m` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / (2 * m) as f64;
    let mut s = f(a) + f(b);
    for i in 1..2 * m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Root of `u/2 = tanh u` on `(1, 2)` by bisection.
pub fn half_tanh_root() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.tanh() > mid / 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Counts of multi-indices in `{1..n}^len` by profile, by exhaustive
/// enumeration. Profiles are keyed as `r_1..r_len`.
pub fn profiles_by_enumeration(len: usize, n: usize) -> HashMap<Vec<usize>, u64> {
    let mut out = HashMap::new();
    let mut idx = vec![0usize; len];
    loop {
        let mut occ = vec![0usize; n];
        for &i in &idx {
            occ[i] += 1;
        }
        let mut profile = vec![0usize; len];
        for &o in occ.iter().filter(|&&o| o > 0) {
            profile[o - 1] += 1;
        }
        *out.entry(profile).or_insert(0) += 1;
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == len {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
