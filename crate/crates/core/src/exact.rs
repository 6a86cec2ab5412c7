//! Exact finite-size distribution of the group magnetizations.
//!
//! The Gibbs weight depends on a configuration only through `(S1, S2)`, so
//! the `2^N` configurations collapse onto the `(N1 + 1)(N2 + 1)` lattice
//! points `s1 in {-N1, -N1 + 2, ..., N1}`, `s2 in {-N2, ..., N2}` with
//! binomial multiplicities. All weights are handled in the log domain.
//!
//! Lattice points whose log-weight falls more than [`prune_depth`] below the
//! maximum are not stored; their combined probability is below `e^-50`.
//! Small tables are always stored in full.

use std::io::{self, Write};

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::{Coupling, FiniteModel};

/// Largest lattice `(N1 + 1)(N2 + 1)` accepted by [`exact_distribution`].
pub const MAX_LATTICE_POINTS: u64 = 1 << 32;

/// Largest number of stored table entries.
pub const MAX_STORED_ENTRIES: usize = 64_000_000;

/// Largest `N` accepted by [`brute_force_distribution`].
pub const MAX_BRUTE_FORCE_N: usize = 20;

/// Bound on the log of the relative mass discarded by pruning.
const PRUNED_MASS_LOG_BOUND: f64 = 50.0;

/// Log-weight depth below the maximum beyond which lattice points are
/// dropped: `50 + ln(lattice points)`, so the dropped mass is at most `e^-50`.
pub fn prune_depth(lattice_points: u64) -> f64 {
    PRUNED_MASS_LOG_BOUND + (lattice_points as f64).ln()
}

/// Normalization applied to the magnetizations in [`exact_moment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaling {
    /// `S / N_nu`.
    PerSpin,
    /// `S / sqrt(N_nu)`.
    SqrtSpin,
    /// `S / N_nu^p`.
    Pow(f64),
}

impl Scaling {
    pub fn exponent(&self) -> f64 {
        match *self {
            Scaling::PerSpin => 1.0,
            Scaling::SqrtSpin => 0.5,
            Scaling::Pow(p) => p,
        }
    }
}

/// Probability table over the lattice of magnetization pairs.
///
/// Lattice index `i` in `0..=N1` stands for `s1 = 2i - N1` (likewise `j`
/// for `s2`). Entries are stored row-major over the rectangular window
/// `rows x cols`; points outside it have probability zero.
#[derive(Debug, Clone)]
pub struct MagnetizationTable {
    model: FiniteModel,
    coupling: Coupling,
    log_z: f64,
    row_lo: usize,
    row_hi: usize,
    col_lo: usize,
    col_hi: usize,
    probs: Vec<f64>,
}

impl MagnetizationTable {
    pub fn model(&self) -> &FiniteModel {
        &self.model
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    /// Log of the partition function summed over all `2^N` configurations.
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// Stored lattice-index ranges `(rows, cols)`, inclusive.
    pub fn window(&self) -> ((usize, usize), (usize, usize)) {
        ((self.row_lo, self.row_hi), (self.col_lo, self.col_hi))
    }

    pub fn stored_len(&self) -> usize {
        self.probs.len()
    }

    /// True when every lattice point is stored.
    pub fn is_full(&self) -> bool {
        self.row_lo == 0
            && self.col_lo == 0
            && self.row_hi == self.model.n1()
            && self.col_hi == self.model.n2()
    }

    fn width(&self) -> usize {
        self.col_hi - self.col_lo + 1
    }

    pub fn s1_of(&self, i: usize) -> i64 {
        2 * i as i64 - self.model.n1() as i64
    }

    pub fn s2_of(&self, j: usize) -> i64 {
        2 * j as i64 - self.model.n2() as i64
    }

    /// Probability of lattice indices `(i, j)`.
    pub fn prob_at(&self, i: usize, j: usize) -> f64 {
        if i < self.row_lo || i > self.row_hi || j < self.col_lo || j > self.col_hi {
            return 0.0;
        }
        self.probs[(i - self.row_lo) * self.width() + (j - self.col_lo)]
    }

    /// `P(S1 = s1, S2 = s2)`; zero off the lattice.
    pub fn prob(&self, s1: i64, s2: i64) -> f64 {
        let (n1, n2) = (self.model.n1() as i64, self.model.n2() as i64);
        if s1.abs() > n1 || s2.abs() > n2 || (s1 + n1) % 2 != 0 || (s2 + n2) % 2 != 0 {
            return 0.0;
        }
        self.prob_at(((s1 + n1) / 2) as usize, ((s2 + n2) / 2) as usize)
    }

    /// Stored entries as `(s1, s2, probability)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let width = self.width();
        self.probs.iter().enumerate().map(move |(idx, &p)| {
            let i = self.row_lo + idx / width;
            let j = self.col_lo + idx % width;
            (self.s1_of(i), self.s2_of(j), p)
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Marginal law of `S1` as `(s1, probability)` over the stored rows.
    pub fn marginal1(&self) -> Vec<(i64, f64)> {
        let width = self.width();
        self.probs
            .chunks(width)
            .enumerate()
            .map(|(r, row)| (self.s1_of(self.row_lo + r), row.iter().sum()))
            .collect()
    }

    /// Marginal law of `S2` as `(s2, probability)` over the stored columns.
    pub fn marginal2(&self) -> Vec<(i64, f64)> {
        let width = self.width();
        let mut m = vec![0.0; width];
        for row in self.probs.chunks(width) {
            for (acc, p) in m.iter_mut().zip(row) {
                *acc += p;
            }
        }
        m.into_iter()
            .enumerate()
            .map(|(c, p)| (self.s2_of(self.col_lo + c), p))
            .collect()
    }

    /// `sum P(s1, s2) f(s1) g(s2)` with per-row and per-column factors.
    fn separable_sum(&self, f: impl Fn(i64) -> f64, g: impl Fn(i64) -> f64) -> f64 {
        let width = self.width();
        let col_factor: Vec<f64> = (self.col_lo..=self.col_hi).map(|j| g(self.s2_of(j))).collect();
        self.probs
            .chunks(width)
            .enumerate()
            .map(|(r, row)| {
                let fr = f(self.s1_of(self.row_lo + r));
                if fr == 0.0 {
                    return 0.0;
                }
                fr * row.iter().zip(&col_factor).map(|(p, c)| p * c).sum::<f64>()
            })
            .sum()
    }

    /// `E[(S1 / N1^p)^K (S2 / N2^p)^L]`.
    pub fn moment(&self, k: u32, l: u32, scaling: Scaling) -> f64 {
        let p = scaling.exponent();
        let d1 = (self.model.n1() as f64).powf(p);
        let d2 = (self.model.n2() as f64).powf(p);
        self.separable_sum(
            |s1| (s1 as f64 / d1).powi(k as i32),
            |s2| (s2 as f64 / d2).powi(l as i32),
        )
    }

    /// `E(X_1 ... X_K Y_1 ... Y_L)` for distinct spins of each group.
    pub fn correlation(&self, k: usize, l: usize) -> Result<f64> {
        let (n1, n2) = (self.model.n1(), self.model.n2());
        if k > n1 || l > n2 {
            return Err(Error::Domain(format!(
                "need K <= N1 and L <= N2 (got K = {k}, L = {l}, N1 = {n1}, N2 = {n2})"
            )));
        }
        Ok(self.separable_sum(
            |s1| conditional_spin_product(n1, k, s1),
            |s2| conditional_spin_product(n2, l, s2),
        ))
    }

    /// Probability that both per-spin magnetizations lie within `half_width`
    /// of `(c1, c2)`.
    pub fn mass_near(&self, c1: f64, c2: f64, half_width: f64) -> f64 {
        let (n1, n2) = (self.model.n1() as f64, self.model.n2() as f64);
        self.separable_sum(
            |s1| ((s1 as f64 / n1 - c1).abs() <= half_width) as u8 as f64,
            |s2| ((s2 as f64 / n2 - c2).abs() <= half_width) as u8 as f64,
        )
    }

    /// Writes `s1,s2,prob` rows for the stored entries, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "s1,s2,prob")?;
        for (s1, s2, p) in self.iter() {
            writeln!(out, "{s1},{s2},{p:.16e}")?;
        }
        Ok(())
    }
}

/// `ln k!` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    (0..=n).map(|k| ln_gamma(k as f64 + 1.0)).collect()
}

/// `ln C(n, k)` for `k = 0..=n`, exactly symmetric under `k -> n - k`.
fn ln_binomials(n: usize, ln_fact: &[f64]) -> Vec<f64> {
    (0..=n).map(|k| ln_fact[n] - (ln_fact[k] + ln_fact[n - k])).collect()
}

/// Expected product of `k` distinct spins out of `n` exchangeable `+-1`
/// spins whose sum is `s`:
/// `sum_a (-1)^(k-a) C(u, a) C(n-u, k-a) / C(n, k)` with `u = (n + s) / 2`.
pub fn conditional_spin_product(n: usize, k: usize, s: i64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let u = ((n as i64 + s) / 2) as usize;
    if let Some(v) = conditional_spin_product_exact(n, k, u) {
        return v;
    }
    // Falling-factorial ratios stay O(1) where the exact numerator overflows.
    let falling = |x: usize, m: usize| -> f64 {
        (0..m).map(|t| x.saturating_sub(t) as f64).product()
    };
    let denom = falling(n, k);
    let mut binom_k_a = 1.0;
    let mut total = 0.0;
    for a in 0..=k {
        if a > 0 {
            binom_k_a = binom_k_a * (k - a + 1) as f64 / a as f64;
        }
        if a > u || k - a > n - u {
            continue;
        }
        let term = binom_k_a * falling(u, a) * falling(n - u, k - a) / denom;
        if (k - a) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn checked_binomial(n: usize, k: usize) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for t in 0..k {
        acc = acc.checked_mul((n - t) as i128)? / (t as i128 + 1);
    }
    Some(acc)
}

fn conditional_spin_product_exact(n: usize, k: usize, u: usize) -> Option<f64> {
    let mut numerator: i128 = 0;
    for a in 0..=k {
        let term = checked_binomial(u, a)?.checked_mul(checked_binomial(n - u, k - a)?)?;
        numerator = if (k - a) % 2 == 0 {
            numerator.checked_add(term)?
        } else {
            numerator.checked_sub(term)?
        };
    }
    let denominator = checked_binomial(n, k)?;
    Some(numerator as f64 / denominator as f64)
}

fn log_sum_exp(values: &[f64], max: f64) -> f64 {
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}

/// Exact law of `(S1, S2)` by binomial marginalization over configurations.
pub fn exact_distribution(model: &FiniteModel, coupling: &Coupling) -> Result<MagnetizationTable> {
    let (n1, n2, n) = (model.n1(), model.n2(), model.n());
    let lattice = (n1 as u64 + 1) * (n2 as u64 + 1);
    if lattice > MAX_LATTICE_POINTS {
        return Err(Error::Size(format!(
            "lattice has {lattice} points, limit {MAX_LATTICE_POINTS}"
        )));
    }
    let depth = prune_depth(lattice);
    let inv_2n = 1.0 / (2.0 * n as f64);
    let ln_fact = ln_factorials(n1.max(n2));
    let lb1 = ln_binomials(n1, &ln_fact);
    let lb2 = ln_binomials(n2, &ln_fact);
    let s1 = |i: usize| 2.0 * i as f64 - n1 as f64;
    let s2 = |j: usize| 2.0 * j as f64 - n2 as f64;
    let log_w = |i: usize, j: usize| (lb1[i] + lb2[j]) + coupling.quadratic_form(s1(i), s2(j)) * inv_2n;

    // Separable parts and a bound on the cross term locate the window
    // without visiting every lattice point.
    let row_part: Vec<f64> = (0..=n1).map(|i| lb1[i] + coupling.j1() * s1(i) * s1(i) * inv_2n).collect();
    let col_part: Vec<f64> = (0..=n2).map(|j| lb2[j] + coupling.j2() * s2(j) * s2(j) * inv_2n).collect();
    let cross = 2.0 * coupling.jbar() * inv_2n;
    let argmax = |v: &[f64]| {
        v.iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &x)| if x > best.1 { (i, x) } else { best })
    };
    let (i_star, row_max) = argmax(&row_part);
    let (j_star, col_max) = argmax(&col_part);
    let lower = (0..=n2)
        .map(|j| log_w(i_star, j))
        .chain((0..=n1).map(|i| log_w(i, j_star)))
        .fold(f64::NEG_INFINITY, f64::max);
    let cutoff = lower - depth - 1e-6 * (1.0 + lower.abs());
    let hull = |keep: &dyn Fn(usize) -> bool, len: usize| -> (usize, usize) {
        let lo = (0..len).find(|&x| keep(x)).unwrap_or(0);
        let hi = (0..len).rev().find(|&x| keep(x)).unwrap_or(len - 1);
        (lo, hi)
    };
    let (row_lo, row_hi) = hull(
        &|i| row_part[i] + col_max + cross * s1(i).abs() * n2 as f64 >= cutoff,
        n1 + 1,
    );
    let (col_lo, col_hi) = hull(
        &|j| col_part[j] + row_max + cross * s2(j).abs() * n1 as f64 >= cutoff,
        n2 + 1,
    );

    let (rows, width) = (row_hi - row_lo + 1, col_hi - col_lo + 1);
    if rows.saturating_mul(width) > MAX_STORED_ENTRIES {
        return Err(Error::Size(format!(
            "table window {rows} x {width} exceeds {MAX_STORED_ENTRIES} entries"
        )));
    }
    let mut weights = Vec::with_capacity(rows * width);
    for i in row_lo..=row_hi {
        weights.extend((col_lo..=col_hi).map(|j| log_w(i, j)));
    }
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Shrink to the rows and columns that reach within `depth` of the max.
    let threshold = max - depth;
    let keep_row = |r: usize| weights[r * width..(r + 1) * width].iter().any(|&w| w >= threshold);
    let keep_col = |c: usize| (0..rows).any(|r| weights[r * width + c] >= threshold);
    let (r0, r1) = hull(&keep_row, rows);
    let (c0, c1) = hull(&keep_col, width);
    let weights = if (r0, r1, c0, c1) == (0, rows - 1, 0, width - 1) {
        weights
    } else {
        let mut shrunk = Vec::with_capacity((r1 - r0 + 1) * (c1 - c0 + 1));
        for r in r0..=r1 {
            shrunk.extend_from_slice(&weights[r * width + c0..=r * width + c1]);
        }
        shrunk
    };

    let log_z = log_sum_exp(&weights, max);
    let probs = weights.into_iter().map(|w| (w - log_z).exp()).collect();
    Ok(MagnetizationTable {
        model: *model,
        coupling: *coupling,
        log_z,
        row_lo: row_lo + r0,
        row_hi: row_lo + r1,
        col_lo: col_lo + c0,
        col_hi: col_lo + c1,
        probs,
    })
}

/// Law of `(S1, S2)` by summing the Gibbs weight of all `2^N`
/// configurations. Same lattice layout as [`exact_distribution`], always
/// stored in full.
pub fn brute_force_distribution(model: &FiniteModel, coupling: &Coupling) -> Result<MagnetizationTable> {
    let (n1, n2, n) = (model.n1(), model.n2(), model.n());
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::Size(format!(
            "brute force enumeration limited to N <= {MAX_BRUTE_FORCE_N} (got {n})"
        )));
    }
    let width = n2 + 1;
    let energy = |s1: i64, s2: i64| coupling.quadratic_form(s1 as f64, s2 as f64) / (2.0 * n as f64);
    let shift = (0..=n1)
        .flat_map(|i| (0..=n2).map(move |j| (i, j)))
        .map(|(i, j)| energy(2 * i as i64 - n1 as i64, 2 * j as i64 - n2 as i64))
        .fold(f64::NEG_INFINITY, f64::max);

    let group1 = (1u32 << n1) - 1;
    let mut acc = vec![0.0; (n1 + 1) * width];
    for config in 0u32..(1u32 << n) {
        let up1 = (config & group1).count_ones() as usize;
        let up2 = (config >> n1).count_ones() as usize;
        let s1 = 2 * up1 as i64 - n1 as i64;
        let s2 = 2 * up2 as i64 - n2 as i64;
        acc[up1 * width + up2] += (energy(s1, s2) - shift).exp();
    }
    let total: f64 = acc.iter().sum();
    for p in acc.iter_mut() {
        *p /= total;
    }
    Ok(MagnetizationTable {
        model: *model,
        coupling: *coupling,
        log_z: shift + total.ln(),
        row_lo: 0,
        row_hi: n1,
        col_lo: 0,
        col_hi: n2,
        probs: acc,
    })
}

/// `E[(S1 / N1^p)^K (S2 / N2^p)^L]` under the table.
pub fn exact_moment(table: &MagnetizationTable, k: u32, l: u32, scaling: Scaling) -> f64 {
    table.moment(k, l, scaling)
}

/// `E(X_1 ... X_K Y_1 ... Y_L)` for `K` distinct group-1 and `L` distinct
/// group-2 spins.
pub fn exact_correlation(model: &FiniteModel, coupling: &Coupling, k: usize, l: usize) -> Result<f64> {
    if k > model.n1() || l > model.n2() {
        return Err(Error::Domain(format!(
            "need K <= N1 and L <= N2 (got K = {k}, L = {l}, N1 = {}, N2 = {})",
            model.n1(),
            model.n2()
        )));
    }
    exact_distribution(model, coupling)?.correlation(k, l)
}

/// Seeds a ChaCha20 stream: the 32-byte key is `seed` in little-endian
/// order followed by 24 zero bytes; the block counter and nonce start at 0.
pub fn stream_rng(seed: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

/// Uniform double in `[0, 1)` from the top 53 bits of one 64-bit output.
pub fn next_unit(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `count` i.i.d. draws by inverse CDF over the row-major stored entries.
pub fn sample(table: &MagnetizationTable, seed: u64, count: usize) -> Vec<(i64, i64)> {
    let mut cdf = Vec::with_capacity(table.probs.len());
    let mut running = 0.0;
    for &p in &table.probs {
        running += p;
        cdf.push(running);
    }
    let total = running;
    let last_positive = table.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let width = table.width();
    let mut rng = stream_rng(seed);
    (0..count)
        .map(|_| {
            let target = next_unit(&mut rng) * total;
            let idx = cdf.partition_point(|&c| c <= target).min(last_positive);
            let i = table.row_lo + idx / width;
            let j = table.col_lo + idx % width;
            (table.s1_of(i), table.s2_of(j))
        })
        .collect()
}

/// Draws for one of several parallel streams; stream `t` uses seed
/// `seed ^ t`.
pub fn sample_stream(table: &MagnetizationTable, seed: u64, stream: u64, count: usize) -> Vec<(i64, i64)> {
    sample(table, seed ^ stream, count)
}
