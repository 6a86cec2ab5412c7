//! Multi-indices, profile vectors and exact multiplicity counts.
//!
//! For a multi-index `i in {1..N}^L`, `nu_j(i)` is the number of positions
//! equal to `j`, and the profile `rho_l(i)` counts the universe elements that
//! occur exactly `l` times. Moment expansions of `(S_1)^L` group their `N^L`
//! terms by profile; `multiplicity` counts each group exactly.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// An ordered tuple of indices drawn from `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    entries: Vec<usize>,
    n: usize,
}

impl MultiIndex {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("multi-index must have length >= 1".into()));
        }
        if let Some(bad) = entries.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::Domain(format!("index {bad} outside 1..={n}")));
        }
        Ok(Self { entries, n })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.n
    }
}

/// Profile vector `(r_1, ..., r_L)` with `sum l * r_l = L`.
///
/// Stored dense; `counts[l - 1]` is `r_l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileVector {
    counts: Vec<usize>,
    n: usize,
}

impl ProfileVector {
    pub fn new(counts: Vec<usize>, n: usize) -> Result<Self> {
        let len = counts.len();
        if len == 0 {
            return Err(Error::InvalidParameter("profile length must be >= 1".into()));
        }
        let weighted: usize = counts.iter().enumerate().map(|(i, r)| (i + 1) * r).sum();
        if weighted != len {
            return Err(Error::InvalidParameter(format!(
                "sum l * r_l = {weighted} differs from L = {len}"
            )));
        }
        let distinct: usize = counts.iter().sum();
        if distinct > n {
            return Err(Error::InvalidParameter(format!(
                "profile uses {distinct} distinct indices but N = {n}"
            )));
        }
        Ok(Self { counts, n })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `r_l` for `l >= 1`; zero beyond the stored length.
    pub fn r(&self, l: usize) -> usize {
        assert!(l >= 1, "profile entries are indexed from 1");
        self.counts.get(l - 1).copied().unwrap_or(0)
    }

    /// Multi-index length `L`.
    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    /// Number of distinct indices, `sum r_l`.
    pub fn distinct(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn profile_of(index: &MultiIndex) -> ProfileVector {
    let len = index.len();
    let mut occurrences = vec![0usize; index.universe() + 1];
    for &e in index.entries() {
        occurrences[e] += 1;
    }
    let mut counts = vec![0usize; len];
    for &nu in occurrences.iter().filter(|&&nu| nu > 0) {
        counts[nu - 1] += 1;
    }
    ProfileVector {
        counts,
        n: index.universe(),
    }
}

fn factorial(k: usize) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Exact number of multi-indices in `{1..N}^L` with the given profile:
/// `N! / (r_1! ... r_L! r_0!) * L! / (1!^r_1 ... L!^r_L)` with
/// `r_0 = N - sum r_l`.
pub fn multiplicity(profile: &ProfileVector) -> BigUint {
    let n = profile.universe();
    let len = profile.order();
    let r0 = n - profile.distinct();

    // N! / r0! as a falling product avoids the full factorial.
    let mut numerator = ((r0 + 1)..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    numerator *= factorial(len);

    let mut denominator = BigUint::one();
    for (i, &r) in profile.counts().iter().enumerate() {
        if r == 0 {
            continue;
        }
        denominator *= factorial(r);
        denominator *= num_traits::pow(factorial(i + 1), r);
    }
    debug_assert!((&numerator % &denominator) == BigUint::from(0u8));
    numerator / denominator
}

/// All profiles of order `len` realizable in a universe of size `n`,
/// i.e. the integer partitions of `len` into at most `n` parts.
pub fn enumerate_profiles(len: usize, n: usize) -> Vec<ProfileVector> {
    fn recurse(
        remaining: usize,
        max_part: usize,
        parts_left: usize,
        counts: &mut Vec<usize>,
        n: usize,
        out: &mut Vec<ProfileVector>,
    ) {
        if remaining == 0 {
            out.push(ProfileVector {
                counts: counts.clone(),
                n,
            });
            return;
        }
        if parts_left == 0 {
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            counts[part - 1] += 1;
            recurse(remaining - part, part, parts_left - 1, counts, n, out);
            counts[part - 1] -= 1;
        }
    }

    let mut out = Vec::new();
    if len == 0 || n == 0 {
        return out;
    }
    let mut counts = vec![0usize; len];
    recurse(len, len, n, &mut counts, n, &mut out);
    out
}

/// Subsets of profile sets used in the moment bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFilter {
    /// `r_1 = k`.
    FirstCoordK(usize),
    /// `r_l = 0` for every `l >= 3`.
    NoHighRepeats,
    /// `r_l > 0` for some `l >= 3`.
    SomeHighRepeat,
}

impl ProfileFilter {
    pub fn matches(&self, profile: &ProfileVector) -> bool {
        let high = profile.counts().iter().skip(2).any(|&r| r > 0);
        match *self {
            ProfileFilter::FirstCoordK(k) => profile.r(1) == k,
            ProfileFilter::NoHighRepeats => !high,
            ProfileFilter::SomeHighRepeat => high,
        }
    }
}

pub fn filter_profiles(profiles: &[ProfileVector], which: ProfileFilter) -> Vec<ProfileVector> {
    profiles.iter().filter(|p| which.matches(p)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(entries: &[usize], n: usize) -> MultiIndex {
        MultiIndex::new(entries.to_vec(), n).unwrap()
    }

    fn pv(counts: &[usize], n: usize) -> ProfileVector {
        ProfileVector::new(counts.to_vec(), n).unwrap()
    }

    #[test]
    fn profile_examples() {
        assert_eq!(profile_of(&mi(&[3, 3, 3], 5)).counts(), &[0, 0, 1]);
        assert_eq!(profile_of(&mi(&[1, 2, 3], 5)).counts(), &[3, 0, 0]);
        assert_eq!(profile_of(&mi(&[1, 1, 2, 3], 4)).counts(), &[2, 1, 0, 0]);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(&pv(&[3, 0, 0], 10)), BigUint::from(720u32));
        assert_eq!(multiplicity(&pv(&[0, 0, 1], 10)), BigUint::from(10u32));
        assert_eq!(multiplicity(&pv(&[1, 1, 0], 10)), BigUint::from(270u32));
    }

    #[test]
    fn enumerate_examples() {
        let mut p3 = enumerate_profiles(3, 3);
        p3.sort();
        let mut expected = vec![pv(&[3, 0, 0], 3), pv(&[1, 1, 0], 3), pv(&[0, 0, 1], 3)];
        expected.sort();
        assert_eq!(p3, expected);
        assert_eq!(enumerate_profiles(1, 1), vec![pv(&[1], 1)]);
        assert_eq!(enumerate_profiles(4, 4).len(), 5);
        // Partitions of 4 into at most 2 parts: 4, 3+1, 2+2.
        assert_eq!(enumerate_profiles(4, 2).len(), 3);
    }

    #[test]
    fn filter_examples() {
        let all = enumerate_profiles(3, 5);
        let mut none_high = filter_profiles(&all, ProfileFilter::NoHighRepeats);
        none_high.sort();
        let mut expected = vec![pv(&[3, 0, 0], 5), pv(&[1, 1, 0], 5)];
        expected.sort();
        assert_eq!(none_high, expected);
        assert_eq!(
            filter_profiles(&all, ProfileFilter::SomeHighRepeat),
            vec![pv(&[0, 0, 1], 5)]
        );
        assert_eq!(
            filter_profiles(&all, ProfileFilter::FirstCoordK(3)),
            vec![pv(&[3, 0, 0], 5)]
        );
    }

    #[test]
    fn invalid_inputs() {
        assert!(MultiIndex::new(vec![0, 1], 3).is_err());
        assert!(MultiIndex::new(vec![4], 3).is_err());
        assert!(MultiIndex::new(vec![], 3).is_err());
        assert!(ProfileVector::new(vec![1, 1], 5).is_err());
        assert!(ProfileVector::new(vec![3, 0, 0], 2).is_err());
    }
}
