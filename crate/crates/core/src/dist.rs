//! Joint distributions of pattern-pair occurrence counts over S_n and the
//! three equivalence notions built on them: Wilf equivalence (equal avoidance
//! counts), equidistribution (equal marginal distributions), and joint
//! equidistribution (the sparse count map is symmetric under `(k,ℓ) ↦ (ℓ,k)`).
//!
//! Sweeps are exhaustive and exact.  Parallel runs partition S_n into
//! contiguous lexicographic rank ranges, each worker owns a private
//! accumulator, and the final merge is commutative addition, so the result is
//! identical regardless of schedule.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::mesh::MeshPattern;
use crate::occur::{joint_counts_in_word, Prepared};
use crate::perm::{factorial, rank_ranges, Sn};

/// Default cap on exhaustive sweeps; 10! permutations is desk scale.
pub const DEFAULT_SWEEP_LIMIT: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DistError {
    #[error("n = {0} exceeds the sweep limit {1}")]
    OverLimit(usize, usize),
    #[error("patterns have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("distributions are over different lengths {0} and {1}")]
    DistLengthMismatch(usize, usize),
}

/// Sparse map `(k, ℓ) ↦ |{π ∈ S_n : k occurrences of q1, ℓ of q2}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    n: usize,
    counts: BTreeMap<(u16, u16), u64>,
}

impl JointDistribution {
    pub fn empty(n: usize) -> Self {
        JointDistribution {
            n,
            counts: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, k: u16, l: u16, c: u64) {
        if c > 0 {
            *self.counts.entry((k, l)).or_default() += c;
        }
    }

    pub fn get(&self, k: u16, l: u16) -> u64 {
        self.counts.get(&(k, l)).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(u16, u16), &u64)> {
        self.counts.iter()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Largest k or ℓ with a nonzero cell.
    pub fn max_index(&self) -> u16 {
        self.counts
            .keys()
            .map(|&(k, l)| k.max(l))
            .max()
            .unwrap_or(0)
    }

    /// The map with every key transposed.
    pub fn transpose(&self) -> JointDistribution {
        let counts = self
            .counts
            .iter()
            .map(|(&(k, l), &c)| ((l, k), c))
            .collect();
        JointDistribution { n: self.n, counts }
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().all(|(&(k, l), &c)| self.get(l, k) == c)
    }

    /// Smallest asymmetric cell, as `(k, ℓ, count(k,ℓ), count(ℓ,k))`.
    pub fn first_asymmetry(&self) -> Option<(u16, u16, u64, u64)> {
        self.counts
            .iter()
            .find(|(&(k, l), &c)| self.get(l, k) != c)
            .map(|(&(k, l), &c)| (k, l, c, self.get(l, k)))
    }

    /// Marginal distribution of the first pattern's count.
    pub fn marginal_first(&self) -> BTreeMap<u16, u64> {
        let mut out = BTreeMap::new();
        for (&(k, _), &c) in &self.counts {
            *out.entry(k).or_default() += c;
        }
        out
    }

    /// Marginal distribution of the second pattern's count.
    pub fn marginal_second(&self) -> BTreeMap<u16, u64> {
        let mut out = BTreeMap::new();
        for (&(_, l), &c) in &self.counts {
            *out.entry(l).or_default() += c;
        }
        out
    }

    /// CSV rows `n,k,l,count` sorted by `(k, ℓ)`, without header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (&(k, l), &c) in &self.counts {
            writeln!(out, "{},{},{},{}", self.n, k, l, c).unwrap();
        }
        out
    }
}

/// JSON form `{"n":N,"counts":[[k,l,c],…]}` sorted by `(k, ℓ)`.
impl Serialize for JointDistribution {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("JointDistribution", 2)?;
        st.serialize_field("n", &self.n)?;
        let rows: Vec<(u16, u16, u64)> =
            self.counts.iter().map(|(&(k, l), &c)| (k, l, c)).collect();
        st.serialize_field("counts", &rows)?;
        st.end()
    }
}

fn check_pair(q1: &MeshPattern, q2: &MeshPattern, n: usize, limit: usize) -> Result<(), DistError> {
    if q1.k() != q2.k() {
        return Err(DistError::LengthMismatch(q1.k(), q2.k()));
    }
    if n > limit {
        return Err(DistError::OverLimit(n, limit));
    }
    Ok(())
}

/// Exhaustive joint distribution of `(q1, q2)` over S_n.
pub fn joint_distribution(
    q1: &MeshPattern,
    q2: &MeshPattern,
    n: usize,
) -> Result<JointDistribution, DistError> {
    joint_distribution_with_limit(q1, q2, n, DEFAULT_SWEEP_LIMIT)
}

pub fn joint_distribution_with_limit(
    q1: &MeshPattern,
    q2: &MeshPattern,
    n: usize,
    limit: usize,
) -> Result<JointDistribution, DistError> {
    check_pair(q1, q2, n, limit)?;
    let p1 = Prepared::new(q1);
    let p2 = Prepared::new(q2);
    let parts = rank_ranges(n, rayon::current_num_threads() * 4);
    let maps: Vec<BTreeMap<(u16, u16), u64>> = parts
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut local: BTreeMap<(u16, u16), u64> = BTreeMap::new();
            Sn::range(n, lo, hi).expect("n checked").visit(|word| {
                let (k, l) = joint_counts_in_word(word, &p1, &p2);
                *local.entry((k as u16, l as u16)).or_default() += 1;
            });
            local
        })
        .collect();
    let mut dist = JointDistribution::empty(n);
    for local in maps {
        for ((k, l), c) in local {
            dist.add(k, l, c);
        }
    }
    debug_assert_eq!(dist.total(), factorial(n));
    Ok(dist)
}

pub fn compare_distributions(
    d1: &JointDistribution,
    d2: &JointDistribution,
) -> Result<bool, DistError> {
    if d1.n() != d2.n() {
        return Err(DistError::DistLengthMismatch(d1.n(), d2.n()));
    }
    Ok(d1 == d2)
}

/// Outcome of a depth-bounded equivalence check.
#[derive(Debug, Clone, Serialize)]
pub struct EquidistReport {
    pub holds: bool,
    /// Smallest witness `(n, k, ℓ, count(k,ℓ), count(ℓ,k))` when it fails.
    pub first_failure: Option<(usize, u16, u16, u64, u64)>,
    /// Joint distribution per n (index 0 is n = 1).
    #[serde(skip)]
    pub distributions: Vec<JointDistribution>,
}

/// Joint equidistribution at every `n ≤ n_max`: the sparse map must equal its
/// transpose.  Scans n upward and reports the smallest witness on failure.
pub fn is_jointly_equidistributed(
    q1: &MeshPattern,
    q2: &MeshPattern,
    n_max: usize,
) -> Result<EquidistReport, DistError> {
    let mut distributions = Vec::new();
    for n in 1..=n_max {
        let d = joint_distribution(q1, q2, n)?;
        if let Some((k, l, ckl, clk)) = d.first_asymmetry() {
            distributions.push(d);
            return Ok(EquidistReport {
                holds: false,
                first_failure: Some((n, k, l, ckl, clk)),
                distributions,
            });
        }
        distributions.push(d);
    }
    Ok(EquidistReport {
        holds: true,
        first_failure: None,
        distributions,
    })
}

/// Equidistribution: equal marginal count distributions at every `n ≤ n_max`.
pub fn is_equidistributed(
    q1: &MeshPattern,
    q2: &MeshPattern,
    n_max: usize,
) -> Result<EquidistReport, DistError> {
    let mut distributions = Vec::new();
    for n in 1..=n_max {
        let d = joint_distribution(q1, q2, n)?;
        let m1 = d.marginal_first();
        let m2 = d.marginal_second();
        if m1 != m2 {
            let k = m1
                .keys()
                .chain(m2.keys())
                .copied()
                .find(|k| m1.get(k).copied().unwrap_or(0) != m2.get(k).copied().unwrap_or(0))
                .unwrap();
            let c1 = m1.get(&k).copied().unwrap_or(0);
            let c2 = m2.get(&k).copied().unwrap_or(0);
            distributions.push(d);
            return Ok(EquidistReport {
                holds: false,
                first_failure: Some((n, k, k, c1, c2)),
                distributions,
            });
        }
        distributions.push(d);
    }
    Ok(EquidistReport {
        holds: true,
        first_failure: None,
        distributions,
    })
}

/// Wilf equivalence: `|S_n(q1)| = |S_n(q2)|` at every `n ≤ n_max`.
pub fn is_wilf_equivalent(
    q1: &MeshPattern,
    q2: &MeshPattern,
    n_max: usize,
) -> Result<EquidistReport, DistError> {
    let mut distributions = Vec::new();
    for n in 1..=n_max {
        let d = joint_distribution(q1, q2, n)?;
        let avoid1: u64 = d.marginal_first().get(&0).copied().unwrap_or(0);
        let avoid2: u64 = d.marginal_second().get(&0).copied().unwrap_or(0);
        if avoid1 != avoid2 {
            distributions.push(d);
            return Ok(EquidistReport {
                holds: false,
                first_failure: Some((n, 0, 0, avoid1, avoid2)),
                distributions,
            });
        }
        distributions.push(d);
    }
    Ok(EquidistReport {
        holds: true,
        first_failure: None,
        distributions,
    })
}
