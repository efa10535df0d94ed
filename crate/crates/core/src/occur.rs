//! Occurrence semantics of mesh patterns: an index set `i_1 < … < i_k` is an
//! occurrence of `(τ, R)` in `π` when the selected subsequence is
//! order-isomorphic to `τ` and every shaded box maps to an empty region of `π`.
//!
//! The region of box `(a, b)` under an occurrence is the set of positions
//! strictly between `i_a` and `i_{a+1}` holding values strictly between the
//! `b`-th and `(b+1)`-th smallest selected values, with sentinels `i_0 = 0`,
//! `i_{k+1} = n+1`, `v_(0) = 0`, `v_(k+1) = n+1`.

use thiserror::Error;

use crate::mesh::MeshPattern;
use crate::perm::Permutation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OccurError {
    #[error("index set {0:?} is not strictly increasing within 1..=n")]
    BadIndexSet(Vec<usize>),
    #[error("index set has length {got}, pattern has length {expected}")]
    WrongArity { expected: usize, got: usize },
}

/// Precomputed pattern data for the inner counting loop.
#[derive(Clone)]
pub struct Prepared {
    k: usize,
    /// tau as 0-indexed ranks: word[i] = rank of the i-th selected value.
    tau: [u8; 8],
    shading: u64,
}

impl Prepared {
    pub fn new(q: &MeshPattern) -> Prepared {
        let mut tau = [0u8; 8];
        for (i, &v) in q.tau().as_slice().iter().enumerate() {
            tau[i] = v;
        }
        Prepared {
            k: q.k(),
            tau,
            shading: q.shading_bits(),
        }
    }

    #[inline]
    fn shaded(&self, a: usize, b: usize) -> bool {
        self.shading & (1 << (a * (self.k + 1) + b)) != 0
    }
}

/// True when the values at `idx` (0-indexed positions into `word`) are
/// order-isomorphic to the prepared pattern's tau.
#[inline]
fn iso_prefix(word: &[u8], idx: &[usize], depth: usize, pat: &Prepared) -> bool {
    // The newest index is idx[depth-1]; compare its rank against tau's prefix.
    let v = word[idx[depth - 1]];
    let t = pat.tau[depth - 1];
    for s in 0..depth - 1 {
        if (word[idx[s]] < v) != (pat.tau[s] < t) {
            return false;
        }
    }
    true
}

/// Shading check: every element of `word` outside the occurrence must avoid
/// the shaded cells.  `idx` is 0-indexed and strictly increasing.
#[inline]
fn cells_ok(word: &[u8], idx: &[usize], pat: &Prepared) -> bool {
    if pat.shading == 0 {
        return true;
    }
    let k = pat.k;
    let mut vals: [u8; 8] = [0; 8];
    for (s, &i) in idx.iter().enumerate() {
        vals[s] = word[i];
    }
    vals[..k].sort_unstable();
    let mut a = 0usize; // number of selected positions passed so far
    for (j, &v) in word.iter().enumerate() {
        if a < k && idx[a] == j {
            a += 1;
            continue;
        }
        let mut b = 0usize;
        while b < k && vals[b] < v {
            b += 1;
        }
        if pat.shaded(a, b) {
            return false;
        }
    }
    true
}

/// Enumerates occurrences of a prepared pattern in `word`, invoking `f` with
/// the 0-indexed occurrence.  Index subsets are walked in lexicographic order
/// with early abort on order-isomorphism failure.
fn for_each_occurrence(word: &[u8], pat: &Prepared, mut f: impl FnMut(&[usize])) {
    let n = word.len();
    let k = pat.k;
    if k == 0 {
        if pat.shading == 0 || cells_ok(word, &[], pat) {
            f(&[]);
        }
        return;
    }
    if k > n {
        return;
    }
    let mut idx = [0usize; 8];
    let mut depth = 0usize;
    let mut next = 0usize;
    loop {
        if next + (k - depth) > n {
            // exhausted this level; backtrack
            if depth == 0 {
                return;
            }
            depth -= 1;
            next = idx[depth] + 1;
            continue;
        }
        idx[depth] = next;
        if iso_prefix(word, &idx, depth + 1, pat) {
            if depth + 1 == k {
                if cells_ok(word, &idx[..k], pat) {
                    f(&idx[..k]);
                }
                next += 1;
            } else {
                depth += 1;
                next = idx[depth - 1] + 1;
            }
        } else {
            next += 1;
        }
    }
}

/// Counts occurrences directly on a permutation word (hot path).
pub fn count_in_word(word: &[u8], pat: &Prepared) -> u64 {
    let mut count = 0;
    for_each_occurrence(word, pat, |_| count += 1);
    count
}

/// Number of occurrences of `q` in `π`.
pub fn count_occurrences(pi: &Permutation, q: &MeshPattern) -> u64 {
    count_in_word(pi.as_slice(), &Prepared::new(q))
}

/// All occurrences as 1-indexed position tuples, in lexicographic order.
pub fn occurrences(pi: &Permutation, q: &MeshPattern) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_occurrence(pi.as_slice(), &Prepared::new(q), |idx| {
        out.push(idx.iter().map(|&i| i + 1).collect());
    });
    out
}

/// Occurrences on a raw word, 0-indexed (internal hot path).
pub(crate) fn occurrences_in_word(word: &[u8], pat: &Prepared) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_occurrence(word, pat, |idx| out.push(idx.to_vec()));
    out
}

/// Tests one candidate index set (1-indexed, strictly increasing).
pub fn is_occurrence(
    pi: &Permutation,
    indices: &[usize],
    q: &MeshPattern,
) -> Result<bool, OccurError> {
    if indices.len() != q.k() {
        return Err(OccurError::WrongArity {
            expected: q.k(),
            got: indices.len(),
        });
    }
    let n = pi.n();
    for w in indices.windows(2) {
        if w[0] >= w[1] {
            return Err(OccurError::BadIndexSet(indices.to_vec()));
        }
    }
    if indices.iter().any(|&i| i == 0 || i > n) {
        return Err(OccurError::BadIndexSet(indices.to_vec()));
    }
    let pat = Prepared::new(q);
    let word = pi.as_slice();
    let idx: Vec<usize> = indices.iter().map(|&i| i - 1).collect();
    for d in 1..=idx.len() {
        if !iso_prefix(word, &idx, d, &pat) {
            return Ok(false);
        }
    }
    Ok(cells_ok(word, &idx, &pat))
}

/// `(count of q1, count of q2)` with a single subset sweep when the lengths agree.
pub fn joint_counts(pi: &Permutation, q1: &MeshPattern, q2: &MeshPattern) -> (u64, u64) {
    let p1 = Prepared::new(q1);
    let p2 = Prepared::new(q2);
    joint_counts_in_word(pi.as_slice(), &p1, &p2)
}

/// Hot-path variant of [`joint_counts`] on a raw word.
pub fn joint_counts_in_word(word: &[u8], p1: &Prepared, p2: &Prepared) -> (u64, u64) {
    (count_in_word(word, p1), count_in_word(word, p2))
}
