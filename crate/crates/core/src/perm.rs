//! Permutations in one-line notation, their symmetry operations, order-isomorphism
//! reduction, and lexicographic enumeration of S_n.
//!
//! Positions and values are 1-indexed throughout, matching the usual combinatorial
//! convention; box coordinates of mesh patterns stay 0-indexed (see [`crate::mesh`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest length accepted by [`Sn`]; 20! still fits in a `u64` rank.
pub const MAX_ENUM_N: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("duplicate value {0} in one-line notation")]
    DuplicateValue(u8),
    #[error("value {value} out of range 1..={n}")]
    OutOfRange { value: i64, n: usize },
    #[error("length {0} exceeds the supported maximum {MAX_ENUM_N}")]
    TooLong(usize),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation of `{1, …, n}` in one-line notation.
///
/// The empty permutation (`n = 0`) is allowed; it is the base case of several
/// recursions and carries zero occurrences of every pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    values: Vec<u8>,
}

impl Permutation {
    /// Builds a validated permutation from one-line notation.
    pub fn from_one_line(values: &[u8]) -> Result<Self, PermError> {
        let n = values.len();
        if n > MAX_ENUM_N {
            return Err(PermError::TooLong(n));
        }
        let mut seen = [false; MAX_ENUM_N + 1];
        for &v in values {
            if v == 0 || v as usize > n {
                return Err(PermError::OutOfRange { value: v as i64, n });
            }
            if seen[v as usize] {
                return Err(PermError::DuplicateValue(v));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation {
            values: values.to_vec(),
        })
    }

    /// The identity permutation of length `n`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-indexed position `pos`.
    pub fn at(&self, pos: usize) -> u8 {
        self.values[pos - 1]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.values
    }

    /// π^r: the sequence read right to left.
    pub fn reverse(&self) -> Self {
        Permutation {
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// π^c: entry `n + 1 - π_i` at position `i`.
    pub fn complement(&self) -> Self {
        let n = self.n() as u8;
        Permutation {
            values: self.values.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// π^i: the inverse bijection, `π^i_j = m` iff `π_m = j`.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        Permutation { values: inv }
    }

    /// Rank-reduces a sequence of pairwise distinct integers to the unique
    /// order-isomorphic permutation.
    pub fn standardize(values: &[i64]) -> Result<Self, PermError> {
        let n = values.len();
        if n > MAX_ENUM_N {
            return Err(PermError::TooLong(n));
        }
        let mut ranks: Vec<u8> = Vec::with_capacity(n);
        for &v in values {
            let below = values.iter().filter(|&&w| w < v).count();
            let equal = values.iter().filter(|&&w| w == v).count();
            if equal > 1 {
                return Err(PermError::DuplicateValue(below as u8 + 1));
            }
            ranks.push(below as u8 + 1);
        }
        Ok(Permutation { values: ranks })
    }

    /// Left-to-right minima staircase with its band and column blocks.
    pub fn decompose(&self) -> Decomposition {
        let n = self.n();
        let mut minima: Vec<(usize, u8)> = Vec::new();
        let mut running = u8::MAX;
        for (i, &v) in self.values.iter().enumerate() {
            if v < running {
                running = v;
                minima.push((i + 1, v));
            }
        }
        // Band A_i: non-minima with value strictly between x_i and x_{i-1} (x_0 = +inf).
        let mut bands: Vec<Vec<usize>> = vec![Vec::new(); minima.len()];
        for (i, &v) in self.values.iter().enumerate() {
            let pos = i + 1;
            if minima.iter().any(|&(p, _)| p == pos) {
                continue;
            }
            let band = minima
                .iter()
                .position(|&(_, x)| v > x)
                .expect("non-minimum exceeds the last minimum");
            bands[band].push(pos);
        }
        // Column block C_j: positions strictly between x_j and x_{j+1} (sentinel n+1).
        let mut column_blocks: Vec<(usize, usize)> = Vec::new();
        for (j, &(p, _)) in minima.iter().enumerate() {
            let next = minima.get(j + 1).map_or(n + 1, |&(q, _)| q);
            column_blocks.push((p + 1, next));
        }
        let mut above_first = Vec::new();
        let mut below_first = Vec::new();
        if n > 0 {
            let first = self.values[0];
            for (i, &v) in self.values.iter().enumerate().skip(1) {
                if v > first {
                    above_first.push(i + 1);
                } else {
                    below_first.push(i + 1);
                }
            }
        }
        Decomposition {
            minima,
            bands,
            column_blocks,
            above_first,
            below_first,
        }
    }

    /// The subsequence of values at the given 1-indexed positions.
    pub fn values_at(&self, positions: &[usize]) -> Vec<u8> {
        positions.iter().map(|&p| self.at(p)).collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Text form: digit string for n ≤ 9 ("24513"), comma-separated otherwise.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &v in &self.values {
                write!(f, "{v}")?;
            }
        } else {
            let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation { values: Vec::new() });
        }
        let digits: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u8>()
                        .map_err(|_| PermError::Parse(tok.to_string()))
                })
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| PermError::Parse(c.to_string()))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::from_one_line(&digits)
    }
}

/// The left-to-right-minima staircase of a permutation.
///
/// `minima` lists the minima `x_1 > x_2 > … > x_t` as `(position, value)` in
/// order of appearance.  `bands[i]` holds the positions of the band block
/// `A_{i+1}` (non-minima with value strictly between `x_{i+1}` and `x_i`, with
/// the sentinel `x_0 = +∞`).  `column_blocks[j]` is the half-open position
/// range strictly between `x_{j+1}` and `x_{j+2}` (sentinel position `n+1`).
/// `above_first` / `below_first` are the positions of elements greater/smaller
/// than the first entry, the two halves of the prefix split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub minima: Vec<(usize, u8)>,
    pub bands: Vec<Vec<usize>>,
    pub column_blocks: Vec<(usize, usize)>,
    pub above_first: Vec<usize>,
    pub below_first: Vec<usize>,
}

pub fn factorial(n: usize) -> u64 {
    (2..=n as u64).product()
}

/// Streaming lexicographic enumeration of a contiguous rank range of S_n.
///
/// Ranges partition S_n for parallel consumption: `Sn::range(n, lo, hi)` yields
/// exactly the permutations with lexicographic rank in `lo..hi`.
pub struct Sn {
    current: Option<Vec<u8>>,
    remaining: u64,
}

impl Sn {
    pub fn new(n: usize) -> Result<Self, PermError> {
        Sn::range(n, 0, factorial(n))
    }

    pub fn range(n: usize, lo: u64, hi: u64) -> Result<Self, PermError> {
        if n > MAX_ENUM_N {
            return Err(PermError::TooLong(n));
        }
        let total = factorial(n);
        let hi = hi.min(total);
        if lo >= hi {
            return Ok(Sn {
                current: None,
                remaining: 0,
            });
        }
        Ok(Sn {
            current: Some(unrank(n, lo)),
            remaining: hi - lo,
        })
    }

    /// Applies `f` to each permutation word in the range without allocating.
    pub fn visit(mut self, mut f: impl FnMut(&[u8])) {
        while let Some(word) = self.current.as_mut() {
            if self.remaining == 0 {
                break;
            }
            f(word);
            self.remaining -= 1;
            if !next_lex(word) {
                break;
            }
        }
    }
}

impl Iterator for Sn {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let word = self.current.as_mut()?;
        let out = Permutation {
            values: word.clone(),
        };
        self.remaining -= 1;
        if !next_lex(word) {
            self.current = None;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

/// Lexicographic unranking via the factorial number system.
fn unrank(n: usize, mut rank: u64) -> Vec<u8> {
    let mut avail: Vec<u8> = (1..=n as u8).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        let d = (rank / f) as usize;
        rank %= f;
        out.push(avail.remove(d));
    }
    out
}

/// In-place successor in lexicographic order; false at the last permutation.
fn next_lex(word: &mut [u8]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| word[i] < word[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| word[j] > word[i]).unwrap();
    word.swap(i, j);
    word[i + 1..].reverse();
    true
}

/// Splits `0..n!` into at most `parts` contiguous rank ranges.
pub fn rank_ranges(n: usize, parts: usize) -> Vec<(u64, u64)> {
    let total = factorial(n);
    let parts = parts.max(1) as u64;
    let chunk = total.div_ceil(parts).max(1);
    let mut out = Vec::new();
    let mut lo = 0;
    while lo < total {
        let hi = (lo + chunk).min(total);
        out.push((lo, hi));
        lo = hi;
    }
    if out.is_empty() {
        out.push((0, total.max(1)));
    }
    out
}
