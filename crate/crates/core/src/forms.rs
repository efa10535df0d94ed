//! Exact-arithmetic side of the toolkit: unsigned Stirling numbers of the first
//! kind, the closed forms for the joint counts `H_{n,k,ℓ}` and `T_{n,k,ℓ}`, the
//! recurrence steps that rebuild those distributions, and the Chu–Vandermonde
//! style identity used in their derivation.
//!
//! These are the analytic oracles that the brute-force sweeps are compared
//! against; everything is exact integer arithmetic.

use std::sync::OnceLock;

use thiserror::Error;

use crate::dist::JointDistribution;

/// Stirling triangle is precomputed up to this `n`.
pub const STIRLING_N_MAX: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormsError {
    #[error("non-integral intermediate value; {0}")]
    NonIntegral(String),
    #[error("recurrence produced a negative cell at ({0},{1})")]
    NegativeCell(u16, u16),
}

/// Triangle of unsigned Stirling numbers of the first kind,
/// `c(n,k) = (n-1)·c(n-1,k) + c(n-1,k-1)` with `c(0,0) = 1` and
/// `c(n,k) = 0` for `n < k` or `k = 0 < n`.
pub struct StirlingTable {
    rows: Vec<Vec<u128>>,
}

impl StirlingTable {
    fn build(n_max: usize) -> StirlingTable {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![1]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let mut row = vec![0u128; n + 1];
            for k in 1..=n {
                let carry = if k < n { prev[k] } else { 0 };
                row[k] = (n as u128 - 1) * carry + prev[k - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> u128 {
        self.rows
            .get(n)
            .and_then(|row| row.get(k))
            .copied()
            .unwrap_or(0)
    }
}

fn table() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(|| StirlingTable::build(STIRLING_N_MAX))
}

/// `c(n,k)`; zero outside the triangle.
pub fn stirling(n: usize, k: usize) -> u128 {
    if n > STIRLING_N_MAX {
        panic!("stirling({n},{k}) beyond table bound {STIRLING_N_MAX}");
    }
    table().get(n, k)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

pub fn factorial_u128(n: usize) -> u128 {
    (2..=n as u128).product()
}

/// `H_{n,k,ℓ} = C(k+ℓ, k) · c(n-1, k+ℓ)`.
pub fn h_closed(n: usize, k: usize, l: usize) -> u128 {
    binomial(k + l, k) * stirling(n - 1, k + l)
}

/// `T_{n,k,ℓ}`: `2·(n-1)!` at the origin, otherwise
/// `(n-1)! · C(k+ℓ,k) · Σ_{i=2}^{n-1} c(i-1, k+ℓ) / i!`.
///
/// The sum is computed as `Σ ((n-1)!/i!) · c(i-1, k+ℓ)` with an explicit
/// divisibility check; a remainder would expose an implementation bug.
pub fn t_closed(n: usize, k: usize, l: usize) -> Result<u128, FormsError> {
    if k == 0 && l == 0 {
        return Ok(2 * factorial_u128(n - 1));
    }
    let nf = factorial_u128(n - 1);
    let mut sum: u128 = 0;
    for i in 2..n {
        let fi = factorial_u128(i);
        let quotient = nf / fi;
        if quotient * fi != nf {
            return Err(FormsError::NonIntegral(format!(
                "(n-1)!/i! for n={n}, i={i}"
            )));
        }
        sum += quotient * stirling(i - 1, k + l);
    }
    Ok(binomial(k + l, k) * sum)
}

/// One step of `H_n(x,y) = (n + x + y - 2) · H_{n-1}(x,y)`:
/// `counts_n(k,ℓ) = (n-2)·prev(k,ℓ) + prev(k-1,ℓ) + prev(k,ℓ-1)`.
pub fn h_recurrence_step(prev: &JointDistribution) -> JointDistribution {
    let n = prev.n() + 1;
    let mut next = JointDistribution::empty(n);
    let factor = n as u64 - 2;
    for (&(k, l), &c) in prev.cells() {
        if factor > 0 {
            next.add(k, l, factor * c);
        }
        next.add(k + 1, l, c);
        next.add(k, l + 1, c);
    }
    next
}

/// One step of `T_n(x,y) = (n + x + y - 2)·T_{n-1}(x,y) + (2 - x - y)·(n-2)!`:
/// the same three-term rule plus `2(n-2)!` at the origin and `-(n-2)!` at
/// `(1,0)` and `(0,1)`.
pub fn t_recurrence_x4_step(
    prev: &JointDistribution,
    n: usize,
) -> Result<JointDistribution, FormsError> {
    assert_eq!(prev.n() + 1, n, "recurrence step must advance n by one");
    let mut cells: std::collections::BTreeMap<(u16, u16), i128> = Default::default();
    let factor = n as i128 - 2;
    for (&(k, l), &c) in prev.cells() {
        let c = c as i128;
        *cells.entry((k, l)).or_default() += factor * c;
        *cells.entry((k + 1, l)).or_default() += c;
        *cells.entry((k, l + 1)).or_default() += c;
    }
    let f = factorial_u128(n - 2) as i128;
    *cells.entry((0, 0)).or_default() += 2 * f;
    *cells.entry((1, 0)).or_default() -= f;
    *cells.entry((0, 1)).or_default() -= f;
    let mut out = JointDistribution::empty(n);
    for ((k, l), c) in cells {
        if c < 0 {
            return Err(FormsError::NegativeCell(k, l));
        }
        if c > 0 {
            out.add(k, l, c as u64);
        }
    }
    Ok(out)
}

/// `Σ_{i=0}^{n-1} C(n-1,i)·c(i,ℓ)·c(n-1-i,k) = C(k+ℓ,k)·c(n-1,k+ℓ)`.
pub fn chu_vandermonde_check(n: usize, k: usize, l: usize) -> bool {
    let lhs: u128 = (0..n)
        .map(|i| binomial(n - 1, i) * stirling(i, l) * stirling(n - 1 - i, k))
        .sum();
    lhs == binomial(k + l, k) * stirling(n - 1, k + l)
}
