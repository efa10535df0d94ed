//! Executable versions of the bijections that witness joint equidistributions,
//! plus exhaustive verifiers for bijectivity and for the prefix-split reduction.
//!
//! Every map here is total on S_n and is reported as a sequence of value
//! transpositions: applying the listed swaps to the input, in order,
//! reproduces the recorded intermediate permutations.  The swap-chain maps
//! follow the fixed procedure of repeatedly locating the occurrence whose
//! final element sits at the rightmost unprocessed involved position and
//! exchanging the occurrence's last two elements.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mesh::{classify_type, MeshPattern, ShadingType};
use crate::occur::{joint_counts, occurrences, occurrences_in_word, Prepared};
use crate::perm::{factorial, rank_ranges, Permutation, Sn};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BijError {
    #[error("patterns have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("no occurrence ends at involved position {0}")]
    ChainStuck(usize),
    #[error("{0} occurrences end at involved position {1}; expected exactly one")]
    ChainAmbiguous(usize, usize),
    #[error("found {0} occurrences of one pattern; the single-swap map needs at most one")]
    MultipleOccurrences(usize),
    #[error("pattern does not classify as the required frame form")]
    WrongType,
}

/// One step of a bijection trace: the two values exchanged and the permutation
/// after the exchange.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapStep {
    pub swap: (u8, u8),
    pub result: Permutation,
}

/// Rebuilds the swap list from a start permutation and the intermediate states;
/// consecutive states must differ in exactly two positions.
fn steps_from_states(start: &Permutation, states: &[Permutation]) -> Vec<SwapStep> {
    let mut steps = Vec::with_capacity(states.len());
    let mut prev = start.clone();
    for state in states {
        let diff: Vec<usize> = (0..prev.n())
            .filter(|&i| prev.as_slice()[i] != state.as_slice()[i])
            .collect();
        debug_assert_eq!(diff.len(), 2, "states must differ by one transposition");
        steps.push(SwapStep {
            swap: (prev.as_slice()[diff[0]], prev.as_slice()[diff[1]]),
            result: state.clone(),
        });
        prev = state.clone();
    }
    steps
}

fn perm_from_word(word: &[u8]) -> Permutation {
    Permutation::from_one_line(word).expect("word stays a permutation")
}

/// The swap-chain engine shared by the chain maps.
///
/// Occurrences of length-3 patterns are grouped by their first element (the
/// left-to-right minimum anchoring them); length-2 patterns form one global
/// group.  Within a group the involved positions are the occurrences' last two
/// indices; targets are processed rightmost first, each time exchanging the
/// last two elements of the unique occurrence ending at the target.
fn chain_states(
    start: &[u8],
    q1: &MeshPattern,
    q2: &MeshPattern,
) -> Result<(Vec<u8>, Vec<Vec<u8>>), BijError> {
    if q1.k() != q2.k() {
        return Err(BijError::LengthMismatch(q1.k(), q2.k()));
    }
    let k = q1.k();
    let p1 = Prepared::new(q1);
    let p2 = Prepared::new(q2);
    let all_occs = |w: &[u8]| -> Vec<Vec<usize>> {
        let mut v = occurrences_in_word(w, &p1);
        v.extend(occurrences_in_word(w, &p2));
        v
    };
    let group_of = |occ: &[usize]| if k >= 3 { occ[0] } else { 0 };

    let mut word = start.to_vec();
    let mut states: Vec<Vec<u8>> = Vec::new();
    let mut keys: Vec<usize> = all_occs(&word).iter().map(|o| group_of(o)).collect();
    keys.sort_unstable();
    keys.dedup();
    for key in keys {
        let mut involved: Vec<usize> = all_occs(&word)
            .iter()
            .filter(|o| group_of(o) == key)
            .flat_map(|o| o[k - 2..].to_vec())
            .collect();
        involved.sort_unstable();
        involved.dedup();
        for step in 1..involved.len() {
            let target = involved[involved.len() - step];
            let hits: Vec<Vec<usize>> = all_occs(&word)
                .into_iter()
                .filter(|o| o[k - 1] == target)
                .collect();
            match hits.len() {
                0 => return Err(BijError::ChainStuck(target + 1)),
                1 => {}
                m => return Err(BijError::ChainAmbiguous(m, target + 1)),
            }
            let occ = &hits[0];
            word.swap(occ[k - 2], occ[k - 1]);
            states.push(word.clone());
        }
    }
    Ok((word, states))
}

/// The element-swapping chain for a pattern pair; returns the final
/// permutation and the full trace.  No occurrences means the identity with an
/// empty trace.
pub fn swap_chain(
    pi: &Permutation,
    q1: &MeshPattern,
    q2: &MeshPattern,
) -> Result<(Permutation, Vec<SwapStep>), BijError> {
    let (word, states) = chain_states(pi.as_slice(), q1, q2)?;
    let states: Vec<Permutation> = states.iter().map(|w| perm_from_word(w)).collect();
    Ok((perm_from_word(&word), steps_from_states(pi, &states)))
}

/// Chain applied independently inside each left-to-right-minimum band; this is
/// [`swap_chain`] on length-3 patterns, whose occurrence groups are the bands.
pub fn swap_chain_blockwise(
    pi: &Permutation,
    q1: &MeshPattern,
    q2: &MeshPattern,
) -> Result<Permutation, BijError> {
    Ok(swap_chain(pi, q1, q2)?.0)
}

/// Scope of the single-swap map: the uniqueness claim and the swap are either
/// per permutation or per left-to-right-minimum band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SwapScope {
    Global,
    PerBand,
}

fn single_swap_states(
    start: &[u8],
    q1: &MeshPattern,
    q2: &MeshPattern,
    scope: SwapScope,
) -> Result<(Vec<u8>, Vec<Vec<u8>>), BijError> {
    if q1.k() != q2.k() {
        return Err(BijError::LengthMismatch(q1.k(), q2.k()));
    }
    let k = q1.k();
    let p1 = Prepared::new(q1);
    let p2 = Prepared::new(q2);
    let group_of = |occ: &[usize]| match scope {
        SwapScope::Global => 0,
        SwapScope::PerBand => occ[0],
    };
    let group_occs = |word: &[u8], pat: &Prepared, key: usize| -> Vec<Vec<usize>> {
        occurrences_in_word(word, pat)
            .into_iter()
            .filter(|o| group_of(o) == key)
            .collect()
    };
    let mut keys: Vec<usize> = occurrences_in_word(start, &p1)
        .iter()
        .chain(occurrences_in_word(start, &p2).iter())
        .map(|o| group_of(o))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let mut word = start.to_vec();
    let mut states = Vec::new();
    for key in keys {
        let c1 = group_occs(&word, &p1, key).len();
        let c2 = group_occs(&word, &p2, key).len();
        if c1 > 1 || c2 > 1 {
            return Err(BijError::MultipleOccurrences(c1.max(c2)));
        }
        let moving = match (c1, c2) {
            (1, 0) => &p1,
            (0, 1) => &p2,
            _ => continue, // (0,0) and (1,1) stay fixed
        };
        // Exchanging the occurrence's last two elements can juxtapose a fresh
        // occurrence of the same pattern; repeat until it is gone.  Each swap
        // shifts the distinguished element one slot, so n steps suffice.
        for _ in 0..=word.len() {
            let occs = group_occs(&word, moving, key);
            match occs.len() {
                0 => break,
                1 => {
                    let occ = &occs[0];
                    word.swap(occ[k - 2], occ[k - 1]);
                    states.push(word.clone());
                }
                m => return Err(BijError::MultipleOccurrences(m)),
            }
        }
        if !group_occs(&word, moving, key).is_empty() {
            return Err(BijError::ChainStuck(key + 1));
        }
    }
    Ok((word, states))
}

/// Repeatedly swaps the last two elements of the unique occurrence of the
/// present pattern until that pattern no longer occurs, per scope; identity
/// when the counts are (0,0) or (1,1).
pub fn single_swap_map(
    pi: &Permutation,
    q1: &MeshPattern,
    q2: &MeshPattern,
    scope: SwapScope,
) -> Result<Permutation, BijError> {
    let (word, _) = single_swap_states(pi.as_slice(), q1, q2, scope)?;
    Ok(perm_from_word(&word))
}

/// Transposition decomposition of complementing the values inside each
/// position group (1-indexed positions).
fn complement_states(start: &Permutation, groups: &[Vec<usize>]) -> Vec<Permutation> {
    let mut word = start.as_slice().to_vec();
    let mut states = Vec::new();
    for positions in groups {
        let mut vals: Vec<u8> = positions.iter().map(|&p| word[p - 1]).collect();
        vals.sort_unstable();
        let m = vals.len();
        for r in 0..m / 2 {
            let lo = vals[r];
            let hi = vals[m - 1 - r];
            let pl = (0..word.len()).find(|&i| word[i] == lo).unwrap();
            let ph = (0..word.len()).find(|&i| word[i] == hi).unwrap();
            word.swap(pl, ph);
            states.push(perm_from_word(&word));
        }
    }
    states
}

/// Complements the values inside each band `A_i` (largest to smallest, in
/// place); left-to-right minima are untouched.
pub fn blockwise_complement(pi: &Permutation) -> Permutation {
    blockwise_complement_traced(pi).0
}

pub fn blockwise_complement_traced(pi: &Permutation) -> (Permutation, Vec<SwapStep>) {
    let d = pi.decompose();
    let states = complement_states(pi, &d.bands);
    let last = states.last().cloned().unwrap_or_else(|| pi.clone());
    let steps = steps_from_states(pi, &states);
    (last, steps)
}

/// Reverses the subsequence inside each column block `C_j` (the positions
/// strictly between consecutive minima); minima are untouched.
pub fn blockwise_reverse(pi: &Permutation) -> Permutation {
    blockwise_reverse_traced(pi).0
}

pub fn blockwise_reverse_traced(pi: &Permutation) -> (Permutation, Vec<SwapStep>) {
    let d = pi.decompose();
    let mut word = pi.as_slice().to_vec();
    let mut states = Vec::new();
    for &(lo, hi) in &d.column_blocks {
        let (mut l, mut r) = (lo, hi.saturating_sub(1));
        while l < r {
            word.swap(l - 1, r - 1);
            states.push(perm_from_word(&word));
            l += 1;
            r -= 1;
        }
    }
    let last = states.last().cloned().unwrap_or_else(|| pi.clone());
    let steps = steps_from_states(pi, &states);
    (last, steps)
}

/// Complements the values of the prefix-split set `A = {π_i > π_1}` in place.
pub fn prefix_complement(pi: &Permutation) -> Permutation {
    prefix_complement_traced(pi).0
}

pub fn prefix_complement_traced(pi: &Permutation) -> (Permutation, Vec<SwapStep>) {
    let d = pi.decompose();
    let states = complement_states(pi, std::slice::from_ref(&d.above_first));
    let last = states.last().cloned().unwrap_or_else(|| pi.clone());
    let steps = steps_from_states(pi, &states);
    (last, steps)
}

/// Reverses the subsequence formed by the prefix-split set `A` (values written
/// back into the same positions in the opposite order).
pub fn prefix_reverse(pi: &Permutation) -> Permutation {
    prefix_reverse_traced(pi).0
}

pub fn prefix_reverse_traced(pi: &Permutation) -> (Permutation, Vec<SwapStep>) {
    let d = pi.decompose();
    let mut word = pi.as_slice().to_vec();
    let mut states = Vec::new();
    let pos = &d.above_first;
    let m = pos.len();
    for r in 0..m / 2 {
        word.swap(pos[r] - 1, pos[m - 1 - r] - 1);
        states.push(perm_from_word(&word));
    }
    let last = states.last().cloned().unwrap_or_else(|| pi.clone());
    let steps = steps_from_states(pi, &states);
    (last, steps)
}

/// The fixed length-2 pair whose chain the reversed variant conjugates; its
/// occurrences anchor on prefix minima, the mirror image of the usual chain.
fn kl_pair() -> (MeshPattern, MeshPattern) {
    (
        "12:(0,0)(0,1)(1,0)(1,1)".parse().unwrap(),
        "21:(0,0)(0,1)(1,0)(1,1)".parse().unwrap(),
    )
}

/// Applies a sequence map to the standardization of the prefix-split set `A`
/// and re-embeds the result; `B` and `π_1` stay fixed.
fn prefix_apply(
    pi: &Permutation,
    f: impl Fn(&[u8]) -> Result<(Vec<u8>, Vec<Vec<u8>>), BijError>,
) -> Result<(Permutation, Vec<SwapStep>), BijError> {
    let d = pi.decompose();
    let positions = &d.above_first;
    let mut sorted_vals: Vec<u8> = positions.iter().map(|&p| pi.at(p)).collect();
    sorted_vals.sort_unstable();
    let sigma: Vec<u8> = positions
        .iter()
        .map(|&p| sorted_vals.iter().position(|&v| v == pi.at(p)).unwrap() as u8 + 1)
        .collect();
    let (_, sigma_states) = f(&sigma)?;
    let embed = |state: &[u8]| -> Permutation {
        let mut word = pi.as_slice().to_vec();
        for (j, &p) in positions.iter().enumerate() {
            word[p - 1] = sorted_vals[state[j] as usize - 1];
        }
        perm_from_word(&word)
    };
    let states: Vec<Permutation> = sigma_states.iter().map(|s| embed(s)).collect();
    let last = states.last().cloned().unwrap_or_else(|| pi.clone());
    let steps = steps_from_states(pi, &states);
    Ok((last, steps))
}

/// The registered bijection families; each catalog entry that carries a
/// proof-by-bijection refers to one of these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MapKind {
    /// Complement the prefix-split set A (horizontally symmetric inner shading).
    PrefixComplement,
    /// Reverse the prefix-split set A (vertically symmetric inner shading).
    PrefixReverse,
    /// Complement each band A_i.
    BlockwiseComplement,
    /// Reverse each column block C_j.
    BlockwiseReverse,
    /// Grouped element-swapping chain on the pair's own occurrences.
    SwapChain,
    /// Reversal-conjugated chain inside the prefix split, for the inner pair
    /// whose occurrences anchor on prefix minima rather than maxima.
    SwapChainReversed,
    /// Swap the unique occurrence's last two elements (global uniqueness).
    SingleSwap,
    /// Same, applied independently per band (per-band uniqueness).
    SingleSwapPerBand,
    /// Conjugation by the inverse operation; witnesses the mirrored pair.
    InverseConjugate(Box<MapKind>),
}

impl MapKind {
    /// Family name used in reports.
    pub fn family(&self) -> &'static str {
        match self {
            MapKind::PrefixComplement | MapKind::BlockwiseComplement => "complement",
            MapKind::PrefixReverse | MapKind::BlockwiseReverse => "reverse",
            MapKind::SwapChain | MapKind::SwapChainReversed => "swap-chain",
            MapKind::SingleSwap | MapKind::SingleSwapPerBand => "single-swap",
            MapKind::InverseConjugate(inner) => inner.family(),
        }
    }

    pub fn apply(
        &self,
        pi: &Permutation,
        q1: &MeshPattern,
        q2: &MeshPattern,
    ) -> Result<Permutation, BijError> {
        Ok(self.apply_traced(pi, q1, q2)?.0)
    }

    pub fn apply_traced(
        &self,
        pi: &Permutation,
        q1: &MeshPattern,
        q2: &MeshPattern,
    ) -> Result<(Permutation, Vec<SwapStep>), BijError> {
        match self {
            MapKind::PrefixComplement => Ok(prefix_complement_traced(pi)),
            MapKind::PrefixReverse => Ok(prefix_reverse_traced(pi)),
            MapKind::BlockwiseComplement => Ok(blockwise_complement_traced(pi)),
            MapKind::BlockwiseReverse => Ok(blockwise_reverse_traced(pi)),
            MapKind::SwapChain => swap_chain(pi, q1, q2),
            MapKind::SwapChainReversed => prefix_apply(pi, |sigma| {
                let (k1, k2) = kl_pair();
                let reversed: Vec<u8> = sigma.iter().rev().copied().collect();
                let (word, states) = chain_states(&reversed, &k1, &k2)?;
                let back = |w: &[u8]| w.iter().rev().copied().collect::<Vec<u8>>();
                Ok((back(&word), states.iter().map(|s| back(s)).collect()))
            }),
            MapKind::SingleSwap => {
                let (word, states) = single_swap_states(pi.as_slice(), q1, q2, SwapScope::Global)?;
                let states: Vec<Permutation> = states.iter().map(|w| perm_from_word(w)).collect();
                Ok((perm_from_word(&word), steps_from_states(pi, &states)))
            }
            MapKind::SingleSwapPerBand => {
                let (word, states) = single_swap_states(pi.as_slice(), q1, q2, SwapScope::PerBand)?;
                let states: Vec<Permutation> = states.iter().map(|w| perm_from_word(w)).collect();
                Ok((perm_from_word(&word), steps_from_states(pi, &states)))
            }
            MapKind::InverseConjugate(inner) => {
                let (out, steps) =
                    inner.apply_traced(&pi.inverse(), &q1.mesh_inverse(), &q2.mesh_inverse())?;
                let states: Vec<Permutation> = steps.iter().map(|s| s.result.inverse()).collect();
                let steps = steps_from_states(pi, &states);
                Ok((out.inverse(), steps))
            }
        }
    }
}

/// Outcome of an exhaustive bijectivity check on S_n.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub checked: u64,
    pub failure: Option<String>,
}

/// Checks that `map` is injective on S_n and sends every permutation with
/// joint counts `(k, ℓ)` to one with `(ℓ, k)`.
pub fn verify_bijection<F>(map: F, q1: &MeshPattern, q2: &MeshPattern, n: usize) -> VerifyReport
where
    F: Fn(&Permutation) -> Result<Permutation, BijError> + Sync,
{
    let parts = rank_ranges(n, rayon::current_num_threads() * 4);
    let results: Vec<Result<Vec<u64>, String>> = parts
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut ranks = Vec::with_capacity((hi - lo) as usize);
            for pi in Sn::range(n, lo, hi).expect("verified n") {
                let image = map(&pi).map_err(|e| format!("map failed on {pi}: {e}"))?;
                if image.n() != n {
                    return Err(format!("map changed length on {pi}"));
                }
                let (k, l) = joint_counts(&pi, q1, q2);
                let (k2, l2) = joint_counts(&image, q1, q2);
                if (k2, l2) != (l, k) {
                    return Err(format!(
                        "counts not transposed: {pi} has ({k},{l}) but image {image} has ({k2},{l2})"
                    ));
                }
                ranks.push(lex_rank(image.as_slice()));
            }
            Ok(ranks)
        })
        .collect();
    let mut all = Vec::with_capacity(factorial(n) as usize);
    for r in results {
        match r {
            Ok(ranks) => all.extend(ranks),
            Err(msg) => {
                return VerifyReport {
                    ok: false,
                    checked: factorial(n),
                    failure: Some(msg),
                }
            }
        }
    }
    let checked = all.len() as u64;
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return VerifyReport {
            ok: false,
            checked,
            failure: Some("map is not injective".to_string()),
        };
    }
    VerifyReport {
        ok: true,
        checked,
        failure: None,
    }
}

fn lex_rank(word: &[u8]) -> u64 {
    let n = word.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = word[i + 1..].iter().filter(|&&v| v < word[i]).count() as u64;
        rank += smaller * factorial(n - 1 - i);
    }
    rank
}

/// Outcome of the prefix-split reduction check.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub ok: bool,
    pub checked: u64,
    pub failure: Option<String>,
}

/// Verifies, for all `n ≤ n_max`, that the occurrences of an X1-form pair are
/// exactly `π_1` prepended to occurrences of the inner pair inside the
/// standardized prefix-split set A.
pub fn verify_reduction(
    q1: &MeshPattern,
    q2: &MeshPattern,
    n_max: usize,
) -> Result<ReductionReport, BijError> {
    let Some((ty1, p1)) = classify_type(q1).map_err(|_| BijError::WrongType)? else {
        return Err(BijError::WrongType);
    };
    let Some((ty2, p2)) = classify_type(q2).map_err(|_| BijError::WrongType)? else {
        return Err(BijError::WrongType);
    };
    if ty1 != ShadingType::X1 || ty2 != ShadingType::X1 {
        return Err(BijError::WrongType);
    }
    let mut checked = 0u64;
    for n in 1..=n_max {
        for pi in Sn::new(n).expect("small n") {
            checked += 1;
            for q in [q1, q2] {
                for occ in occurrences(&pi, q) {
                    if occ[0] != 1 {
                        return Ok(ReductionReport {
                            ok: false,
                            checked,
                            failure: Some(format!(
                                "occurrence {occ:?} of {q} in {pi} not anchored at 1"
                            )),
                        });
                    }
                }
            }
            let d = pi.decompose();
            let vals: Vec<i64> = d.above_first.iter().map(|&p| pi.at(p) as i64).collect();
            let sigma = Permutation::standardize(&vals).expect("distinct");
            let q_counts = joint_counts(&pi, q1, q2);
            let p_counts = joint_counts(&sigma, &p1, &p2);
            if q_counts != p_counts {
                return Ok(ReductionReport {
                    ok: false,
                    checked,
                    failure: Some(format!(
                        "{pi}: pair counts {q_counts:?} but inner counts {p_counts:?} on {sigma}"
                    )),
                });
            }
        }
    }
    Ok(ReductionReport {
        ok: true,
        checked,
        failure: None,
    })
}
