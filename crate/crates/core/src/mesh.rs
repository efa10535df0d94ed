//! Mesh patterns `(τ, R)`: a pattern permutation of length `k` together with a
//! set of shaded boxes `R ⊆ [0,k] × [0,k]`.
//!
//! Box `(a, b)` is the unit square with corners `(a,b)`, `(a,b+1)`, `(a+1,b+1)`,
//! `(a+1,b)`; the first coordinate runs along positions, the second along values.
//! Shadings are stored as a bitset over the `(k+1)²` boxes with box `(a,b)` at
//! bit `a·(k+1)+b`, so the occurrence inner loop tests membership in one
//! instruction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

/// Patterns up to this length fit the 64-bit shading bitset.
pub const MAX_PATTERN_LEN: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeshError {
    #[error("pattern length {0} exceeds the supported maximum {MAX_PATTERN_LEN}")]
    TooLong(usize),
    #[error("box ({0},{1}) outside [0,{2}]x[0,{2}]")]
    BoxOutOfRange(u8, u8, usize),
    #[error("expected a pattern of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("shading matches more than one frame form")]
    AmbiguousClassification,
    #[error("cannot parse mesh pattern near {0:?}")]
    Parse(String),
}

/// A mesh pattern `(τ, R)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MeshPattern {
    tau: Permutation,
    shading: u64,
}

impl MeshPattern {
    pub fn new(tau: Permutation, boxes: &[(u8, u8)]) -> Result<Self, MeshError> {
        let k = tau.n();
        if k > MAX_PATTERN_LEN {
            return Err(MeshError::TooLong(k));
        }
        let mut shading = 0u64;
        for &(a, b) in boxes {
            if a as usize > k || b as usize > k {
                return Err(MeshError::BoxOutOfRange(a, b, k));
            }
            shading |= 1 << (a as usize * (k + 1) + b as usize);
        }
        Ok(MeshPattern { tau, shading })
    }

    /// The classical pattern `(τ, ∅)`.
    pub fn classical(tau: Permutation) -> Self {
        MeshPattern::new(tau, &[]).expect("classical pattern")
    }

    pub fn k(&self) -> usize {
        self.tau.n()
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    #[inline]
    pub fn is_shaded(&self, a: usize, b: usize) -> bool {
        self.shading & (1 << (a * (self.k() + 1) + b)) != 0
    }

    /// Shaded boxes in lexicographic order.
    pub fn boxes(&self) -> Vec<(u8, u8)> {
        let k = self.k();
        let mut out = Vec::new();
        for a in 0..=k {
            for b in 0..=k {
                if self.is_shaded(a, b) {
                    out.push((a as u8, b as u8));
                }
            }
        }
        out
    }

    pub fn shading_bits(&self) -> u64 {
        self.shading
    }

    fn map_boxes(&self, tau: Permutation, f: impl Fn(u8, u8) -> (u8, u8)) -> MeshPattern {
        let mapped: Vec<(u8, u8)> = self.boxes().iter().map(|&(a, b)| f(a, b)).collect();
        MeshPattern::new(tau, &mapped).expect("mapped shading stays in range")
    }

    /// `(τ, R)^r = (τ^r, {(k - x, y)})`.
    pub fn mesh_reverse(&self) -> MeshPattern {
        let k = self.k() as u8;
        self.map_boxes(self.tau.reverse(), |a, b| (k - a, b))
    }

    /// `(τ, R)^c = (τ^c, {(x, k - y)})`.
    pub fn mesh_complement(&self) -> MeshPattern {
        let k = self.k() as u8;
        self.map_boxes(self.tau.complement(), |a, b| (a, k - b))
    }

    /// `(τ, R)^i = (τ^i, {(y, x)})`.
    pub fn mesh_inverse(&self) -> MeshPattern {
        self.map_boxes(self.tau.inverse(), |a, b| (b, a))
    }

    /// True iff for every pair `i ≠ j` exactly one of `(i,j)` and `(j,i)` is
    /// shaded.  Diagonal boxes are unconstrained.
    pub fn is_minus_antipodal(&self) -> bool {
        let k = self.k();
        for i in 0..=k {
            for j in i + 1..=k {
                if self.is_shaded(i, j) == self.is_shaded(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff the shading is invariant under `(x, y) ↦ (y, x)`.
    pub fn is_symmetric_shading(&self) -> bool {
        let k = self.k();
        for i in 0..=k {
            for j in i + 1..=k {
                if self.is_shaded(i, j) != self.is_shaded(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeshPattern({self})")
    }
}

/// Literal form `"<tau>:<boxes>"`, e.g. `"132:(0,0)(1,1)(1,2)(3,1)"`.
/// An empty shading is written `"132:"`.
impl fmt::Display for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.tau)?;
        for (a, b) in self.boxes() {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl FromStr for MeshPattern {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, MeshError> {
        let (tau_part, box_part) = s
            .split_once(':')
            .ok_or_else(|| MeshError::Parse(s.to_string()))?;
        let tau: Permutation = tau_part
            .parse()
            .map_err(|_| MeshError::Parse(tau_part.to_string()))?;
        let mut boxes = Vec::new();
        let mut rest = box_part.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| MeshError::Parse(rest.to_string()))?;
            let tok = &rest[..=close];
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| MeshError::Parse(tok.to_string()))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| MeshError::Parse(tok.to_string()))?;
            let a: u8 = a
                .trim()
                .parse()
                .map_err(|_| MeshError::Parse(tok.to_string()))?;
            let b: u8 = b
                .trim()
                .parse()
                .map_err(|_| MeshError::Parse(tok.to_string()))?;
            boxes.push((a, b));
            rest = &rest[close + 1..];
        }
        MeshPattern::new(tau, &boxes)
    }
}

/// JSON form `{"tau":[1,3,2],"shading":[[0,0],[1,1]]}`.
#[derive(Serialize, Deserialize)]
struct MeshPatternRepr {
    tau: Vec<u8>,
    shading: Vec<(u8, u8)>,
}

impl Serialize for MeshPattern {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        MeshPatternRepr {
            tau: self.tau.as_slice().to_vec(),
            shading: self.boxes(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MeshPattern {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = MeshPatternRepr::deserialize(de)?;
        let tau = Permutation::from_one_line(&repr.tau).map_err(serde::de::Error::custom)?;
        MeshPattern::new(tau, &repr.shading).map_err(serde::de::Error::custom)
    }
}

/// The frame forms: four boxes along the bottom row / leftmost column of the
/// `[0,3]²` grid (X forms), their images under the inverse operation (Y forms),
/// and the three-box column/row variants that drop the corner box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShadingType {
    X1,
    X2,
    X3,
    X4,
    Y1,
    Y2,
    Y3,
    Y4,
    X1ThreeBox,
    Y1ThreeBox,
}

impl ShadingType {
    pub const ALL: [ShadingType; 10] = [
        ShadingType::X1,
        ShadingType::X2,
        ShadingType::X3,
        ShadingType::X4,
        ShadingType::X1ThreeBox,
        ShadingType::Y1,
        ShadingType::Y2,
        ShadingType::Y3,
        ShadingType::Y4,
        ShadingType::Y1ThreeBox,
    ];

    pub fn frame(self) -> &'static [(u8, u8)] {
        match self {
            ShadingType::X1 => &[(0, 0), (0, 1), (0, 2), (0, 3)],
            ShadingType::X2 => &[(0, 0), (0, 1), (0, 2), (3, 0)],
            ShadingType::X3 => &[(0, 0), (0, 1), (0, 3), (2, 0)],
            ShadingType::X4 => &[(0, 0), (0, 1), (2, 0), (3, 0)],
            ShadingType::Y1 => &[(0, 0), (1, 0), (2, 0), (3, 0)],
            ShadingType::Y2 => &[(0, 0), (1, 0), (2, 0), (0, 3)],
            ShadingType::Y3 => &[(0, 0), (1, 0), (3, 0), (0, 2)],
            ShadingType::Y4 => &[(0, 0), (1, 0), (0, 2), (0, 3)],
            ShadingType::X1ThreeBox => &[(0, 0), (0, 1), (0, 2)],
            ShadingType::Y1ThreeBox => &[(0, 0), (1, 0), (2, 0)],
        }
    }

    pub fn is_x_form(self) -> bool {
        matches!(
            self,
            ShadingType::X1
                | ShadingType::X2
                | ShadingType::X3
                | ShadingType::X4
                | ShadingType::X1ThreeBox
        )
    }

    /// The form whose frame is the inverse image of this one's.
    pub fn inverse_form(self) -> ShadingType {
        match self {
            ShadingType::X1 => ShadingType::Y1,
            ShadingType::X2 => ShadingType::Y2,
            ShadingType::X3 => ShadingType::Y3,
            ShadingType::X4 => ShadingType::Y4,
            ShadingType::Y1 => ShadingType::X1,
            ShadingType::Y2 => ShadingType::X2,
            ShadingType::Y3 => ShadingType::X3,
            ShadingType::Y4 => ShadingType::X4,
            ShadingType::X1ThreeBox => ShadingType::Y1ThreeBox,
            ShadingType::Y1ThreeBox => ShadingType::X1ThreeBox,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ShadingType::X1 => "X1",
            ShadingType::X2 => "X2",
            ShadingType::X3 => "X3",
            ShadingType::X4 => "X4",
            ShadingType::Y1 => "Y1",
            ShadingType::Y2 => "Y2",
            ShadingType::Y3 => "Y3",
            ShadingType::Y4 => "Y4",
            ShadingType::X1ThreeBox => "X1_3BOX",
            ShadingType::Y1ThreeBox => "Y1_3BOX",
        }
    }

    pub fn from_tag(tag: &str) -> Option<ShadingType> {
        ShadingType::ALL.into_iter().find(|t| t.tag() == tag)
    }
}

/// Builds the length-3 pattern with frame `type` and the length-2 pattern `p`
/// inserted in the interior: `τ = 1·(p.τ + 1)` and the shading is the frame
/// united with `{(a+1, b+1) : (a,b) ∈ p.R}`.
///
/// For Y forms this equals taking the corresponding X instantiation of `p^i`
/// and applying the inverse operation.
pub fn instantiate(ty: ShadingType, p: &MeshPattern) -> Result<MeshPattern, MeshError> {
    if p.k() != 2 {
        return Err(MeshError::WrongLength {
            expected: 2,
            got: p.k(),
        });
    }
    let mut tau = vec![1u8];
    tau.extend(p.tau().as_slice().iter().map(|&v| v + 1));
    let tau = Permutation::from_one_line(&tau).expect("prepended pattern");
    let mut boxes: Vec<(u8, u8)> = ty.frame().to_vec();
    boxes.extend(p.boxes().iter().map(|&(a, b)| (a + 1, b + 1)));
    MeshPattern::new(tau, &boxes)
}

/// Recovers `(type, p)` from a length-3 pattern if its boxes outside the
/// interior `[1,3]²` are exactly one of the known frames.  Returns `None` when
/// no frame matches; a double match (impossible for these frames, but checked)
/// is an error.
pub fn classify_type(q: &MeshPattern) -> Result<Option<(ShadingType, MeshPattern)>, MeshError> {
    if q.k() != 3 {
        return Err(MeshError::WrongLength {
            expected: 3,
            got: q.k(),
        });
    }
    if q.tau().at(1) != 1 {
        return Ok(None);
    }
    let exterior: Vec<(u8, u8)> = q
        .boxes()
        .into_iter()
        .filter(|&(a, b)| a == 0 || b == 0)
        .collect();
    let mut hit = None;
    for ty in ShadingType::ALL {
        let mut frame = ty.frame().to_vec();
        frame.sort_unstable();
        if frame == exterior {
            if hit.is_some() {
                return Err(MeshError::AmbiguousClassification);
            }
            hit = Some(ty);
        }
    }
    let Some(ty) = hit else { return Ok(None) };
    let inner_tau = Permutation::standardize(
        &q.tau().as_slice()[1..]
            .iter()
            .map(|&v| v as i64)
            .collect::<Vec<_>>(),
    )
    .expect("distinct values");
    let inner_boxes: Vec<(u8, u8)> = q
        .boxes()
        .into_iter()
        .filter(|&(a, b)| a >= 1 && b >= 1)
        .map(|(a, b)| (a - 1, b - 1))
        .collect();
    let p = MeshPattern::new(inner_tau, &inner_boxes)?;
    Ok(Some((ty, p)))
}
