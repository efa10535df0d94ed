//! The machine-readable catalog of pattern pairs: the proved and conjectured
//! joint equidistributions (tables 2–7), the generated extended results of
//! table 8, and discovery of candidate shadings from scratch.
//!
//! Catalog data lives in checked-in JSON files, one per table, holding the
//! transcribed shading lists.  Both patterns of a pair share one
//! shading; `q1` fixes τ = 123 and `q2` fixes τ = 132.  Entries named `Xi_j`
//! and `Yi_j` are mirror images under the inverse operation; the integration
//! tests lint that relation, the minus-antipodal property, and the frame
//! classification of every entry.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bij::MapKind;
use crate::dist::{joint_distribution, DistError};
use crate::mesh::{instantiate, MeshError, MeshPattern, ShadingType};

const TABLE2: &str = include_str!("../data/table2.json");
const TABLE3: &str = include_str!("../data/table3.json");
const TABLE4: &str = include_str!("../data/table4.json");
const TABLE5: &str = include_str!("../data/table5.json");
const TABLE6: &str = include_str!("../data/table6.json");
const TABLE7: &str = include_str!("../data/table7.json");
const TABLE8: &str = include_str!("../data/table8.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("malformed catalog data: {0}")]
    Malformed(String),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("unknown pair id {0}")]
    UnknownId(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Provenance of a catalog claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Established by proof (tables 2–6); the finite check is corroboration.
    Proved,
    /// Conjectured (table 7); the finite check is supporting evidence only.
    Conjectured,
    /// Extended non-minus-antipodal results generated from table 8 templates.
    Extended,
}

/// Proof technique attached to an entry; selects the checks that
/// `verify-tables` runs beyond the joint-equidistribution sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    /// Complement/reverse style bijection.
    Symmetry,
    /// Element-swapping chain.
    Swap,
    /// Closed form / recurrence identity.
    Recurrence,
    /// Unique-occurrence swap.
    SingleSwap,
    /// No proof; conjecture.
    Open,
}

/// One catalog pair: both patterns share the shading, with τ = 123 and 132.
#[derive(Debug, Clone)]
pub struct PairEntry {
    pub id: String,
    pub table: u8,
    pub status: Status,
    pub technique: Technique,
    pub q1: MeshPattern,
    pub q2: MeshPattern,
    /// Registered bijection witnessing the equidistribution, when one exists.
    pub map: Option<MapKind>,
    /// Scope of the at-most-one-occurrence claim for single-swap entries.
    pub per_band_uniqueness: bool,
}

impl PairEntry {
    pub fn shading(&self) -> Vec<(u8, u8)> {
        self.q1.boxes()
    }

    /// Id of the mirror entry under the inverse operation, by naming
    /// convention (`X2_5` ↔ `Y2_5`); pairs 113–116 and the numbered
    /// conjectures mirror their odd/even neighbour.
    pub fn mirror_id(&self) -> Option<String> {
        let id = &self.id;
        if let Some(rest) = id.strip_prefix('X') {
            return Some(format!("Y{rest}"));
        }
        if let Some(rest) = id.strip_prefix('Y') {
            return Some(format!("X{rest}"));
        }
        if let Some(num) = id.strip_prefix('P').and_then(|s| s.parse::<u32>().ok()) {
            let mirror = if num % 2 == 1 { num + 1 } else { num - 1 };
            return Some(format!("P{mirror}"));
        }
        None
    }
}

#[derive(Deserialize)]
struct RawEntry {
    id: String,
    table: u8,
    status: Status,
    technique: Technique,
    shading: Vec<(u8, u8)>,
}

#[derive(Deserialize, Serialize, Clone)]
pub struct Table8Row {
    pub templates: Vec<String>,
    pub p_list: Vec<String>,
}

/// The full catalog.
pub struct Catalog {
    entries: Vec<PairEntry>,
    by_id: BTreeMap<String, usize>,
    table8_rows: Vec<Table8Row>,
}

fn pair_from_shading(shading: &[(u8, u8)]) -> Result<(MeshPattern, MeshPattern), MeshError> {
    let q1 = MeshPattern::new("123".parse().unwrap(), shading)?;
    let q2 = MeshPattern::new("132".parse().unwrap(), shading)?;
    Ok((q1, q2))
}

fn split_id(id: &str) -> Option<(&str, u32)> {
    if let Some(num) = id.strip_prefix('P').and_then(|s| s.parse().ok()) {
        return Some(("P", num));
    }
    if id.len() < 4 {
        return None;
    }
    let (family, rest) = id.split_at(2);
    let num = rest.strip_prefix('_')?.parse().ok()?;
    matches!(
        family,
        "X1" | "X2" | "X3" | "X4" | "Y1" | "Y2" | "Y3" | "Y4"
    )
    .then_some((family, num))
}

fn horizontally_symmetric(p: &MeshPattern) -> bool {
    let k = p.k();
    (0..=k).all(|a| (0..=k).all(|b| p.is_shaded(a, b) == p.is_shaded(a, k - b)))
}

fn vertically_symmetric(p: &MeshPattern) -> bool {
    let k = p.k();
    (0..=k).all(|a| (0..=k).all(|b| p.is_shaded(a, b) == p.is_shaded(k - a, b)))
}

/// Bijection registered for a proved entry, keyed by its proof technique.
///
/// X-side entries get the direct map; Y-side entries (and the even-numbered
/// pairs 114/116, stated as inverse images of 113/115) get the
/// inverse-conjugated one.  Symmetry entries pick prefix/band complement or
/// reverse according to which symmetry the inner shading has.
fn registered_map(id: &str, technique: Technique, q1: &MeshPattern) -> Option<MapKind> {
    fn direct(id: &str, technique: Technique, q1: &MeshPattern) -> Option<MapKind> {
        let (family, num) = split_id(id)?;
        match technique {
            Technique::Symmetry => match family {
                "X1" => {
                    let (_, p) = crate::mesh::classify_type(q1).ok().flatten()?;
                    if horizontally_symmetric(&p) {
                        Some(MapKind::PrefixComplement)
                    } else {
                        Some(MapKind::PrefixReverse)
                    }
                }
                "X2" => Some(MapKind::BlockwiseComplement),
                "X3" => Some(MapKind::BlockwiseReverse),
                _ => None,
            },
            Technique::Swap => match (family, num) {
                ("X1", 17) => Some(MapKind::SwapChainReversed),
                ("X1", 18) | ("X2", 13) => Some(MapKind::SwapChain),
                _ => None,
            },
            Technique::SingleSwap => match (family, num) {
                ("X2", 9) | ("X2", 11) | ("X2", 12) => Some(MapKind::SingleSwapPerBand),
                ("X1", _) | ("X2", _) | ("X3", _) | ("X4", _) | ("P", _) => {
                    Some(MapKind::SingleSwap)
                }
                _ => None,
            },
            Technique::Recurrence | Technique::Open => None,
        }
    }
    if id.starts_with('Y') || id == "P114" || id == "P116" {
        let x_id = match id {
            "P114" => "P113".to_string(),
            "P116" => "P115".to_string(),
            _ => format!("X{}", &id[1..]),
        };
        let inner = direct(&x_id, technique, &q1.mesh_inverse())?;
        Some(MapKind::InverseConjugate(Box::new(inner)))
    } else {
        direct(id, technique, q1)
    }
}

/// Map attached to a generated table-8 entry: the complement/reverse
/// constructions transported to the entry's frame, where the inner symmetry
/// admits one.
fn table8_map(ty: ShadingType, p: &MeshPattern) -> Option<MapKind> {
    fn direct(ty: ShadingType, p: &MeshPattern) -> Option<MapKind> {
        match ty {
            ShadingType::X1 => {
                if horizontally_symmetric(p) {
                    Some(MapKind::PrefixComplement)
                } else if vertically_symmetric(p) {
                    Some(MapKind::PrefixReverse)
                } else {
                    None
                }
            }
            ShadingType::X2 | ShadingType::X1ThreeBox => {
                horizontally_symmetric(p).then_some(MapKind::BlockwiseComplement)
            }
            ShadingType::X3 => vertically_symmetric(p).then_some(MapKind::BlockwiseReverse),
            _ => None,
        }
    }
    if matches!(
        ty,
        ShadingType::Y1
            | ShadingType::Y2
            | ShadingType::Y3
            | ShadingType::Y4
            | ShadingType::Y1ThreeBox
    ) {
        let inner = direct(ty.inverse_form(), &p.mesh_inverse())?;
        return Some(MapKind::InverseConjugate(Box::new(inner)));
    }
    direct(ty, p)
}

impl Catalog {
    /// Loads the checked-in tables and generates the table-8 entries.
    pub fn load() -> Result<Catalog, CatalogError> {
        let mut entries: Vec<PairEntry> = Vec::new();
        for (i, raw) in [TABLE2, TABLE3, TABLE4, TABLE5, TABLE6, TABLE7]
            .iter()
            .enumerate()
        {
            let rows: Vec<RawEntry> = serde_json::from_str(raw)
                .map_err(|e| CatalogError::Malformed(format!("table {}: {e}", i + 2)))?;
            for row in rows {
                let (q1, q2) = pair_from_shading(&row.shading)?;
                let map = registered_map(&row.id, row.technique, &q1);
                let per_band = matches!(
                    row.id.as_str(),
                    "X2_9" | "X2_11" | "X2_12" | "Y2_9" | "Y2_11" | "Y2_12"
                );
                entries.push(PairEntry {
                    id: row.id,
                    table: row.table,
                    status: row.status,
                    technique: row.technique,
                    q1,
                    q2,
                    map,
                    per_band_uniqueness: per_band,
                });
            }
        }
        let table8_rows: Vec<Table8Row> = serde_json::from_str(TABLE8)
            .map_err(|e| CatalogError::Malformed(format!("table 8: {e}")))?;
        for row in &table8_rows {
            for tpl in &row.templates {
                let ty = ShadingType::from_tag(tpl)
                    .ok_or_else(|| CatalogError::Malformed(format!("unknown template {tpl}")))?;
                for (idx, lit) in row.p_list.iter().enumerate() {
                    let p1: MeshPattern = lit
                        .parse()
                        .map_err(|e| CatalogError::Malformed(format!("{lit}: {e}")))?;
                    let p2 = MeshPattern::new("21".parse().unwrap(), &p1.boxes())?;
                    let q1 = instantiate(ty, &p1)?;
                    let q2 = instantiate(ty, &p2)?;
                    let map = table8_map(ty, &p1);
                    entries.push(PairEntry {
                        id: format!("T8_{}_row_p{idx:03}", ty.tag()),
                        table: 8,
                        status: Status::Extended,
                        technique: Technique::Symmetry,
                        q1,
                        q2,
                        map,
                        per_band_uniqueness: false,
                    });
                }
            }
        }
        let mut by_id = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if by_id.insert(e.id.clone(), i).is_some() {
                return Err(CatalogError::DuplicateId(e.id.clone()));
            }
        }
        Ok(Catalog {
            entries,
            by_id,
            table8_rows,
        })
    }

    pub fn entries(&self) -> &[PairEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&PairEntry, CatalogError> {
        self.by_id
            .get(id)
            .map(|&i| &self.entries[i])
            .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    pub fn table(&self, table: u8) -> impl Iterator<Item = &PairEntry> {
        self.entries.iter().filter(move |e| e.table == table)
    }

    pub fn proved(&self) -> impl Iterator<Item = &PairEntry> {
        self.entries.iter().filter(|e| e.status == Status::Proved)
    }

    pub fn conjectured(&self) -> impl Iterator<Item = &PairEntry> {
        self.entries
            .iter()
            .filter(|e| e.status == Status::Conjectured)
    }

    pub fn table8_rows(&self) -> &[Table8Row] {
        &self.table8_rows
    }

    /// Counts reconciling the extended-results generation: instantiations as
    /// listed (one per template × p-list cell, duplicates included) versus
    /// distinct (template, inner shading) pairs.
    pub fn table8_counts(&self) -> (usize, usize) {
        let mut listed = 0;
        let mut distinct = std::collections::BTreeSet::new();
        for row in &self.table8_rows {
            for tpl in &row.templates {
                for lit in &row.p_list {
                    listed += 1;
                    let p: MeshPattern = lit.parse().unwrap();
                    distinct.insert((tpl.clone(), p.shading_bits()));
                }
            }
        }
        (listed, distinct.len())
    }
}

/// Result of the from-scratch candidate search.
#[derive(Debug, Clone, Serialize)]
pub struct DiscoveryReport {
    pub n_max: usize,
    /// Shadings passing the joint-equidistribution test at every n ≤ n_max,
    /// sorted; each with its inverse-orbit representative.
    pub passing: Vec<DiscoveredShading>,
    /// Number of distinct inverse orbits among the passing shadings.
    pub orbit_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscoveredShading {
    pub shading: Vec<(u8, u8)>,
    /// Lexicographically least of the shading and its inverse image.
    pub orbit: Vec<(u8, u8)>,
    /// Catalog ids with exactly this shading (proved or conjectured).
    pub catalog_ids: Vec<String>,
}

/// Enumerates all 1024 minus-antipodal shadings of the `[0,3]²` grid (one of
/// each off-diagonal box pair, any diagonal subset) and keeps those whose
/// (123, R)/(132, R) pair is jointly equidistributed at every `n ≤ n_max`.
pub fn discover_candidates(catalog: &Catalog, n_max: usize) -> Result<DiscoveryReport, DistError> {
    let mut shadings: Vec<Vec<(u8, u8)>> = Vec::with_capacity(1024);
    let pairs: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for choice in 0u32..64 {
        for diag in 0u32..16 {
            let mut boxes = Vec::new();
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    boxes.push((a, b));
                } else {
                    boxes.push((b, a));
                }
            }
            for d in 0..4u8 {
                if diag & (1 << d) != 0 {
                    boxes.push((d, d));
                }
            }
            boxes.sort_unstable();
            shadings.push(boxes);
        }
    }

    let passing: Vec<Vec<(u8, u8)>> = shadings
        .into_par_iter()
        .map(|boxes| {
            let (q1, q2) = pair_from_shading(&boxes).expect("boxes in range");
            for n in 1..=n_max {
                let d = joint_distribution(&q1, &q2, n)?;
                if !d.is_symmetric() {
                    return Ok(None);
                }
            }
            Ok(Some(boxes))
        })
        .collect::<Result<Vec<Option<_>>, DistError>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut by_shading: BTreeMap<Vec<(u8, u8)>, Vec<String>> = BTreeMap::new();
    for e in catalog
        .entries()
        .iter()
        .filter(|e| e.status != Status::Extended)
    {
        by_shading
            .entry(e.shading())
            .or_default()
            .push(e.id.clone());
    }
    let mut out = Vec::new();
    let mut orbits = std::collections::BTreeSet::new();
    let mut sorted = passing;
    sorted.sort_unstable();
    for boxes in sorted {
        let mut inv: Vec<(u8, u8)> = boxes.iter().map(|&(a, b)| (b, a)).collect();
        inv.sort_unstable();
        let orbit = if inv < boxes { inv } else { boxes.clone() };
        orbits.insert(orbit.clone());
        let catalog_ids = by_shading.get(&boxes).cloned().unwrap_or_default();
        out.push(DiscoveredShading {
            shading: boxes,
            orbit,
            catalog_ids,
        });
    }
    Ok(DiscoveryReport {
        n_max,
        passing: out,
        orbit_count: orbits.len(),
    })
}

/// Shadings of all proved and conjectured entries, deduplicated.
pub fn catalog_shadings(catalog: &Catalog) -> Vec<Vec<(u8, u8)>> {
    let mut out: Vec<Vec<(u8, u8)>> = catalog
        .entries()
        .iter()
        .filter(|e| e.status != Status::Extended)
        .map(|e| e.shading())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Text form of a shading used in reports.
pub fn shading_literal(boxes: &[(u8, u8)]) -> String {
    let mut s = String::new();
    for (a, b) in boxes {
        s.push_str(&format!("({a},{b})"));
    }
    s
}

/// Parses either a catalog id or a pair of pattern literals.
pub fn resolve_pair(
    catalog: &Catalog,
    args: &[String],
) -> Result<(String, MeshPattern, MeshPattern), CatalogError> {
    match args {
        [id] => {
            let e = catalog.get(id)?;
            Ok((e.id.clone(), e.q1.clone(), e.q2.clone()))
        }
        [a, b] => {
            let q1: MeshPattern = a
                .parse()
                .map_err(|e| CatalogError::Malformed(format!("{a}: {e}")))?;
            let q2: MeshPattern = b
                .parse()
                .map_err(|e| CatalogError::Malformed(format!("{b}: {e}")))?;
            Ok((format!("{q1} vs {q2}"), q1, q2))
        }
        _ => Err(CatalogError::Malformed(
            "expected one id or two pattern literals".into(),
        )),
    }
}
