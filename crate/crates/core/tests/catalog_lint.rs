//! Transcription lint for the checked-in catalog data: the shading lists are
//! hand-maintained, so every structural relation they must satisfy is enforced
//! here — the minus-antipodal property, the X↔Y inverse pairing, frame
//! classification round-trips, and the expected correspondences between the
//! frame forms and their inner length-2 shadings.

use meshpat::catalog::{Catalog, Status, Technique};
use meshpat::mesh::{classify_type, instantiate, MeshPattern, ShadingType};

fn mp(s: &str) -> MeshPattern {
    s.parse().unwrap()
}

#[test]
fn counts_per_table() {
    let cat = Catalog::load().unwrap();
    assert_eq!(cat.proved().count(), 112);
    assert_eq!(cat.conjectured().count(), 14);
    let by_table: Vec<usize> = (2..=8).map(|t| cat.table(t).count()).collect();
    assert_eq!(by_table, vec![44, 34, 18, 12, 4, 14, 562]);
}

#[test]
fn antipodal_and_symmetry_classes() {
    let cat = Catalog::load().unwrap();
    for e in cat.entries() {
        match e.status {
            Status::Proved | Status::Conjectured => {
                assert!(e.q1.is_minus_antipodal(), "{}", e.id);
                assert!(e.q2.is_minus_antipodal(), "{}", e.id);
            }
            Status::Extended => {
                assert!(!e.q1.is_minus_antipodal(), "{}", e.id);
                assert!(!e.q1.is_symmetric_shading(), "{}", e.id);
            }
        }
    }
}

#[test]
fn x_y_entries_are_inverse_images() {
    let cat = Catalog::load().unwrap();
    let mut checked = 0;
    for e in cat
        .entries()
        .iter()
        .filter(|e| e.status != Status::Extended)
    {
        let mirror_id = e.mirror_id().unwrap();
        let mirror = cat.get(&mirror_id).unwrap();
        assert_eq!(e.q1.mesh_inverse(), mirror.q1, "{} vs {}", e.id, mirror.id);
        assert_eq!(e.q2.mesh_inverse(), mirror.q2, "{} vs {}", e.id, mirror.id);
        checked += 1;
    }
    assert_eq!(checked, 126);
}

#[test]
fn entries_classify_to_their_frame_families() {
    let cat = Catalog::load().unwrap();
    for e in cat
        .entries()
        .iter()
        .filter(|e| e.status != Status::Extended)
    {
        let classified = classify_type(&e.q1).unwrap();
        match e.id.split('_').next().unwrap() {
            "X1" => assert_eq!(
                classified.as_ref().map(|c| c.0),
                Some(ShadingType::X1),
                "{}",
                e.id
            ),
            "X2" => assert_eq!(
                classified.as_ref().map(|c| c.0),
                Some(ShadingType::X2),
                "{}",
                e.id
            ),
            "X3" => assert_eq!(
                classified.as_ref().map(|c| c.0),
                Some(ShadingType::X3),
                "{}",
                e.id
            ),
            "X4" if !e.id.contains('7') && !e.id.contains('8') => {
                assert_eq!(
                    classified.as_ref().map(|c| c.0),
                    Some(ShadingType::X4),
                    "{}",
                    e.id
                )
            }
            "Y1" => assert_eq!(
                classified.as_ref().map(|c| c.0),
                Some(ShadingType::Y1),
                "{}",
                e.id
            ),
            "Y2" => assert_eq!(
                classified.as_ref().map(|c| c.0),
                Some(ShadingType::Y2),
                "{}",
                e.id
            ),
            "Y3" => assert_eq!(
                classified.as_ref().map(|c| c.0),
                Some(ShadingType::Y3),
                "{}",
                e.id
            ),
            _ => {} // X4_7/X4_8/Y4 conjectures and P-pairs checked below
        }
        // the shading shared by q1/q2, and pair orientation, are structural
        assert_eq!(e.q1.boxes(), e.q2.boxes(), "{}", e.id);
        assert_eq!(e.q1.tau().to_string(), "123", "{}", e.id);
        assert_eq!(e.q2.tau().to_string(), "132", "{}", e.id);
    }
    // the standalone pairs 113-116 match no frame form
    for id in ["P113", "P114", "P115", "P116"] {
        let e = cat.get(id).unwrap();
        assert_eq!(classify_type(&e.q1).unwrap(), None, "{id}");
    }
}

#[test]
fn swap_family_entries_have_expected_inner_shadings() {
    let cat = Catalog::load().unwrap();
    // frame-form summary table: inner patterns of the element-swapping entries
    let expected: &[(&str, &str)] = &[
        ("X1_17", "12:(1,0)(1,1)(2,0)(2,1)"),
        ("X1_18", "12:(0,1)(0,2)(1,1)(1,2)"),
        ("X1_19", "12:(0,0)(0,2)(1,0)(1,1)(1,2)(2,2)"),
        ("X1_20", "12:(0,0)(1,0)(1,1)(1,2)(2,0)(2,2)"),
        ("X1_21", "12:(0,0)(0,1)(0,2)(1,1)(2,1)(2,2)"),
        ("X1_22", "12:(0,0)(0,1)(1,1)(2,0)(2,1)(2,2)"),
        ("X2_9", "12:(0,0)(1,0)(1,1)(1,2)(2,0)"),
        ("X2_10", "12:(0,2)(1,0)(1,1)(1,2)(2,2)"),
        ("X2_11", "12:(0,0)(0,1)(1,1)(2,0)(2,1)"),
        ("X2_12", "12:(0,1)(0,2)(1,1)(2,1)(2,2)"),
        ("X2_13", "12:(0,1)(0,2)(1,1)(1,2)"),
        ("X2_14", "12:(0,0)(0,2)(1,0)(1,1)(1,2)(2,2)"),
        ("X2_15", "12:(0,0)(1,0)(1,1)(1,2)(2,0)(2,2)"),
        ("X2_16", "12:(0,0)(0,1)(0,2)(1,1)(2,1)(2,2)"),
        ("X2_17", "12:(0,0)(0,1)(1,1)(2,0)(2,1)(2,2)"),
        ("X3_9", "12:(0,0)(0,2)(1,0)(1,1)(1,2)(2,2)"),
        ("X4_1", "12:(0,2)(1,0)(1,1)(1,2)(2,2)"),
        ("X4_2", "12:(0,1)(1,1)(2,0)(2,1)(2,2)"),
        ("X4_3", "12:(0,0)(0,2)(1,0)(1,1)(1,2)(2,2)"),
        ("X4_4", "12:(0,0)(1,0)(1,1)(1,2)(2,0)(2,2)"),
        ("X4_5", "12:(0,0)(0,1)(1,1)(2,0)(2,1)(2,2)"),
        ("X4_6", "12:(1,0)(1,1)(2,0)(2,1)"),
    ];
    for (id, inner) in expected {
        let e = cat.get(id).unwrap();
        let (_, p) = classify_type(&e.q1).unwrap().unwrap();
        assert_eq!(p, mp(inner), "{id}");
    }
}

#[test]
fn generated_table8_round_trips() {
    let cat = Catalog::load().unwrap();
    for e in cat.table(8) {
        let (ty, p1) = classify_type(&e.q1).unwrap().unwrap();
        assert!(
            e.id.contains(ty.tag()),
            "{} classified as {}",
            e.id,
            ty.tag()
        );
        assert_eq!(instantiate(ty, &p1).unwrap(), e.q1, "{}", e.id);
        let (ty2, p2) = classify_type(&e.q2).unwrap().unwrap();
        assert_eq!(ty, ty2, "{}", e.id);
        assert_eq!(p1.boxes(), p2.boxes(), "{}", e.id);
    }
}

#[test]
fn table8_row_structure() {
    let cat = Catalog::load().unwrap();
    let rows = cat.table8_rows();
    assert_eq!(rows.len(), 5);
    let sizes: Vec<usize> = rows.iter().map(|r| r.p_list.len()).collect();
    assert_eq!(sizes, vec![98, 56, 56, 71, 71]);
    assert_eq!(
        rows.iter().map(|r| r.templates.clone()).collect::<Vec<_>>(),
        vec![
            vec!["X1".to_string(), "Y1".to_string()],
            vec!["X2".to_string(), "Y3".to_string()],
            vec!["Y2".to_string(), "X3".to_string()],
            vec!["X1_3BOX".to_string()],
            vec!["Y1_3BOX".to_string()],
        ]
    );
    let set = |row: &meshpat::catalog::Table8Row| -> std::collections::BTreeSet<Vec<(u8, u8)>> {
        row.p_list.iter().map(|lit| mp(lit).boxes()).collect()
    };
    // row 3 and row 5 hold the inverse images of rows 2 and 4
    let inv = |s: &std::collections::BTreeSet<Vec<(u8, u8)>>| {
        s.iter()
            .map(|boxes| {
                let mut v: Vec<(u8, u8)> = boxes.iter().map(|&(a, b)| (b, a)).collect();
                v.sort_unstable();
                v
            })
            .collect::<std::collections::BTreeSet<_>>()
    };
    assert_eq!(set(&rows[2]), inv(&set(&rows[1])));
    assert_eq!(set(&rows[4]), inv(&set(&rows[3])));
    // row 2 is the first block of row 1
    let row1_first: std::collections::BTreeSet<Vec<(u8, u8)>> = rows[0].p_list[..56]
        .iter()
        .map(|lit| mp(lit).boxes())
        .collect();
    assert_eq!(set(&rows[1]), row1_first);
    // generation counts reconcile against the catalogued totals
    assert_eq!(cat.table8_counts(), (562, 558));
}

#[test]
fn techniques_partition_as_documented() {
    let cat = Catalog::load().unwrap();
    let count = |t: Technique| cat.proved().filter(|e| e.technique == t).count();
    assert_eq!(count(Technique::Symmetry), 32 + 16 + 16);
    assert_eq!(count(Technique::Swap), 6);
    assert_eq!(count(Technique::SingleSwap), 8 + 18 + 2 + 10 + 4 - 2);
    assert_eq!(count(Technique::Recurrence), 2);
    assert!(cat.conjectured().all(|e| e.technique == Technique::Open));
}
