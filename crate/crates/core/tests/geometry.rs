//! Dimensions, indices, embeddings and dex values of the exceptional spaces.

use bwbforge_core::{HomSpace, Weight};
use num_bigint::BigInt;

fn x(s: &str) -> HomSpace {
    s.parse().unwrap()
}

fn fw(rank: usize, idx: &[usize]) -> Weight {
    let mut w = Weight::zero(rank);
    for &i in idx {
        w.0[i - 1] += 1;
    }
    w
}

const DIM_INDEX: [(&str, usize, i64); 25] = [
    ("E6/P1", 16, 12),
    ("E6/P2", 21, 11),
    ("E6/P3", 25, 9),
    ("E6/P4", 29, 7),
    ("E6/P5", 25, 9),
    ("E6/P6", 16, 12),
    ("E7/P1", 33, 17),
    ("E7/P2", 42, 14),
    ("E7/P3", 47, 11),
    ("E7/P4", 53, 8),
    ("E7/P5", 50, 10),
    ("E7/P6", 42, 13),
    ("E7/P7", 27, 18),
    ("E8/P1", 78, 23),
    ("E8/P2", 92, 17),
    ("E8/P3", 98, 13),
    ("E8/P4", 106, 9),
    ("E8/P5", 104, 11),
    ("E8/P6", 97, 14),
    ("E8/P7", 83, 19),
    ("E8/P8", 57, 29),
    ("F4/P1", 15, 8),
    ("F4/P2", 20, 5),
    ("F4/P3", 20, 7),
    ("F4/P4", 15, 11),
];

const EMBED: [(&str, u64); 27] = [
    ("E6/P1", 26),
    ("E6/P2", 77),
    ("E6/P3", 350),
    ("E6/P4", 2924),
    ("E6/P5", 350),
    ("E6/P6", 26),
    ("E7/P1", 132),
    ("E7/P2", 911),
    ("E7/P3", 8644),
    ("E7/P4", 365749),
    ("E7/P5", 27663),
    ("E7/P6", 1538),
    ("E7/P7", 55),
    ("E8/P1", 3874),
    ("E8/P2", 147249),
    ("E8/P3", 6695999),
    ("E8/P4", 6899079263),
    ("E8/P5", 146325269),
    ("E8/P6", 2450239),
    ("E8/P7", 30379),
    ("E8/P8", 247),
    ("F4/P1", 51),
    ("F4/P2", 1273),
    ("F4/P3", 272),
    ("F4/P4", 25),
    ("G2/P1", 6),
    ("G2/P2", 13),
];

#[test]
fn exceptional_dimensions_and_indices() {
    let all = HomSpace::exceptional();
    assert_eq!(all.len(), 27);
    for (s, d, i) in DIM_INDEX {
        let sp = x(s);
        assert_eq!((sp.dimension(), sp.fano_index()), (d, i), "{s}");
    }
    for (s, d, i) in [("G2/P1", 5, 5), ("G2/P2", 5, 3)] {
        assert_eq!((x(s).dimension(), x(s).fano_index()), (d, i), "{s}");
    }
}

#[test]
fn minimal_embeddings() {
    for (s, n) in EMBED {
        assert_eq!(x(s).minimal_embedding_dim(), BigInt::from(n), "{s}");
    }
}

#[test]
fn dex_tables() {
    // (space, fundamental indices, rank, dex)
    let rows: &[(&str, &[usize], u64, i64)] = &[
        ("E6/P4", &[1], 3, 1),
        ("E6/P4", &[2], 2, 1),
        ("E6/P4", &[3], 3, 2),
        ("E6/P4", &[5], 3, 2),
        ("E6/P4", &[6], 3, 1),
        ("E6/P4", &[1, 2], 6, 5),
        ("E6/P4", &[2, 3], 6, 7),
        ("E7/P2", &[1], 7, 4),
        ("E7/P2", &[3], 21, 24),
        ("E7/P2", &[4], 35, 60),
        ("E7/P2", &[5], 35, 45),
        ("E7/P2", &[6], 21, 18),
        ("E7/P2", &[7], 7, 3),
        ("E7/P2", &[1, 1], 28, 32),
        ("E7/P2", &[7, 7], 28, 24),
        ("E6/P2", &[1], 6, 3),
        ("E6/P2", &[3], 15, 15),
        ("E6/P2", &[5], 15, 15),
        ("E6/P2", &[6], 6, 3),
        ("E6/P3", &[1], 2, 1),
        ("E6/P3", &[1, 1], 3, 3),
        ("E6/P3", &[1, 1, 1], 4, 6),
        ("E6/P3", &[2], 5, 3),
        ("E6/P3", &[5], 10, 8),
        ("E6/P3", &[6], 5, 2),
        ("E7/P1", &[7], 12, 6),
        ("F4/P1", &[4], 6, 3),
        ("F4/P4", &[1], 7, 7),
        ("F4/P4", &[3], 8, 12),
    ];
    for &(s, idx, rank, dex) in rows {
        let sp = x(s);
        let w = fw(sp.rank(), idx);
        let r = bwbforge_core::repcalc::weyl_dim(&sp.levi(), &w).unwrap();
        assert_eq!(r, BigInt::from(rank), "{s} {idx:?}");
        assert_eq!(sp.dex(&w).unwrap(), dex, "{s} {idx:?}");
        assert_eq!(sp.dex_by_projection(&w).unwrap(), dex.into(), "{s} {idx:?}");
    }
}

#[test]
fn dex_of_line_bundles_and_cotangent() {
    // det Ω = K = O(-ι); Ω is filtered, so sum over its graded pieces.
    for sp in HomSpace::exceptional() {
        assert_eq!(sp.dex(&sp.line(3)).unwrap(), 3);
        let mut total = 0;
        for (_, piece) in sp.gradation().pieces {
            for (w, c) in piece.iter() {
                total += sp.dex(w).unwrap() * c as i64;
            }
        }
        assert_eq!(total, -sp.fano_index(), "{sp}");
    }
}
