//! One PASS/FAIL line per acceptance criterion.
//!
//! A failing criterion is reported, not hidden: the run still exits 0 so the
//! remaining suites stay usable, and the detail line says what differed.

use std::path::Path;
use std::time::{Duration, Instant};

use bwbforge_cli::grammar::parse_bundle;
use bwbforge_cli::run;
use bwbforge_core::bwbcohom::{self, bott, filtered_cohomology};
use bwbforge_core::classify::{enumerate_candidates, EnumOptions};
use bwbforge_core::hodge::{self, euler_characteristic};
use bwbforge_core::koszul::{exterior_dual_powers, restricted_cohomology, structure_cohomology};
use bwbforge_core::repcalc::{self, exterior_power, symmetric_power, tensor_decompose};
use bwbforge_core::{BundleSum, DimValue, FilteredBundle, HomSpace, IrrDecomp, ReductiveContext, Weight, ZeroLocus};
use num_bigint::BigInt;
use serde_json::Value;

/// Cold wall-clock bound for the fourfold classification.
const CLASSIFY_BUDGET: Duration = Duration::from_secs(600);

type Check = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Check);

struct Problems(Vec<String>);

impl Problems {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: impl std::fmt::Display, got: T, want: T) {
        if got != want {
            self.0.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn ok(&mut self, what: impl std::fmt::Display, cond: bool) {
        if !cond {
            self.0.push(format!("{what}: failed"));
        }
    }

    fn finish(self, pass: String) -> Check {
        if self.0.is_empty() {
            Ok(pass)
        } else {
            Err(self.0)
        }
    }
}

fn x(s: &str) -> HomSpace {
    s.parse().unwrap()
}

fn golden(name: &str) -> Vec<Vec<String>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

fn key(space: &str, bundle: &str) -> (HomSpace, BundleSum) {
    let s = x(space);
    (s, parse_bundle(bundle, &s).unwrap())
}

fn cli_json(line: &str) -> Result<Value, String> {
    let argv = std::iter::once("bwbforge").chain(line.split(' '));
    let out = run(argv);
    if out.code != 0 {
        return Err(format!("exit {}: {}", out.code, out.stderr.trim()));
    }
    serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
}

fn rows_of(v: &Value) -> Vec<(HomSpace, BundleSum, Value)> {
    v["results"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let (s, b) = key(r["space"].as_str().unwrap(), r["bundle"].as_str().unwrap());
            (s, b, r["hodge"].clone())
        })
        .collect()
}

fn same_pairs(p: &mut Problems, got: &[(HomSpace, BundleSum, Value)], file: &str) {
    let want: Vec<_> = golden(file).iter().map(|c| key(&c[0], &c[1])).collect();
    for (s, b, _) in got {
        p.ok(format!("unexpected row {s} {b}"), want.contains(&(*s, b.clone())));
    }
    for (s, b) in &want {
        p.ok(format!("missing row {s} {b}"), got.iter().any(|(gs, gb, _)| gs == s && gb == b));
    }
    p.eq("row count", got.len(), want.len());
}

fn c1() -> Check {
    let start = Instant::now();
    let v = cli_json("--no-cache --format json classify --d 4 --hodge none").map_err(|e| vec![e])?;
    let took = start.elapsed();
    let mut p = Problems(Vec::new());
    same_pairs(&mut p, &rows_of(&v), "table1.tsv");
    p.ok(format!("cold run took {took:.1?}"), took < CLASSIFY_BUDGET);
    p.finish(format!("12 rows, cold {took:.1?}"))
}

fn c2() -> Check {
    let v = cli_json("--no-cache --format json classify --d 3 --hodge none").map_err(|e| vec![e])?;
    let mut p = Problems(Vec::new());
    same_pairs(&mut p, &rows_of(&v), "table2.tsv");
    p.finish("6 rows".into())
}

fn int(v: &Value) -> Option<i64> {
    v.as_i64()
}

fn hodge_rows(d: usize) -> Result<Vec<(HomSpace, BundleSum, Value)>, Vec<String>> {
    let v = cli_json(&format!("--no-cache --format json classify --d {d} --hodge rows")).map_err(|e| vec![e])?;
    Ok(rows_of(&v))
}

fn c3() -> Check {
    let rows = hodge_rows(4)?;
    let mut p = Problems(Vec::new());
    for c in golden("table1.tsv") {
        let (s, b) = key(&c[0], &c[1]);
        let Some((_, _, h)) = rows.iter().find(|(rs, rb, _)| *rs == s && *rb == b) else {
            p.0.push(format!("{s} {b}: row missing"));
            continue;
        };
        p.eq(format!("{s} {} h02", c[1]), int(&h["h02"]), Some(0));
        p.eq(format!("{s} {} h11", c[1]), int(&h["h11"]), Some(1));
        let (got, want) = (int(&h["h13"]), c[2].parse().ok());
        if got != want {
            let oracle = h13_by_euler(&s, &b);
            p.0.push(format!("{s} {} h13: got {got:?}, expected {want:?}; Euler characteristic oracle gives {oracle}", c[1]));
        }
    }
    p.finish("h02=0, h11=1 and h13 on all 12 rows".into())
}

/// `-1 - χ(Ω_Z)` with `χ(Ω_Z) = χ(Ω_X|_Z) - χ(F*|_Z)`, valid when
/// `h10 = h12 = 0` and `h11 = 1`.
fn h13_by_euler(s: &HomSpace, b: &BundleSum) -> BigInt {
    let z = ZeroLocus::new(*s, b.clone()).unwrap();
    let page = exterior_dual_powers(&z).unwrap();
    let levi = s.levi();
    let chi = |e: &FilteredBundle| {
        let mut total = BigInt::from(0);
        for g in &e.gradeds {
            for (p, t) in page.terms.iter().enumerate() {
                let r = tensor_decompose(&levi, g, t).unwrap();
                let c = bwbcohom::bundle_cohomology(s, &r).unwrap().euler_characteristic().unwrap();
                if p % 2 == 0 {
                    total += c;
                } else {
                    total -= c;
                }
            }
        }
        total
    };
    let conormal = FilteredBundle::completely_reducible(z.dual_bundle().unwrap());
    BigInt::from(-1) - (chi(&s.cotangent()) - chi(&conormal))
}

fn c4() -> Check {
    let rows = hodge_rows(3)?;
    let mut p = Problems(Vec::new());
    for c in golden("table2.tsv") {
        let (s, b) = key(&c[0], &c[1]);
        let Some((_, _, h)) = rows.iter().find(|(rs, rb, _)| *rs == s && *rb == b) else {
            p.0.push(format!("{s} {b}: row missing"));
            continue;
        };
        p.eq(format!("{s} {} h12", c[1]), int(&h["h12"]), c[2].parse().ok());
        p.eq(format!("{s} {} chi", c[1]), int(&h["chi"]), c[3].parse().ok());
    }
    p.finish("h12 and chi on all 6 rows".into())
}

fn exact(v: &DimValue) -> Option<i64> {
    v.exact().and_then(|b| i64::try_from(b.clone()).ok())
}

fn c5() -> Check {
    let mut p = Problems(Vec::new());
    let (g1, g2) = (x("G2/P1"), x("G2/P2"));
    let h5 = |s: &HomSpace, w: [i32; 2]| exact(bwbcohom::bwb(s, &Weight::new(w)).unwrap().dim(5));
    p.eq("H^5(G2/P2, O(-6))", h5(&g2, [0, -6]), Some(273));
    p.eq("H^5(G2/P2, O(-9))", h5(&g2, [0, -9]), Some(3542));
    p.eq("H^5(G2/P1, O(-10))", h5(&g1, [-10, 0]), Some(378));
    let e = FilteredBundle::new(vec![
        IrrDecomp::irreducible(Weight::new([-8, 1])),
        IrrDecomp::irreducible(Weight::new([-6, 0])),
    ]);
    p.eq("H^5(G2/P1, E(-5))", exact(filtered_cohomology(&g1, &e).unwrap().dim(5)), Some(21));

    let z = ZeroLocus::new(g2, BundleSum::lines(&g2, &[3])).unwrap();
    let line = |t: i32| FilteredBundle::completely_reducible(IrrDecomp::irreducible(g2.line(t)));
    p.eq("H^4(Z, O(-3)|Z)", exact(restricted_cohomology(&z, &line(-3)).unwrap().dim(4)), Some(272));
    p.eq("H^4(Z, O(-6)|Z)", exact(restricted_cohomology(&z, &line(-6)).unwrap().dim(4)), Some(3269));
    let (dia, _) = hodge::assemble(&z).unwrap();
    p.eq("G2/P2 O(3) h22", exact(dia.get(2, 2)), Some(1080));
    p.eq("G2/P2 O(3) chi", euler_characteristic(&dia), Some(BigInt::from(1602)));
    let z = ZeroLocus::new(g1, BundleSum::lines(&g1, &[5])).unwrap();
    let (dia, _) = hodge::assemble(&z).unwrap();
    p.eq("G2/P1 O(5) h22", exact(dia.get(2, 2)), Some(1472));
    p.eq("G2/P1 O(5) chi", euler_characteristic(&dia), Some(BigInt::from(2190)));
    p.finish("10 checkpoints".into())
}

fn c6() -> Check {
    let mut p = Problems(Vec::new());
    let gr = x("A5/P2");
    let z = ZeroLocus::new(gr, BundleSum::new([(Weight::new([3, 0, 0, 0, 0]), 1)])).unwrap();
    p.eq("h^2(O_Z)", exact(structure_cohomology(&z).unwrap().dim(2)), Some(1));
    let (dia, _) = hodge::assemble_rows(&z).unwrap();
    p.ok("hyperkahler verdict", dia.hyperkahler());
    p.ok("3w1-6w2+rho singular", bott(&gr, &Weight::new([3, -6, 0, 0, 0])).is_none());
    p.finish("h2(O_Z)=1, verdict positive, weight singular".into())
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

const EMBED: [(&str, u64); 12] = [
    ("E6/P1", 26),
    ("E6/P2", 77),
    ("E6/P3", 350),
    ("E7/P1", 132),
    ("E7/P2", 911),
    ("E8/P4", 6899079263),
    ("E8/P8", 247),
    ("F4/P1", 51),
    ("F4/P3", 272),
    ("F4/P4", 25),
    ("G2/P1", 6),
    ("G2/P2", 13),
];

fn c7() -> Check {
    let mut p = Problems(Vec::new());
    for (s, d, i) in DIM_INDEX.into_iter().chain([("G2/P1", 5, 5), ("G2/P2", 5, 3)]) {
        p.eq(s, (x(s).dimension(), x(s).fano_index()), (d, i));
    }
    for (s, n) in EMBED {
        p.eq(format!("{s} embedding"), x(s).minimal_embedding_dim(), BigInt::from(n));
    }
    p.finish("25 pairs + G2, embeddings incl. E8/P4 in P^6899079263".into())
}

fn fw(rank: usize, idx: &[usize]) -> Weight {
    let mut w = Weight::zero(rank);
    for &i in idx {
        w.0[i - 1] += 1;
    }
    w
}

fn c8() -> Check {
    let mut p = Problems(Vec::new());
    let rows: &[(&str, &[usize], i64)] = &[
        ("E6/P4", &[1], 1),
        ("E6/P4", &[2], 1),
        ("E6/P4", &[3], 2),
        ("E6/P4", &[5], 2),
        ("E6/P4", &[6], 1),
        ("E6/P4", &[1, 2], 5),
        ("E6/P4", &[2, 3], 7),
        ("E7/P2", &[1], 4),
        ("E7/P2", &[3], 24),
        ("E7/P2", &[4], 60),
        ("E7/P2", &[5], 45),
        ("E7/P2", &[6], 18),
        ("E7/P2", &[7], 3),
        ("E7/P2", &[1, 1], 32),
        ("E7/P2", &[7, 7], 24),
        ("E6/P2", &[1], 3),
        ("E6/P2", &[3], 15),
        ("E6/P2", &[5], 15),
        ("E6/P2", &[6], 3),
        ("E6/P3", &[1], 1),
        ("E6/P3", &[1, 1], 3),
        ("E6/P3", &[1, 1, 1], 6),
        ("E6/P3", &[2], 3),
        ("E6/P3", &[5], 8),
        ("E6/P3", &[6], 2),
        ("E7/P1", &[7], 6),
        ("F4/P1", &[4], 3),
        ("F4/P4", &[1], 7),
        ("F4/P4", &[3], 12),
    ];
    for &(s, idx, dex) in rows {
        let sp = x(s);
        p.eq(format!("dex {s} {idx:?}"), sp.dex(&fw(sp.rank(), idx)).ok(), Some(dex));
    }
    let mut swept = 0;
    for (fam, lo) in [("A", 1), ("C", 2), ("D", 4)] {
        for r in lo..=6 {
            let g: bwbforge_core::RootSystemSpec = format!("{fam}{r}").parse().unwrap();
            let ks: Vec<usize> = if fam == "D" { vec![r] } else { (1..=r).collect() };
            for k in ks {
                let sp = HomSpace::new(g, k).unwrap();
                for bits in 0u32..(1 << r) {
                    for t in -1..=2 {
                        let mut w = Weight::new((0..r).map(|i| ((bits >> i) & 1) as i32));
                        w.0[k - 1] = t;
                        let sum = sp.dex(&w).map(Into::into).ok();
                        let closed = sp.dex_closed_form(&w).ok().flatten();
                        p.eq(format!("closed form {sp} {w}"), closed, sum);
                        swept += 1;
                    }
                }
            }
        }
    }
    p.finish(format!("{} table values, {swept} sweep points", rows.len()))
}

fn c9() -> Check {
    let mut p = Problems(Vec::new());
    // Serre duality on a deterministic grid.
    for s in ["G2/P1", "G2/P2", "B3/P1", "C3/P2", "F4/P4", "E6/P1"] {
        let sp = x(s);
        let n = sp.dimension();
        for t in -14..5 {
            for j in 0..sp.rank() {
                let mut w = sp.line(t);
                if j != sp.k - 1 {
                    w.0[j] += 1;
                }
                let dual = repcalc::dual_highest_weight(&sp.levi(), &w).unwrap();
                let mirror = dual.sub(&sp.line(sp.fano_index() as i32));
                let a = bwbcohom::bwb(&sp, &w).unwrap();
                let b = bwbcohom::bwb(&sp, &mirror).unwrap();
                for q in 0..=n {
                    p.eq(format!("Serre {sp} {w} q={q}"), a.dim(q), b.dim(n - q));
                }
            }
        }
    }
    // Freudenthal totals.
    for (g, lam) in [("G2", vec![2, 1]), ("F4", vec![1, 0, 0, 1]), ("E6", vec![1, 0, 0, 0, 0, 1]), ("B3", vec![1, 1, 1])] {
        let ctx = ReductiveContext::group(g.parse().unwrap());
        let lam = Weight::new(lam);
        let ch = repcalc::weight_multiplicities(&ctx, &lam).unwrap();
        p.eq(format!("Freudenthal {g} {lam}"), BigInt::from(ch.total()), repcalc::weyl_dim(&ctx, &lam).unwrap());
    }
    // Λ-ring: Λ²(A ⊕ B) and the Koszul identity in degree 2.
    for g in ["A2", "B2", "G2"] {
        let ctx = ReductiveContext::group(g.parse().unwrap());
        let a = IrrDecomp::irreducible(Weight::new([1, 0]));
        let b = IrrDecomp::irreducible(Weight::new([0, 1]));
        let mut v = a.clone();
        v.extend(&b);
        let mut rhs = exterior_power(&ctx, &a, 2).unwrap();
        rhs.extend(&exterior_power(&ctx, &b, 2).unwrap());
        rhs.extend(&tensor_decompose(&ctx, &a, &b).unwrap());
        p.eq(format!("Λ² of a sum over {g}"), exterior_power(&ctx, &v, 2).unwrap(), rhs);
        let mut even = symmetric_power(&ctx, &v, 2).unwrap();
        even.extend(&exterior_power(&ctx, &v, 2).unwrap());
        p.eq(format!("S² + Λ² = V⊗V over {g}"), even, tensor_decompose(&ctx, &v, &v).unwrap());
    }
    // Certificates, diamond symmetry and χ on the fourfold rows.
    for c in golden("table1.tsv") {
        let (s, b) = key(&c[0], &c[1]);
        let z = ZeroLocus::new(s, b.clone()).unwrap();
        let (dia, rep) = hodge::assemble_rows(&z).unwrap();
        for (name, t) in &rep.tables {
            p.ok(format!("certificate {s} {b}: {name}"), t.is_exact());
        }
        p.ok(format!("{s} {b} symmetric"), dia.is_symmetric());
        let (dia, _) = hodge::assemble(&z).unwrap();
        let h = |p: usize, q: usize| exact(dia.get(p, q)).unwrap_or(i64::MIN);
        let chi = 48 + 6 * (h(1, 1) - h(1, 2) + h(1, 3));
        p.eq(format!("{s} {b} chi"), euler_characteristic(&dia), Some(BigInt::from(chi)));
        p.eq(format!("{s} {b} h22"), h(2, 2), 44 + 4 * h(1, 1) - 2 * h(1, 2) + 4 * h(1, 3));
    }
    // Ratio pruning against brute force.
    for s in ["F4/P1", "F4/P2", "F4/P3", "F4/P4", "G2/P1", "G2/P2"] {
        for d in 0..7 {
            let fast = enumerate_candidates(&x(s), d, EnumOptions::default()).unwrap();
            let slow = enumerate_candidates(&x(s), d, EnumOptions { ratio_fast_path: false, exceptions: true }).unwrap();
            p.eq(format!("pruning {s} d={d}"), fast.candidates, slow.candidates);
        }
    }
    p.finish("Serre, Freudenthal, Λ-ring, certificates, diamonds, pruning".into())
}

fn main() {
    let checks: [Criterion; 9] = [
        ("classification d=4", c1),
        ("classification d=3", c2),
        ("fourfold Hodge numbers", c3),
        ("threefold Hodge numbers", c4),
        ("worked cohomology checkpoints", c5),
        ("Beauville-Donagi regression", c6),
        ("geometry oracle", c7),
        ("dex oracle", c8),
        ("property suites", c9),
    ];
    let mut passed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        match f() {
            Ok(detail) => {
                passed += 1;
                println!("criterion {}: PASS  {name} ({detail})", i + 1);
            }
            Err(problems) => {
                println!("criterion {}: FAIL  {name}", i + 1);
                for m in problems {
                    println!("    {m}");
                }
            }
        }
    }
    println!("{passed}/{} criteria pass", checks.len());
}
