//! Hodge numbers of zero loci through the conormal sequence and its second
//! exterior power.
//!
//! Every input is the `E_1` page of a Koszul hypercohomology spectral sequence.
//! All pages, all exact sequences and Hodge symmetry go into one [`Ledger`];
//! a Hodge number is reported only when the ledger pins it down.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bwbcohom::{CohomologyTable, DimValue, FilteredBundle, SpectralModel};
use crate::error::Result;
use crate::koszul::ZeroLocus;
use crate::ledger::{Ledger, Solution, VarId};
use crate::repcalc::{self, IrrDecomp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    SymmetryForced,
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeCell {
    pub value: DimValue,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiamond {
    pub d: usize,
    /// `cells[p][q] = h^{p,q}`.
    pub cells: Vec<Vec<HodgeCell>>,
}

impl HodgeDiamond {
    pub fn get(&self, p: usize, q: usize) -> &DimValue {
        &self.cells[p][q].value
    }

    pub fn h(&self, p: usize, q: usize) -> Option<BigInt> {
        self.get(p, q).exact().cloned()
    }

    pub fn is_exact(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.value.is_exact())
    }

    /// `h^{p,q} = h^{q,p} = h^{d-p,d-q}` wherever both sides are known.
    pub fn is_symmetric(&self) -> bool {
        let d = self.d;
        (0..=d).all(|p| {
            (0..=d).all(|q| {
                let a = self.h(p, q);
                let agree = |b: Option<BigInt>| a.is_none() || b.is_none() || a == b;
                agree(self.h(q, p)) && agree(self.h(d - p, d - q))
            })
        })
    }

    pub fn hyperkahler(&self) -> bool {
        self.d == 4 && self.h(0, 2) == Some(BigInt::from(1))
    }
}

/// `χ = Σ (-1)^{p+q} h^{p,q}`; `None` if any cell is unknown.
pub fn euler_characteristic(diamond: &HodgeDiamond) -> Option<BigInt> {
    let mut chi = BigInt::from(0);
    for p in 0..=diamond.d {
        for q in 0..=diamond.d {
            let v = diamond.h(p, q)?;
            if (p + q) % 2 == 0 {
                chi += v;
            } else {
                chi -= v;
            }
        }
    }
    Some(chi)
}

/// `2(h^{1,1} - h^{1,2})` for threefolds with `h^{0,1} = h^{0,2} = 0`.
pub fn threefold_chi(diamond: &HodgeDiamond) -> Option<BigInt> {
    if diamond.d != 3 {
        return None;
    }
    Some((diamond.h(1, 1)? - diamond.h(1, 2)?) * 2)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaseReport {
    pub sequences: Vec<String>,
    /// Abutments of every Koszul spectral sequence used.
    pub tables: Vec<(String, CohomologyTable)>,
    pub determined: Vec<(String, DimValue)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Row0,
    Row1,
    Full,
}

struct Chase {
    ledger: Ledger,
    hodge: Vec<Vec<VarId>>,
    groups: Vec<(String, Vec<VarId>)>,
    report: ChaseReport,
}

impl Chase {
    fn new(d: usize) -> Self {
        let mut ledger = Ledger::new();
        let hodge: Vec<Vec<VarId>> =
            (0..=d).map(|p| (0..=d).map(|q| ledger.var(format!("h{p}{q}"))).collect()).collect();
        for p in 0..=d {
            for q in 0..=d {
                ledger.equal(hodge[p][q], hodge[q][p]);
                ledger.equal(hodge[p][q], hodge[d - p][d - q]);
            }
        }
        Chase { ledger, hodge, groups: Vec::new(), report: ChaseReport::default() }
    }

    fn page(&mut self, label: &str, model: &SpectralModel, d: usize) -> Vec<VarId> {
        let vars = model.install(&mut self.ledger, label, 0, d as i64);
        self.groups.push((label.to_string(), vars.clone()));
        vars
    }

    fn interleave(rows: &[&[VarId]]) -> Vec<VarId> {
        let n = rows[0].len();
        (0..n).flat_map(|q| rows.iter().map(move |r| r[q])).collect()
    }
}

fn run(z: &ZeroLocus, stage: Stage) -> Result<(Solution, Chase)> {
    let x = &z.space;
    let d = z.d;
    let levi = x.levi();
    let mut chase = Chase::new(d);

    let trivial = FilteredBundle::completely_reducible(IrrDecomp::trivial(x.rank()));
    let o = z.model(&trivial)?;
    let o_vars = chase.page("O_Z", &o, d);
    for q in 0..=d {
        chase.ledger.equal(chase.hodge[0][q], o_vars[q]);
    }
    chase.report.sequences.push("Koszul resolution of O_Z".into());

    if stage >= Stage::Row1 {
        let fdual = z.dual_bundle()?;
        let omega = x.cotangent();
        let fd = FilteredBundle::completely_reducible(fdual.clone());
        let (a, b) = rayon::join(|| z.model(&fd), || z.model(&omega));
        let a = chase.page("F*|Z", &a?, d);
        let b = chase.page("Omega_X|Z", &b?, d);
        let c = chase.hodge[1].clone();
        let seq = Chase::interleave(&[&a, &b, &c]);
        chase.ledger.exact_sequence(&seq, "conormal");
        chase.report.sequences.push("0 -> F*|Z -> Omega_X|Z -> Omega_Z -> 0".into());

        if stage >= Stage::Full && d == 4 {
            let s2 = FilteredBundle::completely_reducible(repcalc::symmetric_power(&levi, &fdual, 2)?);
            let fo = omega.tensor(x, &fdual)?;
            let o2 = omega.wedge2(x)?;
            let (s, (t, u)) = rayon::join(|| z.model(&s2), || rayon::join(|| z.model(&fo), || z.model(&o2)));
            let s = chase.page("S2F*|Z", &s?, d);
            let t = chase.page("F*(x)Omega_X|Z", &t?, d);
            let u = chase.page("Omega2_X|Z", &u?, d);
            let k: Vec<VarId> = (0..=d).map(|q| chase.ledger.var(format!("K{q}"))).collect();
            chase.groups.push(("K".into(), k.clone()));
            let seq_a = Chase::interleave(&[&s, &t, &k]);
            chase.ledger.exact_sequence(&seq_a, "wedge2.a");
            let h2 = chase.hodge[2].clone();
            let seq_b = Chase::interleave(&[&k, &u, &h2]);
            chase.ledger.exact_sequence(&seq_b, "wedge2.b");
            chase.report.sequences.push("0 -> S2F*|Z -> (F* (x) Omega_X)|Z -> K -> 0".into());
            chase.report.sequences.push("0 -> K -> Omega2_X|Z -> Omega2_Z -> 0".into());
        }
    }

    let sol = chase.ledger.solve()?;
    for (label, vars) in &chase.groups {
        let dims = vars.iter().map(|&v| sol.value(v)).collect();
        chase.report.tables.push((label.clone(), CohomologyTable::from_dims(d, dims)));
    }
    for p in 0..=d {
        for q in 0..=d {
            let v = sol.value(chase.hodge[p][q]);
            if !v.is_exact() {
                chase.report.notes.push(format!("h{p}{q} not determined: {v}"));
            }
        }
    }
    Ok((sol, chase))
}

/// `h^{0,q}` and the hyperkähler verdict (`d = 4` and `h^{0,2} = 1`).
pub fn h0_row(z: &ZeroLocus) -> Result<(Vec<DimValue>, bool)> {
    let (sol, chase) = run(z, Stage::Row0)?;
    let row: Vec<DimValue> = chase.hodge[0].iter().map(|&v| sol.value(v)).collect();
    let hk = z.d == 4 && row[2] == DimValue::Exact(1.into());
    Ok((row, hk))
}

pub fn h1_row(z: &ZeroLocus) -> Result<Vec<DimValue>> {
    let (sol, chase) = run(z, Stage::Row1)?;
    Ok(chase.hodge[1].iter().map(|&v| sol.value(v)).collect())
}

pub fn h22(z: &ZeroLocus) -> Result<DimValue> {
    let (sol, chase) = run(z, Stage::Full)?;
    Ok(sol.value(chase.hodge[2][2]))
}

/// Full diamond with provenance, and the chase record.
pub fn assemble(z: &ZeroLocus) -> Result<(HodgeDiamond, ChaseReport)> {
    assemble_at(z, Stage::Full)
}

/// Rows `p ≤ 1` and everything Hodge symmetry forces from them; `h^{2,2}` of a
/// fourfold stays open. Much cheaper than [`assemble`] on large ambients.
pub fn assemble_rows(z: &ZeroLocus) -> Result<(HodgeDiamond, ChaseReport)> {
    assemble_at(z, Stage::Row1)
}

fn assemble_at(z: &ZeroLocus, stage: Stage) -> Result<(HodgeDiamond, ChaseReport)> {
    let (sol, mut chase) = run(z, stage)?;
    let d = z.d;
    let computed = |p: usize, q: usize| p <= 1 || (d == 4 && p == 2 && q == 2);
    let mut cells = Vec::new();
    for p in 0..=d {
        let mut row = Vec::new();
        for q in 0..=d {
            let value = sol.value(chase.hodge[p][q]);
            let provenance = if !value.is_exact() {
                Provenance::Ambiguous
            } else if computed(p, q) {
                Provenance::Computed
            } else {
                Provenance::SymmetryForced
            };
            if computed(p, q) {
                chase.report.determined.push((format!("h{p}{q}"), value.clone()));
            }
            row.push(HodgeCell { value, provenance });
        }
        cells.push(row);
    }
    Ok((HodgeDiamond { d, cells }, chase.report))
}

/// Compact summary used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeSummary {
    pub numbers: BTreeMap<String, DimValue>,
    pub chi: Option<BigInt>,
    pub hyperkahler: bool,
    pub exact: bool,
}

pub fn summary(diamond: &HodgeDiamond) -> HodgeSummary {
    // Independent cells: p <= q and p + q <= d.
    let mut numbers = BTreeMap::new();
    for p in 0..=diamond.d {
        for q in p..=diamond.d - p {
            numbers.insert(format!("h{p}{q}"), diamond.get(p, q).clone());
        }
    }
    HodgeSummary {
        numbers,
        chi: euler_characteristic(diamond),
        hyperkahler: diamond.hyperkahler(),
        exact: diamond.is_exact(),
    }
}
