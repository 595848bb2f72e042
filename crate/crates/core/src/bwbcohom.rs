//! Borel-Weil-Bott cohomology and filtered bundles.
//!
//! `H^{ℓ(w)}(G/P, E_λ) = V_G(w(λ+ρ) - ρ)^*` when `λ + ρ` is regular, zero otherwise.
//! Filtered bundles and Koszul complexes are handled by [`SpectralModel`]: the
//! `E_1` page is known exactly, and every possible cancellation between entries
//! becomes a nonnegative unknown in a [`Ledger`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homspace::HomSpace;
pub use crate::ledger::DimValue;
use crate::ledger::{Ledger, VarId};
use crate::repcalc::{self, checked_add, checked_mul, Character, IrrDecomp, Mult};
use crate::rootdata::{Coords, Weight};

/// `degree → (G-dominant weight → multiplicity)`.
pub type ModuleTable = BTreeMap<usize, BTreeMap<Weight, Mult>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTerm {
    pub weight: Weight,
    pub mult: Mult,
    pub dim: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub top: usize,
    /// Known module content per degree; empty when only dimensions are known.
    pub entries: BTreeMap<usize, Vec<CohomologyTerm>>,
    pub dims: Vec<DimValue>,
}

impl CohomologyTable {
    pub fn from_modules(x: &HomSpace, top: usize, modules: &ModuleTable) -> Result<Self> {
        let g = x.group_ctx();
        let mut entries = BTreeMap::new();
        let mut dims = vec![BigInt::zero(); top + 1];
        for (&q, mods) in modules {
            if q > top {
                return Err(Error::Internal(format!("degree {q} above {top}")));
            }
            let mut terms = Vec::new();
            for (w, &m) in mods {
                let dim = repcalc::weyl_dim(&g, w)? * BigInt::from(m);
                dims[q] += &dim;
                terms.push(CohomologyTerm { weight: w.clone(), mult: m, dim });
            }
            if !terms.is_empty() {
                entries.insert(q, terms);
            }
        }
        Ok(CohomologyTable { top, entries, dims: dims.into_iter().map(DimValue::Exact).collect() })
    }

    pub fn from_dims(top: usize, dims: Vec<DimValue>) -> Self {
        CohomologyTable { top, entries: BTreeMap::new(), dims }
    }

    pub fn is_exact(&self) -> bool {
        self.dims.iter().all(DimValue::is_exact)
    }

    pub fn dim(&self, q: usize) -> &DimValue {
        &self.dims[q]
    }

    pub fn exact_dims(&self) -> Option<Vec<BigInt>> {
        self.dims.iter().map(|d| d.exact().cloned()).collect()
    }

    /// `Σ (-1)^q h^q`, when every degree is exact.
    pub fn euler_characteristic(&self) -> Option<BigInt> {
        let dims = self.exact_dims()?;
        Some(dims.iter().enumerate().map(|(q, d)| if q % 2 == 0 { d.clone() } else { -d }).sum())
    }
}

/// Bott data for one weight: `(degree, w(λ+ρ)-ρ)`, or `None` when singular.
pub fn bott(x: &HomSpace, lambda: &Weight) -> Option<(usize, Weight)> {
    let d = x.group.data();
    let mut v: Coords = lambda.0.iter().map(|c| c + 1).collect();
    let len = d.climb_in_place(&mut v, x.group.full_mask())?;
    for c in v.iter_mut() {
        *c -= 1;
    }
    Some((len as usize, Weight(v)))
}

pub fn bwb(x: &HomSpace, lambda: &Weight) -> Result<CohomologyTable> {
    x.require_p_dominant(lambda)?;
    let mut m = ModuleTable::new();
    if let Some((q, w)) = bott(x, lambda) {
        m.entry(q).or_default().insert(w, 1);
    }
    CohomologyTable::from_modules(x, x.dimension(), &m)
}

fn add_module(m: &mut ModuleTable, q: usize, w: Weight, c: Mult) -> Result<()> {
    let e = m.entry(q).or_default().entry(w).or_default();
    *e = checked_add(*e, c)?;
    Ok(())
}

fn clean(mut m: ModuleTable) -> Result<ModuleTable> {
    for mods in m.values_mut() {
        mods.retain(|_, c| *c != 0);
        if let Some((w, c)) = mods.iter().find(|(_, c)| **c < 0) {
            return Err(Error::Internal(format!("negative cohomology multiplicity {c} at {w}")));
        }
    }
    m.retain(|_, mods| !mods.is_empty());
    Ok(m)
}

/// Cohomology modules of a completely reducible bundle.
pub fn modules_of(x: &HomSpace, rep: &IrrDecomp) -> Result<ModuleTable> {
    let mut m = ModuleTable::new();
    for (lambda, c) in rep.iter() {
        if let Some((q, w)) = bott(x, lambda) {
            add_module(&mut m, q, w, c)?;
        }
    }
    Ok(m)
}

/// Cohomology modules of `rep ⊗ W` for a Levi character `W`, without
/// decomposing the product: each weight is moved to the Levi chamber by the
/// dot action (sign), then to the `G` chamber (degree).
pub fn product_modules(x: &HomSpace, rep: &IrrDecomp, w: &Character) -> Result<ModuleTable> {
    let d = x.group.data();
    let levi = x.levi().levi;
    let full = x.group.full_mask();
    let mut acc: HashMap<(usize, Coords), Mult> = HashMap::new();
    for (nu, c) in rep.iter() {
        for (mu, m) in w.iter() {
            let mut v: Coords = nu.0.iter().zip(mu.0.iter()).map(|(a, b)| a + b + 1).collect();
            let Some(lu) = d.climb_in_place(&mut v, levi) else { continue };
            let Some(q) = d.climb_in_place(&mut v, full) else { continue };
            for x in v.iter_mut() {
                *x -= 1;
            }
            let sign: Mult = if lu % 2 == 0 { 1 } else { -1 };
            let e = acc.entry((q as usize, v)).or_default();
            *e = checked_add(*e, checked_mul(sign, checked_mul(c, m)?)?)?;
        }
    }
    let mut m = ModuleTable::new();
    for ((q, v), c) in acc {
        if c != 0 {
            add_module(&mut m, q, Weight(v), c)?;
        }
    }
    clean(m)
}

pub fn bundle_cohomology(x: &HomSpace, rep: &IrrDecomp) -> Result<CohomologyTable> {
    for (w, _) in rep.iter() {
        x.require_p_dominant(w)?;
    }
    CohomologyTable::from_modules(x, x.dimension(), &modules_of(x, rep)?)
}

/// A bundle with a filtration whose gradeds are completely reducible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilteredBundle {
    /// Sub-to-quotient order.
    pub gradeds: Vec<IrrDecomp>,
    /// Filtration weight of each graded; larger is more sub. Used to filter
    /// tensor constructions.
    pub depths: Vec<usize>,
}

impl FilteredBundle {
    pub fn new(gradeds: Vec<IrrDecomp>) -> Self {
        let n = gradeds.len();
        FilteredBundle { gradeds, depths: (1..=n).rev().collect() }
    }

    pub fn completely_reducible(rep: IrrDecomp) -> Self {
        FilteredBundle::new(vec![rep])
    }

    pub fn twist(&self, k: usize, t: i32) -> Self {
        FilteredBundle { gradeds: self.gradeds.iter().map(|g| g.twist(k, t)).collect(), depths: self.depths.clone() }
    }

    /// Each graded tensored with a completely reducible `rep`.
    pub fn tensor(&self, x: &HomSpace, rep: &IrrDecomp) -> Result<Self> {
        let levi = x.levi();
        let gradeds = self
            .gradeds
            .iter()
            .map(|g| repcalc::tensor_decompose(&levi, g, rep))
            .collect::<Result<Vec<_>>>()?;
        Ok(FilteredBundle { gradeds, depths: self.depths.clone() })
    }

    /// `Λ²` with the induced filtration: gradeds `Λ²G_i` and `G_i ⊗ G_j` grouped by total depth.
    pub fn wedge2(&self, x: &HomSpace) -> Result<Self> {
        let levi = x.levi();
        let mut by_depth: BTreeMap<usize, IrrDecomp> = BTreeMap::new();
        for i in 0..self.gradeds.len() {
            let table = repcalc::exterior_table(&levi, &self.gradeds[i])?;
            if let Some(sq) = table.get(2) {
                by_depth.entry(2 * self.depths[i]).or_default().extend(sq);
            }
            for j in i + 1..self.gradeds.len() {
                let t = repcalc::tensor_decompose(&levi, &self.gradeds[i], &self.gradeds[j])?;
                by_depth.entry(self.depths[i] + self.depths[j]).or_default().extend(&t);
            }
        }
        let mut gradeds = Vec::new();
        let mut depths = Vec::new();
        for (dep, g) in by_depth.into_iter().rev() {
            if !g.is_empty() {
                gradeds.push(g);
                depths.push(dep);
            }
        }
        Ok(FilteredBundle { gradeds, depths })
    }

    pub fn rank(&self, x: &HomSpace) -> Result<BigInt> {
        let levi = x.levi();
        let mut r = BigInt::zero();
        for g in &self.gradeds {
            r += g.dim(&levi)?;
        }
        Ok(r)
    }

    pub fn check(&self, x: &HomSpace) -> Result<()> {
        if self.gradeds.is_empty() {
            return Err(Error::Internal("filtered bundle without gradeds".into()));
        }
        for g in &self.gradeds {
            for (w, _) in g.iter() {
                x.require_p_dominant(w)?;
            }
        }
        Ok(())
    }

    pub fn model(&self, x: &HomSpace) -> Result<SpectralModel> {
        self.check(x)?;
        let mut model = SpectralModel::default();
        for (level, g) in self.gradeds.iter().enumerate() {
            model.push_modules(x, level, 0, &modules_of(x, g)?)?;
        }
        Ok(model)
    }
}

pub fn reg_ind(x: &HomSpace, b: &FilteredBundle) -> BTreeSet<usize> {
    b.gradeds
        .iter()
        .flat_map(|g| g.iter().filter_map(|(w, _)| bott(x, w).map(|(q, _)| q)))
        .collect()
}

pub fn filtered_cohomology(x: &HomSpace, b: &FilteredBundle) -> Result<CohomologyTable> {
    let model = b.model(x)?;
    model.table(x, 0, x.dimension())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsEntry {
    /// Filtration level, 0 = innermost sub.
    pub level: usize,
    /// Koszul index `p` (term `Λ^p F*` sits in complex degree `-p`).
    pub koszul: usize,
    pub degree: usize,
    pub dim: BigInt,
    pub modules: BTreeMap<Weight, Mult>,
}

impl SsEntry {
    pub fn total(&self) -> i64 {
        self.degree as i64 - self.koszul as i64
    }
}

/// `E_1` page of a filtered complex of homogeneous bundles. Pieces are ordered
/// lexicographically by `(level, koszul)`; a differential runs from a piece to
/// a strictly smaller one and raises the total degree by one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralModel {
    pub entries: Vec<SsEntry>,
}

impl SpectralModel {
    pub fn push_modules(&mut self, x: &HomSpace, level: usize, koszul: usize, mods: &ModuleTable) -> Result<()> {
        let g = x.group_ctx();
        for (&q, m) in mods {
            let mut dim = BigInt::zero();
            for (w, &c) in m {
                dim += repcalc::weyl_dim(&g, w)? * BigInt::from(c);
            }
            if !dim.is_zero() {
                self.entries.push(SsEntry { level, koszul, degree: q, dim, modules: m.clone() });
            }
        }
        Ok(())
    }

    pub fn may_hit(a: &SsEntry, b: &SsEntry) -> bool {
        b.total() == a.total() + 1 && (b.level < a.level || (b.level == a.level && b.koszul < a.koszul))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.entries.iter().enumerate() {
            for (j, b) in self.entries.iter().enumerate() {
                if Self::may_hit(a, b) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// No differential can be nonzero.
    pub fn is_separated(&self) -> bool {
        self.edges().is_empty()
    }

    /// Adds the page to `ledger`; returns the abutment unknowns `h_n` for `n` in `lo..=hi`.
    /// Totals outside that range must cancel completely.
    pub fn install(&self, ledger: &mut Ledger, label: &str, lo: i64, hi: i64) -> Vec<VarId> {
        let edges = self.edges();
        let edge_vars: Vec<VarId> = edges.iter().map(|(i, j)| ledger.var(format!("{label}.d{i}>{j}"))).collect();
        let mut survivors: BTreeMap<i64, Vec<VarId>> = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            let c = ledger.var(format!("{label}.e{i}"));
            let mut eq = vec![(c, 1)];
            for (k, &(a, b)) in edges.iter().enumerate() {
                if a == i || b == i {
                    eq.push((edge_vars[k], 1));
                }
            }
            ledger.equation(eq, e.dim.clone());
            survivors.entry(e.total()).or_default().push(c);
        }
        let mut out = Vec::new();
        for n in lo..=hi {
            let h = ledger.var(format!("{label}.h{n}"));
            let mut eq = vec![(h, 1)];
            if let Some(cs) = survivors.get(&n) {
                eq.extend(cs.iter().map(|&c| (c, -1)));
            }
            ledger.equation(eq, 0);
            out.push(h);
        }
        for (n, cs) in &survivors {
            if *n < lo || *n > hi {
                ledger.equation(cs.iter().map(|&c| (c, 1)).collect(), 0);
            }
        }
        out
    }

    /// Abutment in degrees `lo..=hi` from this page alone.
    pub fn solve(&self, lo: i64, hi: i64) -> Result<Vec<DimValue>> {
        let mut ledger = Ledger::new();
        let h = self.install(&mut ledger, "ss", lo, hi);
        let sol = ledger.solve()?;
        Ok(h.iter().map(|&v| sol.value(v)).collect())
    }

    /// As a cohomology table over degrees `0..=top`. Module labels are kept
    /// when no differential is possible.
    pub fn table(&self, x: &HomSpace, lo: i64, top: usize) -> Result<CohomologyTable> {
        if self.is_separated() && self.entries.iter().all(|e| e.total() >= lo && e.total() <= top as i64) {
            let mut m = ModuleTable::new();
            for e in &self.entries {
                for (w, &c) in &e.modules {
                    add_module(&mut m, (e.total() - lo) as usize, w.clone(), c)?;
                }
            }
            return CohomologyTable::from_modules(x, top, &m);
        }
        Ok(CohomologyTable::from_dims(top, self.solve(lo, lo + top as i64)?))
    }
}
