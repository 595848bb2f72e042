//! Classification of Calabi-Yau zero loci.
//!
//! A candidate is a multiset of irreducible, globally generated, nontrivial
//! bundles `E_λ` on `G/P_k` with `Σ rank = dim − d` and `Σ dex = ι`, so that a
//! general section cuts out a `d`-fold with trivial canonical bundle.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodge::{self, HodgeDiamond, HodgeSummary};
use crate::homspace::HomSpace;
use crate::koszul::{BundleSum, ZeroLocus};
use crate::repcalc;
use crate::rootdata::{Family, Weight};

/// One admissible irreducible summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Admissible {
    pub weight: Weight,
    pub rank: usize,
    pub dex: i64,
}

impl Admissible {
    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.dex, self.rank as i64)
    }
}

/// All `G`-dominant nonzero `λ` with `rank E_λ ≤ rank_cap` and `dex E_λ ≤ dex_cap`.
///
/// Rank never decreases and dex strictly increases in every coordinate, so the
/// recursion stops a coordinate as soon as either cap is exceeded.
pub fn admissible_summands(x: &HomSpace, rank_cap: usize, dex_cap: i64) -> Result<Vec<Admissible>> {
    let levi = x.levi();
    let r = x.rank();
    let fits = |w: &Weight| -> Result<Option<(usize, Ratio<i64>)>> {
        let rank = repcalc::weyl_dim(&levi, w)?;
        let rank = match usize::try_from(rank) {
            Ok(n) if n <= rank_cap => n,
            _ => return Ok(None),
        };
        let dex = x.dex_by_projection(w)?;
        Ok((dex <= Ratio::from_integer(dex_cap)).then_some((rank, dex)))
    };
    let mut out = Vec::new();
    let mut w = Weight::zero(r);
    fn rec(
        i: usize,
        w: &mut Weight,
        fits: &dyn Fn(&Weight) -> Result<Option<(usize, Ratio<i64>)>>,
        out: &mut Vec<Weight>,
    ) -> Result<()> {
        if i == w.0.len() {
            if !w.is_zero() {
                out.push(w.clone());
            }
            return Ok(());
        }
        loop {
            if fits(w)?.is_none() {
                break;
            }
            rec(i + 1, w, fits, out)?;
            w.0[i] += 1;
        }
        w.0[i] = 0;
        Ok(())
    }
    if rank_cap == 0 {
        return Ok(out);
    }
    let mut weights = Vec::new();
    rec(0, &mut w, &fits, &mut weights)?;
    for w in weights {
        let rank = usize::try_from(repcalc::weyl_dim(&levi, &w)?).map_err(|_| Error::Overflow)?;
        let dex = x.dex(&w)?;
        out.push(Admissible { weight: w, rank, dex });
    }
    out.sort();
    Ok(out)
}

/// A summand known to give a section that vanishes nowhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionEntry {
    pub space: HomSpace,
    pub weight: Weight,
    pub reason: String,
    pub citation: String,
}

/// Curated data; extend here, not in the search.
const EXCEPTIONS: &[(&str, &[i32], &str, &str)] = &[(
    "E6/P1",
    &[0, 0, 0, 0, 0, 1],
    "a general section of the rank 10 bundle E_w6 on the Cayley plane vanishes nowhere",
    "Faenzi-Manivel",
)];

/// The curated exceptions, closed under the diagram automorphism of `E6`.
pub fn exception_list() -> Vec<ExceptionEntry> {
    let mut out = Vec::new();
    for &(space, w, reason, cite) in EXCEPTIONS {
        let space: HomSpace = space.parse().expect("curated space");
        let weight = Weight::new(w.iter().copied());
        let entry = ExceptionEntry { space, weight, reason: reason.into(), citation: cite.into() };
        if let Some((s2, w2)) = sigma(&entry.space, &entry.weight) {
            if (s2, &w2) != (entry.space, &entry.weight) {
                out.push(ExceptionEntry { space: s2, weight: w2, ..entry.clone() });
            }
        }
        out.push(entry);
    }
    out.sort_by(|a, b| (a.space, &a.weight).cmp(&(b.space, &b.weight)));
    out
}

/// The `E6` diagram automorphism `1↔6, 3↔5` on a space and a weight.
pub fn sigma(x: &HomSpace, w: &Weight) -> Option<(HomSpace, Weight)> {
    if x.group.family() != Family::E || x.rank() != 6 {
        return None;
    }
    const P: [usize; 6] = [5, 1, 4, 3, 2, 0];
    let mut c = Weight::zero(6);
    for i in 0..6 {
        c.0[P[i]] = w.0[i];
    }
    Some((HomSpace { group: x.group, k: P[x.k - 1] + 1 }, c))
}

fn sigma_bundle(x: &HomSpace, b: &BundleSum) -> Option<(HomSpace, BundleSum)> {
    let mut space = *x;
    let mut terms = Vec::new();
    for (w, c) in b.summands() {
        let (s, w2) = sigma(x, w)?;
        space = s;
        terms.push((w2, *c));
    }
    Some((space, BundleSum::new(terms)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub space: HomSpace,
    pub bundle: BundleSum,
    pub d: usize,
    /// Equal tags mean isomorphic zero loci under the identifications in [`tag_of`].
    pub tag: String,
    pub notes: Vec<String>,
}

impl fmt::Display for CandidatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} (d={})", self.space, self.bundle, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumOptions {
    /// Reject by the dex/rank ratio bound.
    pub ratio_fast_path: bool,
    /// Honour the curated exception list.
    pub exceptions: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { ratio_fast_path: true, exceptions: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub space: HomSpace,
    pub d: usize,
    pub summands: Vec<Admissible>,
    /// Set when the whole space fails the ratio bound.
    pub ratio_rejected: Option<String>,
    pub candidates: Vec<CandidatePair>,
    pub excluded: Vec<(CandidatePair, String)>,
}

/// Every multiset of admissible summands meeting both equalities.
pub fn enumerate_candidates(x: &HomSpace, d: usize, opts: EnumOptions) -> Result<Enumeration> {
    let dim = x.dimension();
    let iota = x.fano_index();
    let mut out = Enumeration {
        space: *x,
        d,
        summands: Vec::new(),
        ratio_rejected: None,
        candidates: Vec::new(),
        excluded: Vec::new(),
    };
    if d >= dim {
        return Ok(out);
    }
    let target_rank = dim - d;
    let summands = admissible_summands(x, target_rank, iota)?;
    out.summands = summands.clone();
    if summands.is_empty() {
        return Ok(out);
    }
    let bound = Ratio::new(iota, target_rank as i64);
    if opts.ratio_fast_path {
        let min = summands.iter().map(Admissible::ratio).min().expect("nonempty");
        if min > bound {
            out.ratio_rejected = Some(format!("every summand has dex/rank >= {min} > {bound} = index/(dim-d)"));
            return Ok(out);
        }
    }
    // Suffix ratio ranges for pruning.
    let n = summands.len();
    let mut lo = vec![Ratio::from_integer(i64::MAX); n + 1];
    let mut hi = vec![Ratio::from_integer(0); n + 1];
    for i in (0..n).rev() {
        lo[i] = lo[i + 1].min(summands[i].ratio());
        hi[i] = hi[i + 1].max(summands[i].ratio());
    }
    struct Search<'a> {
        s: &'a [Admissible],
        lo: &'a [Ratio<i64>],
        hi: &'a [Ratio<i64>],
        fast: bool,
        found: Vec<Vec<(usize, usize)>>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, r: usize, dx: i64, chosen: &mut Vec<(usize, usize)>) {
            if r == 0 && dx == 0 {
                self.found.push(chosen.clone());
                return;
            }
            if i == self.s.len() || r == 0 || dx <= 0 {
                return;
            }
            if self.fast {
                let rr = Ratio::from_integer(r as i64);
                let dd = Ratio::from_integer(dx);
                if dd < self.lo[i] * rr || dd > self.hi[i] * rr {
                    return;
                }
            }
            let a = &self.s[i];
            let max = (r / a.rank).min((dx / a.dex) as usize);
            for c in (0..=max).rev() {
                if c > 0 {
                    chosen.push((i, c));
                }
                self.go(i + 1, r - c * a.rank, dx - c as i64 * a.dex, chosen);
                if c > 0 {
                    chosen.pop();
                }
            }
        }
    }
    let mut search = Search { s: &summands, lo: &lo, hi: &hi, fast: opts.ratio_fast_path, found: Vec::new() };
    search.go(0, target_rank, iota, &mut Vec::new());

    let exceptions = exception_list();
    for choice in search.found {
        let bundle = BundleSum::new(choice.iter().map(|&(i, c)| (summands[i].weight.clone(), c)));
        let mut pair = CandidatePair { space: *x, bundle, d, tag: String::new(), notes: Vec::new() };
        pair.tag = tag_of(&pair.space, &pair.bundle);
        let hit = exceptions
            .iter()
            .find(|e| e.space == *x && pair.bundle.summands().iter().any(|(w, _)| *w == e.weight));
        match hit {
            Some(e) if opts.exceptions => {
                let why = format!("{} [{}]", e.reason, e.citation);
                out.excluded.push((pair, why));
            }
            Some(e) => {
                pair.notes.push(format!("exception list disabled: {} [{}]", e.reason, e.citation));
                out.candidates.push(pair);
            }
            None => out.candidates.push(pair),
        }
    }
    // Largest summands first, as in hand-written tables.
    let key = |b: &BundleSum| {
        let mut v = b.summands().to_vec();
        v.reverse();
        v
    };
    out.candidates.sort_by_key(|c| std::cmp::Reverse(key(&c.bundle)));
    Ok(out)
}

/// Curated identification: a hyperplane section of the Cayley plane is `F4/P4`,
/// so `F4/P4` with `O(1)^n` is `E6/P1` with `O(1)^{n+1}`.
fn curated_alias(x: &HomSpace, b: &BundleSum) -> Option<(HomSpace, BundleSum)> {
    if x.group.family() != Family::F || x.k != 4 {
        return None;
    }
    let [(w, n)] = b.summands() else { return None };
    if *w != x.line(1) {
        return None;
    }
    let e6p1: HomSpace = "E6/P1".parse().expect("valid");
    Some((e6p1, BundleSum::new([(e6p1.line(1), n + 1)])))
}

/// Canonical label of a pair up to the natural identifications: the `E6`
/// automorphism on spaces it moves, the summand-wise swap `E_λ ↔ E_{σλ}` on the
/// spaces it fixes, and the Cayley-plane hyperplane section.
pub fn tag_of(x: &HomSpace, b: &BundleSum) -> String {
    let (x, b) = curated_alias(x, b).unwrap_or((*x, b.clone()));
    let (x, b) = match sigma_bundle(&x, &b) {
        Some((sx, sb)) if sx != x => {
            if (sx.k, &sb) < (x.k, &b) {
                (sx, sb)
            } else {
                (x, b)
            }
        }
        Some(_) => {
            let terms = b.summands().iter().map(|(w, c)| {
                let s = sigma(&x, w).expect("E6").1;
                (if s < *w { s } else { w.clone() }, *c)
            });
            (x, BundleSum::new(terms))
        }
        None => (x, b),
    };
    format!("{x}:{b}")
}

/// Spaces whose candidates are reported through their automorphic image.
fn is_mirror_space(x: &HomSpace) -> bool {
    x.group.family() == Family::E && x.rank() == 6 && (x.k == 5 || x.k == 6)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HodgeLevel {
    None,
    /// Rows `p ≤ 1`; enough for every table column except `h^{2,2}` of fourfolds.
    Rows,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    Exceptional,
    /// Also classical types up to rank 6; not checked against an independent list.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub enumeration: EnumOptions,
    pub hodge: HodgeLevel,
    pub scope: Scope,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { enumeration: EnumOptions::default(), hodge: HodgeLevel::Rows, scope: Scope::Exceptional }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedRow {
    pub pair: CandidatePair,
    pub dim: usize,
    pub index: i64,
    pub hodge: Option<HodgeSummary>,
    pub diamond: Option<HodgeDiamond>,
    /// False for classical ambients.
    pub verified_scope: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub d: usize,
    pub options: ClassifyOptions,
    /// Every pair on every space searched, in `(G, k)` order.
    pub raw: Vec<CandidatePair>,
    /// `raw` minus the automorphic images on `E6/P5` and `E6/P6`.
    pub rows: Vec<ClassifiedRow>,
    /// First row of each tag.
    pub distinct: Vec<ClassifiedRow>,
    pub excluded: Vec<(CandidatePair, String)>,
    pub ratio_rejected: Vec<(HomSpace, String)>,
}

fn spaces(scope: Scope) -> Vec<HomSpace> {
    let mut out = HomSpace::exceptional();
    if scope == Scope::All {
        for fam in [Family::A, Family::B, Family::C, Family::D] {
            let min = match fam {
                Family::A => 1,
                Family::B | Family::C => 2,
                _ => 4,
            };
            for r in min..=6 {
                let g = crate::rootdata::RootSystemSpec::new(fam, r).expect("valid classical type");
                out.extend((1..=r).map(|k| HomSpace { group: g, k }));
            }
        }
    }
    out
}

pub fn classify(d: usize, opts: ClassifyOptions) -> Result<ClassificationReport> {
    let list = spaces(opts.scope);
    let enums = list
        .par_iter()
        .map(|x| enumerate_candidates(x, d, opts.enumeration))
        .collect::<Result<Vec<_>>>()?;
    let mut raw = Vec::new();
    let mut excluded = Vec::new();
    let mut ratio_rejected = Vec::new();
    let mut kept = Vec::new();
    for e in enums {
        if let Some(why) = e.ratio_rejected {
            ratio_rejected.push((e.space, why));
        }
        excluded.extend(e.excluded);
        for c in e.candidates {
            if !is_mirror_space(&c.space) {
                kept.push(c.clone());
            }
            raw.push(c);
        }
    }
    let rows = kept
        .into_par_iter()
        .map(|pair| {
            let z = ZeroLocus::new(pair.space, pair.bundle.clone())?;
            let diamond = match opts.hodge {
                HodgeLevel::None => None,
                HodgeLevel::Rows => Some(hodge::assemble_rows(&z)?.0),
                HodgeLevel::Full => Some(hodge::assemble(&z)?.0),
            };
            Ok(ClassifiedRow {
                dim: pair.space.dimension(),
                index: pair.space.fano_index(),
                hodge: diamond.as_ref().map(hodge::summary),
                diamond,
                verified_scope: pair.space.group.family().is_exceptional(),
                pair,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = BTreeMap::new();
    let mut distinct = Vec::new();
    for r in &rows {
        if seen.insert(r.pair.tag.clone(), ()).is_none() {
            distinct.push(r.clone());
        }
    }
    Ok(ClassificationReport { d, options: opts, raw, rows, distinct, excluded, ratio_rejected })
}

/// [`classify`] over the 25 exceptional spaces.
pub fn classify_exceptional(d: usize, hodge: HodgeLevel, enumeration: EnumOptions) -> Result<ClassificationReport> {
    classify(d, ClassifyOptions { enumeration, hodge, scope: Scope::Exceptional })
}
