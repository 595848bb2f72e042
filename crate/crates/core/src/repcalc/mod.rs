//! Characters of irreducible modules for a group or one of its Levi subgroups.
//!
//! All weights are written in the ambient fundamental-weight basis. Multiplicities
//! are `i128` with checked arithmetic; dimensions are big integers.

mod freudenthal;
mod plethysm;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::rootdata::{Mask, RootData, RootSystemSpec, Weight};

pub use freudenthal::{dominant_multiplicities, weight_multiplicities};
pub use plethysm::{
    decompose, decompose_by_peeling, exterior_power, exterior_table, symmetric_power,
    tensor_decompose,
};

pub type Mult = i128;

pub(crate) fn checked_mul(a: Mult, b: Mult) -> Result<Mult> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_add(a: Mult, b: Mult) -> Result<Mult> {
    a.checked_add(b).ok_or(Error::Overflow)
}

/// A group `G` (all simple roots) or a Levi subgroup given by a subset of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReductiveContext {
    pub ambient: RootSystemSpec,
    pub levi: Mask,
}

impl ReductiveContext {
    pub fn group(ambient: RootSystemSpec) -> Self {
        ReductiveContext { ambient, levi: ambient.full_mask() }
    }

    /// Levi factor of the maximal parabolic `P_k` (1-based `k`).
    pub fn levi_of(ambient: RootSystemSpec, k: usize) -> Result<Self> {
        if k == 0 || k > ambient.rank() {
            return Err(Error::BadParabolic { k, rank: ambient.rank() });
        }
        Ok(ReductiveContext { ambient, levi: ambient.full_mask() & !(1 << (k - 1)) })
    }

    /// Context on an explicit set of 1-based simple indices.
    pub fn with_simples(ambient: RootSystemSpec, simples: &[usize]) -> Result<Self> {
        let mut levi = 0;
        for &i in simples {
            if i == 0 || i > ambient.rank() {
                return Err(Error::BadParabolic { k: i, rank: ambient.rank() });
            }
            levi |= 1 << (i - 1);
        }
        Ok(ReductiveContext { ambient, levi })
    }

    pub fn rank(&self) -> usize {
        self.ambient.rank()
    }

    pub fn root_data(&self) -> &'static RootData {
        self.ambient.data()
    }

    /// 1-based indices not in the Levi.
    pub fn omitted(&self) -> Vec<usize> {
        (0..self.rank()).filter(|i| self.levi & (1 << i) == 0).map(|i| i + 1).collect()
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        w.is_dominant_in(self.levi)
    }

    pub(crate) fn require_dominant(&self, w: &Weight) -> Result<()> {
        w.check_rank(self.rank())?;
        if !self.is_dominant(w) {
            return Err(Error::NotDominant(w.to_string()));
        }
        Ok(())
    }

    /// Indices into the ambient positive roots of the roots of this context.
    pub fn root_indices(&self) -> Arc<Vec<usize>> {
        static MEMO: OnceLock<Memo<ReductiveContext, Vec<usize>>> = OnceLock::new();
        let d = self.root_data();
        MEMO.get_or_init(Memo::new)
            .get_or_try(self, || {
                Ok(d.positive_roots()
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.within(self.levi))
                    .map(|(i, _)| i)
                    .collect())
            })
            .expect("infallible")
    }

    /// Climb `w + ρ` by the context's Weyl group. Returns the sign and the
    /// dominant `w' = u(w + ρ) - ρ`, or `None` on a wall.
    pub(crate) fn dot_dominant(&self, w: &mut [i32]) -> Option<Mult> {
        for x in w.iter_mut() {
            *x += 1;
        }
        let len = self.root_data().climb_in_place(w, self.levi)?;
        for x in w.iter_mut() {
            *x -= 1;
        }
        Some(if len % 2 == 0 { 1 } else { -1 })
    }
}

impl fmt::Display for ReductiveContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levi == self.ambient.full_mask() {
            write!(f, "{}", self.ambient)
        } else {
            let omitted: Vec<String> = self.omitted().iter().map(|i| i.to_string()).collect();
            write!(f, "{} Levi without {}", self.ambient, omitted.join(","))
        }
    }
}

/// Formal character, sorted by weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    terms: Vec<(Weight, Mult)>,
}

impl Character {
    pub(crate) fn from_sorted(terms: Vec<(Weight, Mult)>) -> Self {
        Character { terms }
    }

    pub fn from_map(map: impl IntoIterator<Item = (Weight, Mult)>) -> Self {
        let mut m: BTreeMap<Weight, Mult> = BTreeMap::new();
        for (w, c) in map {
            *m.entry(w).or_default() += c;
        }
        Character { terms: m.into_iter().filter(|(_, c)| *c != 0).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, Mult)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, w: &Weight) -> Mult {
        self.terms.binary_search_by(|(x, _)| x.cmp(w)).map(|i| self.terms[i].1).unwrap_or(0)
    }

    pub fn total(&self) -> Mult {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Invariance under every reflection of the context.
    pub fn is_invariant(&self, ctx: &ReductiveContext) -> bool {
        let d = ctx.root_data();
        (0..ctx.rank()).filter(|i| ctx.levi & (1 << i) != 0).all(|i| {
            self.terms.iter().all(|(w, c)| {
                let mut v = w.0.clone();
                d.reflect(&mut v, i);
                self.get(&Weight(v)) == *c
            })
        })
    }

    /// Pointwise product (convolution of weight multisets).
    pub fn convolve(&self, other: &Character) -> Result<Character> {
        let mut m: std::collections::HashMap<Weight, Mult> = std::collections::HashMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = m.entry(a.add(b)).or_default();
                *e = checked_add(*e, checked_mul(*x, *y)?)?;
            }
        }
        Ok(Character::from_map(m))
    }
}

/// Formal sum of irreducibles, keyed by context-dominant highest weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrDecomp {
    terms: BTreeMap<Weight, Mult>,
}

impl IrrDecomp {
    pub fn new() -> Self {
        IrrDecomp::default()
    }

    pub fn irreducible(w: Weight) -> Self {
        let mut d = IrrDecomp::new();
        d.add(w, 1);
        d
    }

    pub fn trivial(rank: usize) -> Self {
        IrrDecomp::irreducible(Weight::zero(rank))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Weight, Mult)>) -> Self {
        let mut d = IrrDecomp::new();
        for (w, c) in terms {
            d.add(w, c);
        }
        d
    }

    pub fn add(&mut self, w: Weight, c: Mult) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn extend(&mut self, other: &IrrDecomp) {
        for (w, c) in other.iter() {
            self.add(w.clone(), c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, Mult)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn get(&self, w: &Weight) -> Mult {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every term is context-dominant with positive multiplicity.
    pub fn is_valid(&self, ctx: &ReductiveContext) -> bool {
        self.terms.iter().all(|(w, c)| *c > 0 && ctx.is_dominant(w))
    }

    /// Shift every highest weight by `t·ϖ_k`.
    pub fn twist(&self, k: usize, t: i32) -> IrrDecomp {
        IrrDecomp {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let mut v = w.clone();
                    v.0[k - 1] += t;
                    (v, *c)
                })
                .collect(),
        }
    }

    pub fn dim(&self, ctx: &ReductiveContext) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (w, c) in self.iter() {
            total += weyl_dim(ctx, w)? * BigInt::from(c);
        }
        Ok(total)
    }

    /// Full character (sum of the irreducible characters).
    pub fn character(&self, ctx: &ReductiveContext) -> Result<Character> {
        let mut m: std::collections::HashMap<Weight, Mult> = std::collections::HashMap::new();
        for (w, c) in self.iter() {
            let ch = weight_multiplicities(ctx, w)?;
            for (mu, x) in ch.iter() {
                let e = m.entry(mu.clone()).or_default();
                *e = checked_add(*e, checked_mul(x, c)?)?;
            }
        }
        Ok(Character::from_map(m))
    }

    /// The dual module.
    pub fn dual(&self, ctx: &ReductiveContext) -> Result<IrrDecomp> {
        let mut d = IrrDecomp::new();
        for (w, c) in self.iter() {
            d.add(dual_highest_weight(ctx, w)?, c);
        }
        Ok(d)
    }
}

/// Weyl dimension formula.
pub fn weyl_dim(ctx: &ReductiveContext, lambda: &Weight) -> Result<BigInt> {
    ctx.require_dominant(lambda)?;
    Ok(signed_weyl_dim(ctx, lambda))
}

/// The Weyl product evaluated at an arbitrary weight. It is zero on walls and
/// `(-1)^ℓ(w)·dim` off them, where `w` is the climbing element of `λ + ρ`.
pub fn signed_weyl_dim(ctx: &ReductiveContext, lambda: &Weight) -> BigInt {
    let d = ctx.root_data();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let shifted: Vec<i32> = lambda.0.iter().map(|x| x + 1).collect();
    let ones = vec![1; ctx.rank()];
    for &idx in ctx.root_indices().iter() {
        let root = &d.positive_roots()[idx].0;
        num *= d.pair_root(&shifted, root);
        den *= d.pair_root(&ones, root);
    }
    num / den
}

/// Highest weight of the dual module: the dominant conjugate of `-λ`.
pub fn dual_highest_weight(ctx: &ReductiveContext, lambda: &Weight) -> Result<Weight> {
    ctx.require_dominant(lambda)?;
    let mut v = lambda.neg().0;
    ctx.root_data().dominant_conjugate_in_place(&mut v, ctx.levi);
    Ok(Weight(v))
}

/// `Σ mult(μ)·μ` over the weights of `V(λ)`; requires a maximal-parabolic Levi.
pub fn sum_of_weights(ctx: &ReductiveContext, lambda: &Weight) -> Result<Weight> {
    let omitted = ctx.omitted();
    if omitted.len() != 1 {
        return Err(Error::NotMaximalLevi(omitted.len()));
    }
    let ch = weight_multiplicities(ctx, lambda)?;
    let mut acc = vec![0i128; ctx.rank()];
    for (mu, c) in ch.iter() {
        for (a, &x) in acc.iter_mut().zip(mu.0.iter()) {
            *a = checked_add(*a, checked_mul(c, x as Mult)?)?;
        }
    }
    let coords: Result<Vec<i32>> =
        acc.into_iter().map(|a| i32::try_from(a).map_err(|_| Error::Overflow)).collect();
    Ok(Weight::new(coords?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> ReductiveContext {
        ReductiveContext::group(s.parse().unwrap())
    }

    fn levi(s: &str, k: usize) -> ReductiveContext {
        ReductiveContext::levi_of(s.parse().unwrap(), k).unwrap()
    }

    #[test]
    fn weyl_dims() {
        assert_eq!(weyl_dim(&g("G2"), &Weight::new([0, 3])).unwrap(), BigInt::from(273));
        assert_eq!(weyl_dim(&g("E6"), &Weight::fundamental(6, 1)).unwrap(), BigInt::from(27));
        assert_eq!(weyl_dim(&g("E8"), &Weight::fundamental(8, 8)).unwrap(), BigInt::from(248));
        assert_eq!(weyl_dim(&g("E7"), &Weight::zero(7)).unwrap(), BigInt::from(1));
        assert!(weyl_dim(&g("G2"), &Weight::new([-1, 0])).is_err());
    }

    #[test]
    fn duals() {
        assert_eq!(dual_highest_weight(&g("E6"), &Weight::fundamental(6, 1)).unwrap(), Weight::fundamental(6, 6));
        assert_eq!(
            dual_highest_weight(&levi("F4", 4), &Weight::new([1, 0, 0, 0])).unwrap(),
            Weight::new([1, 0, 0, -2])
        );
        assert_eq!(dual_highest_weight(&levi("F4", 4), &Weight::zero(4)).unwrap(), Weight::zero(4));
    }

    #[test]
    fn sums_of_weights() {
        assert_eq!(sum_of_weights(&levi("F4", 1), &Weight::fundamental(4, 4)).unwrap(), Weight::new([3, 0, 0, 0]));
        assert_eq!(sum_of_weights(&levi("E7", 1), &Weight::fundamental(7, 7)).unwrap(), Weight::new([6, 0, 0, 0, 0, 0, 0]));
        assert_eq!(sum_of_weights(&levi("E7", 1), &Weight::zero(7)).unwrap(), Weight::zero(7));
        assert!(sum_of_weights(&g("E7"), &Weight::zero(7)).is_err());
    }

    #[test]
    fn twist_moves_only_k() {
        let d = IrrDecomp::irreducible(Weight::new([1, 0, 0, 0]));
        assert_eq!(d.twist(4, -2).get(&Weight::new([1, 0, 0, -2])), 1);
    }
}
