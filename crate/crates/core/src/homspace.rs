//! Rational homogeneous spaces `G/P_k` of Picard number one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bwbcohom::FilteredBundle;
use crate::error::{Error, Result};
use crate::repcalc::{self, IrrDecomp, ReductiveContext};
use crate::rootdata::{Family, RootSystemSpec, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomSpace {
    pub group: RootSystemSpec,
    pub k: usize,
}

/// Graded pieces of `Ω_{G/P}`, deepest (most sub) first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedCotangent {
    pub depth: usize,
    /// `(ℓ, piece)` with `ℓ` running from `depth` down to 1.
    pub pieces: Vec<(usize, IrrDecomp)>,
}

impl GradedCotangent {
    pub fn filtered(&self) -> FilteredBundle {
        FilteredBundle {
            gradeds: self.pieces.iter().map(|(_, p)| p.clone()).collect(),
            depths: self.pieces.iter().map(|(l, _)| *l).collect(),
        }
    }
}

impl HomSpace {
    pub fn new(group: RootSystemSpec, k: usize) -> Result<Self> {
        if k == 0 || k > group.rank() {
            return Err(Error::BadParabolic { k, rank: group.rank() });
        }
        Ok(HomSpace { group, k })
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    /// The 25 exceptional spaces in reporting order.
    pub fn exceptional() -> Vec<HomSpace> {
        RootSystemSpec::exceptional()
            .into_iter()
            .flat_map(|g| (1..=g.rank()).map(move |k| HomSpace { group: g, k }))
            .collect()
    }

    pub fn levi(&self) -> ReductiveContext {
        ReductiveContext::levi_of(self.group, self.k).expect("k validated")
    }

    pub fn group_ctx(&self) -> ReductiveContext {
        ReductiveContext::group(self.group)
    }

    /// `c_k` of every positive root.
    fn ck(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.group.data().positive_roots().iter().enumerate().map(|(i, r)| (i, r.coords()[self.k - 1]))
    }

    /// `t·ϖ_k`, i.e. the line bundle `O(t)`.
    pub fn line(&self, t: i32) -> Weight {
        let mut w = Weight::zero(self.rank());
        w.0[self.k - 1] = t;
        w
    }

    pub fn dimension(&self) -> usize {
        self.ck().filter(|&(_, c)| c > 0).count()
    }

    pub fn fano_index(&self) -> i64 {
        let d = self.group.data();
        self.ck().filter(|&(_, c)| c > 0).map(|(i, _)| d.root_weights()[i][self.k - 1] as i64).sum()
    }

    pub fn minimal_embedding_dim(&self) -> BigInt {
        repcalc::weyl_dim(&self.group_ctx(), &self.line(1)).expect("ϖ_k is dominant") - BigInt::one()
    }

    /// Gradation of `g` by `c_k`; the piece at depth `ℓ` has highest weights `-α`
    /// for the roots `α` with `c_k(α) = ℓ` such that no `α - α_i` (Levi `i`) is a root.
    pub fn gradation(&self) -> GradedCotangent {
        let d = self.group.data();
        let roots = d.positive_roots();
        let set: std::collections::HashSet<&[i32]> = roots.iter().map(|r| r.coords()).collect();
        let depth = self.ck().map(|(_, c)| c).max().unwrap_or(0) as usize;
        let mut pieces = Vec::new();
        for l in (1..=depth).rev() {
            let mut piece = IrrDecomp::new();
            for (i, c) in self.ck() {
                if c as usize != l {
                    continue;
                }
                let alpha = roots[i].coords();
                let lowest = (0..self.rank()).filter(|&j| j != self.k - 1).all(|j| {
                    let mut beta = alpha.to_vec();
                    beta[j] -= 1;
                    !set.contains(beta.as_slice())
                });
                if lowest {
                    piece.add(d.root_weights()[i].neg(), 1);
                }
            }
            pieces.push((l, piece));
        }
        GradedCotangent { depth, pieces }
    }

    pub fn cotangent(&self) -> FilteredBundle {
        self.gradation().filtered()
    }

    pub fn require_p_dominant(&self, w: &Weight) -> Result<()> {
        self.levi().require_dominant(w)
    }

    /// `det E_λ = O(dex)`.
    pub fn dex(&self, lambda: &Weight) -> Result<i64> {
        self.require_p_dominant(lambda)?;
        Ok(repcalc::sum_of_weights(&self.levi(), lambda)?[self.k - 1] as i64)
    }

    /// `dim_L V(λ) · (λ, ϖ_k)/(ϖ_k, ϖ_k)`; an independent route to [`HomSpace::dex`].
    pub fn dex_by_projection(&self, lambda: &Weight) -> Result<Ratio<i64>> {
        self.require_p_dominant(lambda)?;
        let d = self.group.data();
        let wk = self.line(1);
        let rank: i64 = repcalc::weyl_dim(&self.levi(), lambda)?.try_into().map_err(|_| Error::Overflow)?;
        Ok(d.inner_product(lambda, &wk) / d.inner_product(&wk, &wk) * Ratio::from_integer(rank))
    }

    /// Closed forms for Grassmannians, symplectic Grassmannians and spinor varieties.
    /// `None` when no closed form applies.
    pub fn dex_closed_form(&self, lambda: &Weight) -> Result<Option<Ratio<i64>>> {
        self.require_p_dominant(lambda)?;
        let r = self.rank();
        let k = self.k;
        let l = |i: usize| lambda[i - 1] as i64;
        let tail = |j: usize| -> i64 { (j..=r).map(l).sum() };
        let rank: i64 = repcalc::weyl_dim(&self.levi(), lambda)?.try_into().map_err(|_| Error::Overflow)?;
        let rank = Ratio::from_integer(rank);
        let v = match self.group.family() {
            Family::A => {
                let a: i64 = (1..=k).map(tail).sum();
                let b: i64 = (k + 1..=r).map(tail).sum();
                (Ratio::new(a, k as i64) - Ratio::new(b, (r + 1 - k) as i64)) * rank
            }
            Family::C => Ratio::new((1..=k).map(tail).sum(), k as i64) * rank,
            Family::D if k == r => {
                // Sum of the ε-coordinates of λ.
                let mut s = Ratio::from_integer(0);
                for j in 1..=r {
                    let inner: i64 = (j..=r.saturating_sub(2)).map(l).sum();
                    let last = if j < r { l(r - 1) + l(r) } else { l(r) - l(r - 1) };
                    s += Ratio::from_integer(inner) + Ratio::new(last, 2);
                }
                s * Ratio::from_integer(2) / Ratio::from_integer(r as i64) * rank
            }
            _ => return Ok(None),
        };
        Ok(Some(v))
    }
}

impl fmt::Display for HomSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/P{}", self.group, self.k)
    }
}

impl FromStr for HomSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRootSystemName(s.to_string());
        let (g, p) = s.trim().split_once('/').ok_or_else(bad)?;
        let p = p.trim();
        let k: usize = p.strip_prefix(['P', 'p']).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        HomSpace::new(g.parse()?, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> HomSpace {
        s.parse().unwrap()
    }

    fn w(c: &[i32]) -> Weight {
        Weight::new(c.iter().copied())
    }

    #[test]
    fn basic_invariants() {
        assert_eq!(x("E6/P2").dimension(), 21);
        assert_eq!(x("A1/P1").dimension(), 1);
        assert_eq!(x("A1/P1").fano_index(), 2);
        assert_eq!(x("E8/P4").dimension(), 106);
        assert_eq!(x("E8/P4").fano_index(), 9);
        assert_eq!(x("E7/P1").fano_index(), 17);
        assert_eq!(x("G2/P2").fano_index(), 3);
        assert_eq!(x("E8/P4").minimal_embedding_dim(), BigInt::from(6899079263u64));
        assert_eq!(x("E7/P7").minimal_embedding_dim(), BigInt::from(55));
        assert_eq!(x("A1/P1").minimal_embedding_dim(), BigInt::from(1));
    }

    #[test]
    fn g2_gradations() {
        let g = x("G2/P2").gradation();
        assert_eq!(g.depth, 2);
        assert_eq!(g.pieces[0].1, IrrDecomp::irreducible(w(&[0, -1])));
        assert_eq!(g.pieces[1].1, IrrDecomp::irreducible(w(&[3, -2])));
        let g = x("G2/P1").gradation();
        assert_eq!(g.depth, 3);
        let tops: Vec<_> = g.pieces.iter().map(|(_, p)| p.iter().next().unwrap().0.clone()).collect();
        assert_eq!(tops, vec![w(&[-3, 1]), w(&[-1, 0]), w(&[-2, 1])]);
        let g = x("A2/P1").gradation();
        assert_eq!(g.depth, 1);
        assert_eq!(g.pieces[0].1.dim(&x("A2/P1").levi()).unwrap(), BigInt::from(2));
    }

    #[test]
    fn dex_examples() {
        let e6p4 = x("E6/P4");
        assert_eq!(e6p4.dex(&w(&[0, 0, 1, 0, 0, 0])).unwrap(), 2);
        assert_eq!(e6p4.dex(&w(&[0, 1, 1, 0, 0, 0])).unwrap(), 7);
        assert_eq!(e6p4.dex(&e6p4.line(1)).unwrap(), 1);
        assert_eq!(x("F4/P4").dex(&w(&[1, 0, 0, 0])).unwrap(), 7);
        assert_eq!(x("F4/P4").dex(&w(&[0, 0, 1, 0])).unwrap(), 12);
    }

    #[test]
    fn spinor_closed_form() {
        let s = x("D5/P5");
        for lam in [w(&[0, 0, 0, 1, 0]), w(&[1, 0, 0, 1, 2]), w(&[0, 1, 0, 0, 1])] {
            let dex = s.dex(&lam).unwrap();
            assert_eq!(s.dex_closed_form(&lam).unwrap(), Some(Ratio::from_integer(dex)), "{lam}");
        }
    }

    #[test]
    fn parse_space() {
        assert_eq!(x("E6/P3").to_string(), "E6/P3");
        assert!("E6/P7".parse::<HomSpace>().is_err());
        assert!("E6P3".parse::<HomSpace>().is_err());
    }
}
