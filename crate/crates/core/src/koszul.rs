//! Zero loci of general sections and their Koszul resolutions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bwbcohom::{self, CohomologyTable, FilteredBundle, SpectralModel};
use crate::error::{Error, Result};
use crate::homspace::HomSpace;
use crate::memo::Memo;
use crate::repcalc::{self, IrrDecomp, Mult};
use crate::rootdata::Weight;

/// `⊕ E_{λ_i}^{m_i}` with twists absorbed into the weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BundleSum {
    summands: Vec<(Weight, usize)>,
}

impl BundleSum {
    pub fn new(terms: impl IntoIterator<Item = (Weight, usize)>) -> Self {
        let mut m: BTreeMap<Weight, usize> = BTreeMap::new();
        for (w, c) in terms {
            if c > 0 {
                *m.entry(w).or_default() += c;
            }
        }
        BundleSum { summands: m.into_iter().collect() }
    }

    pub fn lines(x: &HomSpace, twists: &[i32]) -> Self {
        BundleSum::new(twists.iter().map(|&t| (x.line(t), 1)))
    }

    /// Summands sorted by weight.
    pub fn summands(&self) -> &[(Weight, usize)] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn count(&self) -> usize {
        self.summands.iter().map(|(_, c)| c).sum()
    }

    pub fn to_irr(&self) -> IrrDecomp {
        IrrDecomp::from_terms(self.summands.iter().map(|(w, c)| (w.clone(), *c as Mult)))
    }

    pub fn check(&self, x: &HomSpace) -> Result<()> {
        for (w, _) in &self.summands {
            x.require_p_dominant(w)?;
        }
        Ok(())
    }

    pub fn rank(&self, x: &HomSpace) -> Result<BigInt> {
        self.check(x)?;
        self.to_irr().dim(&x.levi())
    }

    pub fn dex(&self, x: &HomSpace) -> Result<i64> {
        let mut t = 0;
        for (w, c) in &self.summands {
            t += x.dex(w)? * *c as i64;
        }
        Ok(t)
    }

    pub fn dual(&self, x: &HomSpace) -> Result<IrrDecomp> {
        self.to_irr().dual(&x.levi())
    }

    /// Every summand is `G`-dominant.
    pub fn is_globally_generated(&self) -> bool {
        self.summands.iter().all(|(w, _)| w.0.iter().all(|&c| c >= 0))
    }
}

impl fmt::Display for BundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(w, c)| if *c == 1 { w.to_string() } else { format!("{w}^{c}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZeroLocus {
    pub space: HomSpace,
    pub bundle: BundleSum,
    pub d: usize,
}

/// `Λ^p F*` for `p = 0..=rank F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulPage {
    pub terms: Vec<IrrDecomp>,
}

impl KoszulPage {
    pub fn rank(&self) -> usize {
        self.terms.len() - 1
    }

    /// `(p, q) → dim H^q(X, Λ^p F*)`, nonzero entries only.
    pub fn cohomology(&self, x: &HomSpace) -> Result<BTreeMap<(usize, usize), BigInt>> {
        let mut out = BTreeMap::new();
        for (p, t) in self.terms.iter().enumerate() {
            let tab = bwbcohom::bundle_cohomology(x, t)?;
            for (q, d) in tab.dims.iter().enumerate() {
                if let Some(v) = d.exact() {
                    if !v.is_zero() {
                        out.insert((p, q), v.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

impl ZeroLocus {
    pub fn new(space: HomSpace, bundle: BundleSum) -> Result<Self> {
        bundle.check(&space)?;
        if bundle.summands.iter().any(|(w, _)| w.is_zero()) {
            return Err(Error::EmptyLocus);
        }
        let rank = bundle.rank(&space)?;
        let dim = space.dimension();
        if rank > BigInt::from(dim) {
            return Err(Error::NegativeDimension { rank: rank.to_string(), dim });
        }
        let d = dim - usize::try_from(rank).map_err(|_| Error::Overflow)?;
        Ok(ZeroLocus { space, bundle, d })
    }

    pub fn rank(&self) -> usize {
        self.space.dimension() - self.d
    }

    pub fn dual_bundle(&self) -> Result<IrrDecomp> {
        self.bundle.dual(&self.space)
    }

    /// Koszul model of `E|_Z`: pieces `G_s ⊗ Λ^p F*` ordered by `(s, p)`.
    pub fn model(&self, e: &FilteredBundle) -> Result<SpectralModel> {
        e.check(&self.space)?;
        let page = exterior_dual_powers(self)?;
        let levi = self.space.levi();
        let x = &self.space;
        let chars = e.gradeds.iter().map(|g| g.character(&levi)).collect::<Result<Vec<_>>>()?;
        let jobs: Vec<(usize, usize)> =
            (0..e.gradeds.len()).flat_map(|s| (0..page.terms.len()).map(move |p| (s, p))).collect();
        let tables = jobs
            .par_iter()
            .map(|&(s, p)| bwbcohom::product_modules(x, &page.terms[p], &chars[s]))
            .collect::<Result<Vec<_>>>()?;
        let mut model = SpectralModel::default();
        for (&(s, p), t) in jobs.iter().zip(&tables) {
            model.push_modules(x, s, p, t)?;
        }
        Ok(model)
    }
}

/// Memoized wedge powers of `F*`.
pub fn exterior_dual_powers(z: &ZeroLocus) -> Result<Arc<KoszulPage>> {
    static M: OnceLock<Memo<(HomSpace, BundleSum), KoszulPage>> = OnceLock::new();
    M.get_or_init(Memo::new).get_or_try(&(z.space, z.bundle.clone()), || {
        let dual = z.dual_bundle()?;
        let table = repcalc::exterior_table(&z.space.levi(), &dual)?;
        Ok(KoszulPage { terms: table.as_ref().clone() })
    })
}

pub fn structure_cohomology(z: &ZeroLocus) -> Result<CohomologyTable> {
    let trivial = FilteredBundle::completely_reducible(IrrDecomp::trivial(z.space.rank()));
    restricted_cohomology(z, &trivial)
}

pub fn restricted_cohomology(z: &ZeroLocus, e: &FilteredBundle) -> Result<CohomologyTable> {
    z.model(e)?.table(&z.space, 0, z.d)
}
