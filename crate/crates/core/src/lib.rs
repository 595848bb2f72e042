//! Borel-Weil-Bott cohomology on rational homogeneous spaces `G/P` of Picard
//! number one, and the classification of Calabi-Yau zero loci built on it.

pub mod bwbcohom;
pub mod classify;
pub mod error;
pub mod hodge;
pub mod homspace;
pub mod koszul;
pub mod ledger;
mod memo;
pub mod repcalc;
pub mod rootdata;

pub use bwbcohom::{CohomologyTable, DimValue, FilteredBundle, SpectralModel};
pub use classify::{CandidatePair, ClassificationReport, ClassifyOptions, EnumOptions, HodgeLevel, Scope};
pub use error::{Error, Result};
pub use hodge::{HodgeDiamond, HodgeSummary};
pub use homspace::{GradedCotangent, HomSpace};
pub use koszul::{BundleSum, KoszulPage, ZeroLocus};
pub use repcalc::{Character, IrrDecomp, Mult, ReductiveContext};
pub use rootdata::{Chamber, Family, Root, RootSystemSpec, Weight, WeylWord};

/// Engine version stamp used by persistent caches.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
