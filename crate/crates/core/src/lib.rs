//! Discrete and numerical bookkeeping for hyperbolic log–orbi curves.
//!
//! The crate is organised bottom-up:
//!
//! - [`signature`]: exact Euler characteristic, canonical degree and sector of a signature.
//! - [`fuchsian`]: orbifold group presentations, Todd–Coxeter coset enumeration,
//!   low-index subgroups and the signatures of the corresponding covers.
//! - [`parahoric`]: rational local types, Moy–Prasad gradings, filtered linear
//!   algebra, parahoric degrees and residue typing of λ-connections.
//! - [`canonical`]: the canonical maximal PSL₂ local-type system of a hyperbolic curve.
//! - [`triangle`]: hypergeometric monodromy of hyperbolic triangle orbifolds.
//! - [`orb_poset`]: orbifold models over a fixed coarse curve, lcm joins and
//!   étale resolution of ramification.
//!
//! All discrete arithmetic is exact ([`Rational`] is an arbitrary-precision
//! rational); only [`triangle`] works in floating point.

pub mod canonical;
pub mod error;
pub mod fuchsian;
pub mod orb_poset;
pub mod parahoric;
pub mod rational;
pub mod signature;
pub mod triangle;

pub use canonical::{
    canonical_type_system, maximality_certificate, CanonicalPoint, CanonicalTypeSystem, MaximalityReport,
};
pub use error::{Error, ErrorClass, Result};
pub use fuchsian::{
    coset_enumerate, induced_signature, low_index_subgroups, presentation, CosetTable, OrbiPresentation, Presentation,
    SubgroupRecord, Word,
};
pub use orb_poset::{common_refinement, refines, resolve_ramification, OrbifoldModel, RamifiedCoverData, Resolution};
pub use parahoric::{FilteredSpace, LocalType, ParahoricBundleData, ResidueDatum, ResidueFlag};
pub use rational::Rational;
pub use signature::{Sector, Signature, SpecialPoint};
pub use triangle::{eigenvalue_oracle, hypergeometric_monodromy, triangle_data, TriangleData, TriangleMonodromyReport};
