//! Rational local types, Moy–Prasad gradings, filtered linear algebra,
//! parahoric degrees and residue typing of λ-connections.
//!
//! Root-pairing convention, used throughout: `⟨α, α∨⟩ = 2` and `⟨α, ϖ∨⟩ = 1`
//! with `α∨ = 2ϖ∨`. An SL₂ type `a·α∨` has standard weights `±a` and adjoint
//! weights `±2a`; a PSL₂ type `b·ϖ∨` has adjoint weights `±b`. Types are never
//! reduced into a fundamental window unless [`FilteredSpace::normalize_window`]
//! or [`ParahoricBundleData::normalize_window`] is called explicitly.

mod degree;
mod filtration;
mod local_type;
mod residue;

pub use degree::{pullback_pdeg, ParahoricBundleData, PointFiltration};
pub use filtration::{filt_dual, filt_hom, filt_sum, filt_tensor, FilteredSpace};
pub use local_type::{
    external_product, half_lift, model_filtration, mp_grading, pullback_type, pushout_sl2_to_psl2, GradedElement,
    LocalType, MpGrading, ProductType, Representation,
};
pub use residue::{classify_residue, matrix_serde, pullback_residue, QMatrix, ResidueDatum, ResidueFlag};
