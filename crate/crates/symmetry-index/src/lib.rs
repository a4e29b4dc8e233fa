//! Index of symmetry for compact homogeneous Riemannian spaces.
//!
//! A homogeneous space is presented by the structure constants of a Lie
//! algebra g, an isotropy subalgebra h, and an invariant metric on a
//! reductive complement m. This crate computes, at the base point:
//!
//! - the Killing operators of candidate Killing fields (fields induced by g
//!   and, on naturally reductive spaces, G-invariant fields attached to
//!   isotropy-fixed vectors);
//! - the Cartan subspace of transvections (candidates whose operator
//!   vanishes), whose values span the symmetry subspace; its dimension is
//!   the index of symmetry;
//! - the structure of the leaf of symmetry: flat part, irreducible factors,
//!   group-type detection on the reconstructed involutive algebra;
//! - metric classification (normal, naturally reductive), the transvection
//!   algebra of the canonical connection, and the ad-invariant bilinear form
//!   on g extending the metric with h orthogonal to m.
//!
//! The `catalog` module builds classical examples (spheres, Stiefel
//! manifolds, bi-invariant groups, unit tangent bundles of spheres with the
//! fiber-scaled metric, an Aloff-Wallach space) with expected values; the
//! `symidx` binary exposes the pipeline on space-description files.

pub mod catalog;
pub mod homo;
pub mod killing;
pub mod kostant;
pub mod leaf;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod spacefile;

pub use homo::{Assertions, HomogeneousSpace, MetricFlags, MetricSpec};
pub use killing::{
    CartanSubspace, EngineOptions, IndexStatus, InvariantFieldPolicy, KillingCandidate,
    KillingEngine, SignConvention,
};
pub use leaf::{LeafDecomposition, LeafFactor, SymmetryFixedCheck};
pub use lie::{BilinearForm, LieAlgebra, Subspace, DEFAULT_TOLERANCE};
pub use report::{analyze, AnalysisOptions, SymmetryReport};
pub use spacefile::SpaceDescription;
