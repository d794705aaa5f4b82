//! Exact-arithmetic models of partial configuration spaces of Riemann surfaces.
//!
//! Given a finite simple graph `Γ` and a genus `g`, the space under study is
//! `F(g, Γ) = { z ∈ Σ_g^V : z_i ≠ z_j for ij ∈ E }`, the partial configuration
//! space of a genus-`g` surface. This crate builds the truncated bigraded
//! model `A^≤2(g, Γ)` of that space over ℚ and computes its invariants
//! exactly: first Betti numbers, admissible maps onto curves of general type,
//! rank-one resonance decompositions, holonomy Lie algebra presentations with
//! their lower-central-series ranks, 1-formality, and sl₂/sol₂ flat-connection
//! decompositions with covariant-derivative resonance.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! integers; there are no tolerances anywhere.

pub mod admissible;
pub mod flatconn;
pub mod graph;
pub mod holonomy;
pub mod lie;
pub mod linalg;
pub mod model;
pub mod resonance;

pub use admissible::{enumerate_admissible, image_h1, AdmissibleMap, MapLabel};
pub use flatconn::{
    decompose_flat, grid_enumerate_flat, verify_m3res, FlatDecomposition, LieAlgKind,
    MatrixLieAlgebra, Representation,
};
pub use graph::{Graph, GraphError};
pub use holonomy::{
    formality_classify, lcs_ranks, lie_hom_check, raw_presentation, reduced_presentation,
    Formality, GradedRanks, LiePresentation,
};
pub use lie::{FreeLie, LieElement, LieExpr};
pub use linalg::{rat, ratio, QMatrix, Rational, Subspace};
pub use model::{betti1, build_curve_model, build_model, Cdga, CurveKind, CurveModel, OSModel};
pub use resonance::{
    dxi_matrix, h1_rank_at, resonance_components, verify_decomposition, ResonanceComponent,
};
