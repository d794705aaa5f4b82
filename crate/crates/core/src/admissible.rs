//! Admissible maps of general type on `F(g, Γ)` and their pullbacks into the
//! model. There is one map per vertex when `g ≥ 2` (projection to the
//! surface), one per edge when `g = 1` (projection followed by the elliptic
//! difference map), and one per `K₄` subgraph when `g = 0` (projection
//! followed by the cross-ratio).

use crate::linalg::{rat, QMatrix, Rational, Subspace};
use crate::model::{build_curve_model, CurveKind, CurveModel, OSModel};
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapLabel {
    Vertex(usize),
    Edge(usize, usize),
    Quad([usize; 4]),
}

impl std::fmt::Display for MapLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapLabel::Vertex(i) => write!(f, "vertex {i}"),
            MapLabel::Edge(i, j) => write!(f, "edge {i}-{j}"),
            MapLabel::Quad([i, j, k, l]) => write!(f, "quad {i}-{j}-{k}-{l}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdmissibleError {
    #[error("admissible map does not belong to this model")]
    MismatchedModel,
}

/// One admissible map, materialized as the pair of pullback matrices of the
/// induced map between truncated models.
#[derive(Debug, Clone)]
pub struct AdmissibleMap {
    pub label: MapLabel,
    pub target: CurveModel,
    /// Target `A¹` basis → model `A¹` coordinates; shape `dim1(model) × dim1(target)`.
    pub pullback_deg1: QMatrix,
    /// Target `A²` basis → model `A²` coordinates.
    pub pullback_deg2: QMatrix,
}

/// Enumerates the complete set of admissible maps of general type for the
/// model's genus. Empty when no generating substructure exists.
///
/// In genus zero the curve generators pull back to the closed combinations
/// `G_il + G_jk − G_ij − G_kl` and `G_ik + G_jl − G_ij − G_kl` (the
/// logarithmic classes of the cross-ratio and of the cross-ratio minus one);
/// the third generator maps to zero. These are the unique choices for which
/// the pullback is both a chain map and multiplicative into the
/// Orlik–Solomon quotient.
pub fn enumerate_admissible(m: &OSModel) -> Vec<AdmissibleMap> {
    let g = m.genus;
    let n = m.graph.n();
    let dim1 = m.dim1();
    let dim2 = m.dim2();
    let mut maps = Vec::new();
    match g {
        0 => {
            for quad in m.graph.k4_subgraphs() {
                let [i, j, k, l] = quad;
                let target = build_curve_model(CurveKind::ProjLineThreePoints);
                let ge = |a: usize, b: usize| m.g_index(a, b).unwrap();
                let mut pb1 = QMatrix::zeros(dim1, 3);
                // zero locus of the cross-ratio: D_il ∪ D_jk, minus the
                // infinity locus D_ij ∪ D_kl
                for (row, c) in [(ge(i, l), 1), (ge(j, k), 1), (ge(i, j), -1), (ge(k, l), -1)] {
                    pb1[(row, 0)] = rat(c);
                }
                // one locus: D_ik ∪ D_jl, minus the same infinity locus
                for (row, c) in [(ge(i, k), 1), (ge(j, l), 1), (ge(i, j), -1), (ge(k, l), -1)] {
                    pb1[(row, 1)] = rat(c);
                }
                let pb2 = QMatrix::zeros(dim2, 1);
                maps.push(AdmissibleMap {
                    label: MapLabel::Quad(quad),
                    target,
                    pullback_deg1: pb1,
                    pullback_deg2: pb2,
                });
            }
        }
        1 => {
            for &(i, j) in m.graph.edges() {
                let target = build_curve_model(CurveKind::EllipticPunctured);
                let mut pb1 = QMatrix::zeros(dim1, 3);
                pb1[(m.x_index(i, 1), 0)] = rat(1);
                pb1[(m.x_index(j, 1), 0)] = rat(-1);
                pb1[(m.y_index(i, 1), 1)] = rat(1);
                pb1[(m.y_index(j, 1), 1)] = rat(-1);
                let gcol = m.g_index(i, j).unwrap();
                pb1[(gcol, 2)] = rat(1);
                // O ↦ d(G_ij), forced by d-compatibility
                let mut pb2 = QMatrix::zeros(dim2, 1);
                for (t, c) in m.cdga.d1.col(gcol).into_iter().enumerate() {
                    pb2[(t, 0)] = c;
                }
                maps.push(AdmissibleMap {
                    label: MapLabel::Edge(i, j),
                    target,
                    pullback_deg1: pb1,
                    pullback_deg2: pb2,
                });
            }
        }
        _ => {
            for i in 0..n {
                let target = build_curve_model(CurveKind::GenusTwoPlus(g));
                let mut pb1 = QMatrix::zeros(dim1, 2 * g);
                for s in 1..=g {
                    pb1[(m.x_index(i, s), 2 * (s - 1))] = rat(1);
                    pb1[(m.y_index(i, s), 2 * (s - 1) + 1)] = rat(1);
                }
                let mut pb2 = QMatrix::zeros(dim2, 1);
                pb2[(i, 0)] = rat(1); // ω ↦ ω_i
                maps.push(AdmissibleMap {
                    label: MapLabel::Vertex(i),
                    target,
                    pullback_deg1: pb1,
                    pullback_deg2: pb2,
                });
            }
        }
    }
    maps
}

/// Image of `H¹(target) = ker(d_target)` under the degree-one pullback, as a
/// subspace of the model's `A¹`.
pub fn image_h1(f: &AdmissibleMap, m: &OSModel) -> Result<Subspace, AdmissibleError> {
    if f.pullback_deg1.rows() != m.dim1() || f.pullback_deg2.rows() != m.dim2() {
        return Err(AdmissibleError::MismatchedModel);
    }
    let rows = f
        .target
        .cdga
        .h1_basis()
        .basis_rows()
        .into_iter()
        .map(|v| f.pullback_deg1.mul_vec(&v))
        .collect();
    Ok(Subspace::from_spanning_rows(m.dim1(), rows))
}

/// Checks that the pullback is a map of cochain complexes:
/// `pullback_deg2 ∘ d_target = d_model ∘ pullback_deg1`.
pub fn d_compatible(f: &AdmissibleMap, m: &OSModel) -> bool {
    let lhs = f.pullback_deg2.mul(&f.target.cdga.d1);
    let rhs = m.cdga.d1.mul(&f.pullback_deg1);
    lhs == rhs
}

/// Checks multiplicativity on degree-one pairs:
/// `μ_model(f*p, f*q) = f*(μ_target(p, q))` for all target basis pairs.
pub fn multiplicative(f: &AdmissibleMap, m: &OSModel) -> bool {
    let dt = f.target.cdga.dim1;
    for p in 0..dt {
        for q in 0..dt {
            let fp = f.pullback_deg1.col(p);
            let fq = f.pullback_deg1.col(q);
            let lhs = m.cdga.mu_bilinear(&fp, &fq);
            let mut rhs = vec![Rational::zero(); m.dim2()];
            for (t, c) in f.target.cdga.mu_pair(p, q) {
                for (tt, cc) in f.pullback_deg2.col(t).into_iter().enumerate() {
                    rhs[tt] += &c * cc;
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}
