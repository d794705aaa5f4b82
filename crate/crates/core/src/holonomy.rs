//! Holonomy Lie algebras of the models: the raw presentation transposed from
//! `(d, μ)`, the reduced presentations, weight-graded ranks of the presented
//! algebra through a chosen weight, the 1-formality classifier, and exact
//! checking of Lie homomorphisms into matrix algebras.
//!
//! The holonomy Lie algebra of a degree-≤2 cdga is the free Lie algebra on
//! the dual of `A¹` modulo the ideal generated by the image of `d* + μ*`.
//! Graded ranks are computed as `dim FreeLie_k − dim I_k`, where the ideal's
//! weight-`k` piece is spanned by weight-`k` relations together with brackets
//! of generators against lower-weight ideal elements.

use crate::flatconn::MatrixLieAlgebra;
use crate::graph::Graph;
use crate::lie::{substitute_tensor, FreeLie, LieError, LieExpr, Tensor};
use crate::linalg::{QMatrix, Rational};
use crate::model::{Cdga, Deg1, OSModel};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HolonomyError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("image count {got} does not match generator count {expected}")]
    ImageCount { expected: usize, got: usize },
    #[error("image of generator {index} lies outside the target Lie algebra")]
    ImageOutsideAlgebra { index: usize },
}

/// Weighted generators and weight-homogeneous relations of a Lie algebra.
#[derive(Debug, Clone)]
pub struct LiePresentation {
    pub labels: Vec<String>,
    pub weights: Vec<u32>,
    pub relations: Vec<LieExpr>,
}

/// Ranks of the weight-graded pieces of a presented Lie algebra;
/// `ranks[k-1]` is the rank in weight `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedRanks {
    pub max_weight: u32,
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Formality {
    OneFormal,
    FilteredFormalNotOneFormal,
}

impl std::fmt::Display for Formality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Formality::OneFormal => write!(f, "1-formal"),
            Formality::FilteredFormalNotOneFormal => {
                write!(f, "filtered formal, not 1-formal")
            }
        }
    }
}

/// Fundamental groups here are 1-formal except exactly in genus one with a
/// triangle in the graph.
pub fn formality_classify(genus: usize, graph: &Graph) -> Formality {
    if genus == 1 && !graph.triangles().is_empty() {
        Formality::FilteredFormalNotOneFormal
    } else {
        Formality::OneFormal
    }
}

/// The holonomy presentation of an arbitrary degree-≤2 cdga: one generator
/// per `A¹` basis element (its dual), one relation `d*(φ) + μ*(φ)` per `A²`
/// basis functional `φ`. Zero relations are dropped.
pub fn raw_presentation_of_cdga(cdga: &Cdga, labels: Vec<String>) -> LiePresentation {
    assert_eq!(labels.len(), cdga.dim1);
    let mut terms_by_target: Vec<Vec<(Rational, LieExpr)>> = vec![Vec::new(); cdga.dim2];
    for t in 0..cdga.dim2 {
        for p in 0..cdga.dim1 {
            let c = &cdga.d1[(t, p)];
            if !c.is_zero() {
                terms_by_target[t].push((c.clone(), LieExpr::gen(p)));
            }
        }
    }
    for (p, q, t, c) in cdga.mu_entries() {
        terms_by_target[t].push((c, LieExpr::br(LieExpr::gen(p), LieExpr::gen(q))));
    }
    let relations = terms_by_target
        .into_iter()
        .filter(|terms| !terms.is_empty())
        .map(LieExpr::sum)
        .collect();
    LiePresentation {
        labels,
        weights: cdga.weights1.clone(),
        relations,
    }
}

/// Raw holonomy presentation of a model, with generators `a(i,s)`, `b(i,s)`
/// dual to the surface classes and `C(i,j)` (weight 2) dual to the edge
/// classes.
pub fn raw_presentation(m: &OSModel) -> LiePresentation {
    let labels = m
        .deg1
        .iter()
        .map(|b| match b {
            Deg1::X { vertex, s } => format!("a({vertex},{s})"),
            Deg1::Y { vertex, s } => format!("b({vertex},{s})"),
            Deg1::G { i, j } => format!("C({i},{j})"),
        })
        .collect();
    raw_presentation_of_cdga(&m.cdga, labels)
}

/// The reduced presentation of the holonomy Lie algebra, with all generators
/// in weight one. In genus zero the generators are the `C(i,j)` per edge; in
/// positive genus they are `a(i,s)`, `b(i,s)` with `C_ij := [a_i^1, b_j^1]`.
pub fn reduced_presentation(genus: usize, graph: &Graph) -> LiePresentation {
    if genus == 0 {
        reduced_genus0(graph)
    } else {
        reduced_positive(genus, graph)
    }
}

fn reduced_genus0(graph: &Graph) -> LiePresentation {
    let labels: Vec<String> = graph
        .edges()
        .iter()
        .map(|(i, j)| format!("C({i},{j})"))
        .collect();
    let e = |i: usize, j: usize| LieExpr::gen(graph.edge_index(i, j).unwrap());
    let mut relations = Vec::new();
    // linear: the incident edge sums, one per vertex
    for v in 0..graph.n() {
        let terms: Vec<(Rational, LieExpr)> = graph
            .neighbors(v)
            .into_iter()
            .map(|u| (Rational::one(), e(v, u)))
            .collect();
        if !terms.is_empty() {
            relations.push(LieExpr::sum(terms));
        }
    }
    // quadratic: disjoint pairs commute, and adjacent pairs commute when the
    // closing edge is absent
    let edges = graph.edges();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            let (i1, j1) = edges[a];
            let (i2, j2) = edges[b];
            let shared: Vec<usize> = [i1, j1]
                .into_iter()
                .filter(|v| *v == i2 || *v == j2)
                .collect();
            match shared.len() {
                0 => relations.push(LieExpr::br(LieExpr::gen(a), LieExpr::gen(b))),
                1 => {
                    let s = shared[0];
                    let other1 = if i1 == s { j1 } else { i1 };
                    let other2 = if i2 == s { j2 } else { i2 };
                    if !graph.has_edge(other1, other2) {
                        relations.push(LieExpr::br(LieExpr::gen(a), LieExpr::gen(b)));
                    }
                }
                _ => unreachable!("distinct edges share at most one vertex"),
            }
        }
    }
    // triangles: [C_ij + C_jk, C_ik] in every labeling of the triangle
    for [i, j, k] in graph.triangles() {
        let sum2 = |x: LieExpr, y: LieExpr| {
            LieExpr::sum(vec![(Rational::one(), x), (Rational::one(), y)])
        };
        relations.push(LieExpr::br(sum2(e(i, j), e(j, k)), e(i, k)));
        relations.push(LieExpr::br(sum2(e(i, j), e(i, k)), e(j, k)));
        relations.push(LieExpr::br(sum2(e(i, k), e(j, k)), e(i, j)));
    }
    LiePresentation {
        weights: vec![1; labels.len()],
        labels,
        relations,
    }
}

fn reduced_positive(g: usize, graph: &Graph) -> LiePresentation {
    let n = graph.n();
    let mut labels = Vec::with_capacity(2 * g * n);
    for i in 0..n {
        for s in 1..=g {
            labels.push(format!("a({i},{s})"));
            labels.push(format!("b({i},{s})"));
        }
    }
    let a = |i: usize, s: usize| LieExpr::gen(i * 2 * g + 2 * (s - 1));
    let b = |i: usize, s: usize| LieExpr::gen(i * 2 * g + 2 * (s - 1) + 1);
    // representative of C_ij, symmetric in {i,j}
    let c = |i: usize, j: usize| LieExpr::br(a(i.min(j), 1), b(i.max(j), 1));
    let one = Rational::one;
    let minus = || -Rational::one();
    let mut relations = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            // all representatives of C_ij agree
            for s in 2..=g {
                relations.push(LieExpr::sum(vec![
                    (one(), LieExpr::br(a(i, s), b(j, s))),
                    (minus(), c(i, j)),
                ]));
            }
            for t in 1..=g {
                relations.push(LieExpr::sum(vec![
                    (one(), LieExpr::br(a(j, t), b(i, t))),
                    (minus(), c(i, j)),
                ]));
            }
            // C_ij dies on non-edges
            if !graph.has_edge(i, j) {
                relations.push(c(i, j));
            }
            // mixed symplectic indices commute
            for s in 1..=g {
                for t in 1..=g {
                    if s != t {
                        relations.push(LieExpr::br(a(i, s), b(j, t)));
                        relations.push(LieExpr::br(a(j, s), b(i, t)));
                    }
                }
            }
            // a's commute with a's, b's with b's
            for s in 1..=g {
                for t in 1..=g {
                    relations.push(LieExpr::br(a(i, s), a(j, t)));
                    relations.push(LieExpr::br(b(i, s), b(j, t)));
                }
            }
        }
    }
    // surface relation at each vertex
    for i in 0..n {
        let mut terms: Vec<(Rational, LieExpr)> = graph
            .neighbors(i)
            .into_iter()
            .map(|j| (one(), c(i, j)))
            .collect();
        for s in 1..=g {
            terms.push((minus(), LieExpr::br(b(i, s), a(i, s))));
        }
        relations.push(LieExpr::sum(terms));
    }
    // cubic relations: outside generators kill the edge classes
    for &(i, j) in graph.edges() {
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            for s in 1..=g {
                relations.push(LieExpr::br(a(k, s), c(i, j)));
                relations.push(LieExpr::br(b(k, s), c(i, j)));
            }
        }
    }
    LiePresentation {
        weights: vec![1; labels.len()],
        labels,
        relations,
    }
}

struct HomogeneousRelation {
    weight: u32,
    tensor: Tensor,
}

type Substitutions = Vec<Option<Vec<(u16, Rational)>>>;

/// Expands relations, verifies weight homogeneity, eliminates generators
/// along purely linear relations, and returns the reduced alphabet plus the
/// surviving relation tensors (letters reindexed onto the kept generators),
/// together with the substitution data for mapping further elements in.
#[allow(clippy::type_complexity)]
fn prepare(
    p: &LiePresentation,
    max_weight: u32,
) -> Result<
    (
        Vec<String>,
        Vec<u32>,
        Vec<HomogeneousRelation>,
        Substitutions,
        std::collections::HashMap<u16, u16>,
    ),
    LieError,
> {
    let ngen = p.labels.len();
    let weight_of_word =
        |w: &[u16]| -> u32 { w.iter().map(|&l| p.weights[l as usize]).sum() };
    let mut expanded: Vec<(u32, Tensor)> = Vec::new();
    for (index, rel) in p.relations.iter().enumerate() {
        if let Some(max) = rel.max_gen() {
            if max >= ngen {
                return Err(LieError::UnknownGenerator(max));
            }
        }
        let t = rel.to_tensor();
        if t.is_empty() {
            continue;
        }
        let mut wts = t.keys().map(|w| weight_of_word(w));
        let first = wts.next().unwrap();
        if !wts.all(|w| w == first) {
            return Err(LieError::InhomogeneousRelation { index });
        }
        expanded.push((first, t));
    }

    // purely linear relations eliminate generators
    let linear: Vec<&Tensor> = expanded
        .iter()
        .filter(|(_, t)| t.keys().all(|w| w.len() == 1))
        .map(|(_, t)| t)
        .collect();
    let mut subs: Vec<Option<Vec<(u16, Rational)>>> = vec![None; ngen];
    let mut eliminated = vec![false; ngen];
    if !linear.is_empty() {
        let rows: Vec<Vec<Rational>> = linear
            .iter()
            .map(|t| {
                let mut row = vec![Rational::zero(); ngen];
                for (w, c) in t.iter() {
                    row[w[0] as usize] = c.clone();
                }
                row
            })
            .collect();
        let (r, pivots) = QMatrix::from_rows(rows).rref();
        for (ri, &pc) in pivots.iter().enumerate() {
            eliminated[pc] = true;
            let combo: Vec<(u16, Rational)> = (0..ngen)
                .filter(|&c| c != pc && !r[(ri, c)].is_zero())
                .map(|c| (c as u16, -r[(ri, c)].clone()))
                .collect();
            subs[pc] = Some(combo);
        }
    }
    let kept: Vec<usize> = (0..ngen).filter(|&i| !eliminated[i]).collect();
    let relabel: std::collections::HashMap<u16, u16> = kept
        .iter()
        .enumerate()
        .map(|(new, &old)| (old as u16, new as u16))
        .collect();

    let mut relations = Vec::new();
    for (weight, t) in &expanded {
        if *weight > max_weight {
            continue;
        }
        if t.keys().all(|w| w.len() == 1) && !linear.is_empty() {
            continue; // consumed by the elimination
        }
        let substituted = if linear.is_empty() {
            t.clone()
        } else {
            substitute_tensor(t, &subs)
        };
        if substituted.is_empty() {
            continue;
        }
        let relabeled: Tensor = substituted
            .into_iter()
            .map(|(w, c)| (w.iter().map(|l| relabel[l]).collect(), c))
            .collect();
        relations.push(HomogeneousRelation {
            weight: *weight,
            tensor: relabeled,
        });
    }
    let labels = kept.iter().map(|&i| p.labels[i].clone()).collect();
    let weights = kept.iter().map(|&i| p.weights[i]).collect();
    Ok((labels, weights, relations, subs, relabel))
}

/// The relation ideal of a presentation, materialized weight by weight up to
/// a bound. Exposes graded ranks of the quotient and exact membership tests
/// for further elements.
pub struct QuotientContext {
    ctx: FreeLie,
    subs: Vec<Option<Vec<(u16, Rational)>>>,
    relabel: std::collections::HashMap<u16, u16>,
    spans: Vec<crate::lie::SpanBuilder>,
    ranks: Vec<usize>,
    original_weights: Vec<u32>,
}

impl QuotientContext {
    pub fn new(p: &LiePresentation, max_weight: u32) -> Result<Self, LieError> {
        let (labels, weights, relations, subs, relabel) = prepare(p, max_weight)?;
        let ctx = FreeLie::new(labels, weights, max_weight)?;
        let mut spans: Vec<crate::lie::SpanBuilder> = Vec::new();
        spans.resize_with(max_weight as usize + 1, crate::lie::SpanBuilder::new);
        let mut ranks = Vec::with_capacity(max_weight as usize);
        // independent ideal elements found at each weight, lifted upward by
        // bracketing with generators
        let mut ideal_basis: Vec<Vec<crate::lie::LieElement>> =
            vec![Vec::new(); max_weight as usize + 1];
        for k in 1..=max_weight {
            let mut basis_here = Vec::new();
            for rel in relations.iter().filter(|r| r.weight == k) {
                let elt = ctx.lyndonize(rel.tensor.clone())?;
                if !elt.is_zero() && spans[k as usize].insert(ctx.coordinates(&elt, k)) {
                    basis_here.push(elt);
                }
            }
            for gen in 0..ctx.gen_count() {
                let wg = ctx.weights[gen];
                if wg >= k {
                    continue;
                }
                for elt in ideal_basis[(k - wg) as usize].clone() {
                    let bracketed = ctx.bracket_gen(gen, &elt)?;
                    if !bracketed.is_zero()
                        && spans[k as usize].insert(ctx.coordinates(&bracketed, k))
                    {
                        basis_here.push(bracketed);
                    }
                }
            }
            ranks.push(ctx.basis_dim(k) - spans[k as usize].rank());
            ideal_basis[k as usize] = basis_here;
        }
        Ok(QuotientContext {
            ctx,
            subs,
            relabel,
            spans,
            ranks,
            original_weights: p.weights.clone(),
        })
    }

    pub fn ranks(&self) -> GradedRanks {
        GradedRanks {
            max_weight: self.ranks.len() as u32,
            ranks: self.ranks.clone(),
        }
    }

    /// Does the element (written over the original generators) normalize to
    /// zero in the quotient?
    pub fn is_zero(&self, expr: &LieExpr) -> Result<bool, LieError> {
        let t = expr.to_tensor();
        if t.is_empty() {
            return Ok(true);
        }
        let weight: u32 = {
            let w = t.keys().next().unwrap();
            w.iter().map(|&l| self.original_weights[l as usize]).sum()
        };
        if weight as usize >= self.spans.len() {
            return Err(LieError::TooLarge {
                weight,
                count: 0,
                bound: self.spans.len() - 1,
            });
        }
        let substituted = substitute_tensor(&t, &self.subs);
        let relabeled: Tensor = substituted
            .into_iter()
            .map(|(w, c)| (w.iter().map(|l| self.relabel[l]).collect(), c))
            .collect();
        let elt = self.ctx.lyndonize(relabeled)?;
        if elt.is_zero() {
            return Ok(true);
        }
        Ok(self.spans[weight as usize].contains(self.ctx.coordinates(&elt, weight)))
    }
}

/// Weight-graded ranks of `FreeLie(generators)/⟨relations⟩` through
/// `max_weight`.
pub fn lcs_ranks(p: &LiePresentation, max_weight: u32) -> Result<GradedRanks, LieError> {
    Ok(QuotientContext::new(p, max_weight)?.ranks())
}

/// Evaluates generator images in a matrix Lie algebra against every relation.
/// Returns `true` iff all relations map to the zero matrix.
pub fn lie_hom_check(
    p: &LiePresentation,
    algebra: &MatrixLieAlgebra,
    images: &[QMatrix],
) -> Result<bool, HolonomyError> {
    if images.len() != p.labels.len() {
        return Err(HolonomyError::ImageCount {
            expected: p.labels.len(),
            got: images.len(),
        });
    }
    for (index, m) in images.iter().enumerate() {
        if algebra.coords_of(m).is_none() {
            return Err(HolonomyError::ImageOutsideAlgebra { index });
        }
    }
    Ok(p.relations
        .iter()
        .all(|rel| eval_expr(rel, images).is_zero()))
}

fn eval_expr(expr: &LieExpr, images: &[QMatrix]) -> QMatrix {
    match expr {
        LieExpr::Gen(i) => images[*i].clone(),
        LieExpr::Bracket(a, b) => {
            let ma = eval_expr(a, images);
            let mb = eval_expr(b, images);
            let mut out = ma.mul(&mb);
            let back = mb.mul(&ma);
            for r in 0..out.rows() {
                for c in 0..out.cols() {
                    let v = &out[(r, c)] - &back[(r, c)];
                    out[(r, c)] = v;
                }
            }
            out
        }
        LieExpr::Sum(terms) => {
            let mut out: Option<QMatrix> = None;
            for (coef, e) in terms {
                let m = eval_expr(e, images);
                let acc = out.get_or_insert_with(|| QMatrix::zeros(m.rows(), m.cols()));
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let v = &acc[(r, c)] + coef * &m[(r, c)];
                        acc[(r, c)] = v;
                    }
                }
            }
            out.expect("sum expressions are nonempty")
        }
    }
}
