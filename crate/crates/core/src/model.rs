//! The truncated bigraded model `A^≤2(g, Γ)` of a partial configuration
//! space, with explicit bases, differential and product, plus the three
//! curve models that serve as targets of admissible maps.
//!
//! Degree-one basis, in order: `x_i^s, y_i^s` for each vertex `i` and
//! symplectic index `s` (weight 1), then one generator `G_e` per edge
//! (weight 2). Degree two decomposes by weight:
//!
//! * weight 2 — `ω_i` per vertex plus, for `g ≥ 1`, the cross classes
//!   `u_i ⊗ v_j` with `i < j`;
//! * weight 3 — `A¹₁ ⊗ G` modulo `(x_i^s − x_j^s) ⊗ G_ij` and the same in
//!   `y`, per edge;
//! * weight 4 — `Λ²G` modulo one relation per triangle.
//!
//! The two quotients are realized by row reduction of explicit relation
//! matrices; the chosen coordinate basis is the complement of the pivot
//! columns, so the whole construction is deterministic.

use crate::graph::Graph;
use crate::linalg::{rat, QMatrix, Rational, Subspace};
use num_traits::Zero;
use serde::Serialize;

/// Degree-one basis label. `s` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Deg1 {
    X { vertex: usize, s: usize },
    Y { vertex: usize, s: usize },
    G { i: usize, j: usize },
}

/// Degree-two basis label. `Tens` and `Wedge` name the representative raw
/// element of a quotient class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Deg2 {
    Omega { vertex: usize },
    /// `left`/`right` index into the degree-one basis (both vertex classes).
    Cross { left: usize, right: usize },
    /// Class of `deg1[gen] ⊗ G_{i,j}` in the weight-3 quotient.
    Tens { gen: usize, i: usize, j: usize },
    /// Class of `G_{e1} ∧ G_{e2}` in the weight-4 quotient.
    Wedge { e1: (usize, usize), e2: (usize, usize) },
}

impl std::fmt::Display for Deg1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Deg1::X { vertex, s } => write!(f, "x({vertex},{s})"),
            Deg1::Y { vertex, s } => write!(f, "y({vertex},{s})"),
            Deg1::G { i, j } => write!(f, "G({i},{j})"),
        }
    }
}

/// Sparse coordinate vector.
pub type SparseVec = Vec<(usize, Rational)>;

/// The degree ≤ 2 data every computation here consumes: dimensions, weights,
/// the differential `d: A¹ → A²` and the product `μ: Λ²A¹ → A²`.
#[derive(Debug, Clone)]
pub struct Cdga {
    pub dim1: usize,
    pub dim2: usize,
    pub weights1: Vec<u32>,
    pub weights2: Vec<u32>,
    /// Matrix of `d`, shape `dim2 × dim1`.
    pub d1: QMatrix,
    /// `μ(e_p, e_q)` for `p < q`, keyed by triangular pair index.
    mu: Vec<SparseVec>,
}

fn pair_index(p: usize, q: usize, n: usize) -> usize {
    debug_assert!(p < q && q < n);
    // index into the list (0,1),(0,2),...,(0,n-1),(1,2),...
    p * n - p * (p + 1) / 2 + (q - p - 1)
}

impl Cdga {
    fn new(dim1: usize, dim2: usize, weights1: Vec<u32>, weights2: Vec<u32>) -> Self {
        Cdga {
            dim1,
            dim2,
            weights1,
            weights2,
            d1: QMatrix::zeros(dim2, dim1),
            mu: vec![Vec::new(); dim1 * dim1.saturating_sub(1) / 2],
        }
    }

    fn set_mu(&mut self, p: usize, q: usize, value: SparseVec) {
        let idx = pair_index(p, q, self.dim1);
        self.mu[idx] = value;
    }

    /// `μ(e_p, e_q)` as a sparse vector; antisymmetric in `(p, q)`.
    pub fn mu_pair(&self, p: usize, q: usize) -> SparseVec {
        if p == q {
            return Vec::new();
        }
        let (a, b, sign) = if p < q { (p, q, 1) } else { (q, p, -1) };
        let v = &self.mu[pair_index(a, b, self.dim1)];
        if sign == 1 {
            v.clone()
        } else {
            v.iter().map(|(t, c)| (*t, -c)).collect()
        }
    }

    /// Bilinear extension of `μ` to arbitrary degree-one vectors.
    pub fn mu_bilinear(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        assert_eq!(a.len(), self.dim1);
        assert_eq!(b.len(), self.dim1);
        let mut out = vec![Rational::zero(); self.dim2];
        for p in 0..self.dim1 {
            if a[p].is_zero() {
                continue;
            }
            for q in 0..self.dim1 {
                if p == q || b[q].is_zero() {
                    continue;
                }
                let coef = &a[p] * &b[q];
                for (t, c) in self.mu_pair(p, q) {
                    out[t] += &coef * &c;
                }
            }
        }
        out
    }

    pub fn d_apply(&self, a: &[Rational]) -> Vec<Rational> {
        self.d1.mul_vec(a)
    }

    /// Basis of `ker(d: A¹ → A²)`, i.e. of `H¹`.
    pub fn h1_basis(&self) -> Subspace {
        self.d1.kernel_basis()
    }

    pub fn betti1(&self) -> usize {
        self.h1_basis().dim()
    }

    /// All `(p, q, target, coefficient)` product quadruples with `p < q`,
    /// deterministically ordered.
    pub fn mu_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for p in 0..self.dim1 {
            for q in p + 1..self.dim1 {
                for (t, c) in &self.mu[pair_index(p, q, self.dim1)] {
                    out.push((p, q, *t, c.clone()));
                }
            }
        }
        out
    }
}

/// The truncated model of `F(g, Γ)`.
#[derive(Debug, Clone)]
pub struct OSModel {
    pub genus: usize,
    pub graph: Graph,
    pub deg1: Vec<Deg1>,
    pub deg2: Vec<Deg2>,
    /// Dimensions of the weight-2, weight-3 and weight-4 pieces of `A²`.
    pub dim_a2w2: usize,
    pub dim_a2w3: usize,
    pub dim_a2w4: usize,
    /// Projection of the raw spanning set `A¹₁ ⊗ G` onto the weight-3 basis;
    /// raw index is `gen * |E| + edge`.
    pub a2w3_proj: QMatrix,
    /// Projection of the raw wedges `G_e ∧ G_f` (pairs `e < f`, lex) onto the
    /// weight-4 basis.
    pub a2w4_proj: QMatrix,
    pub cdga: Cdga,
}

impl OSModel {
    pub fn dim1(&self) -> usize {
        self.cdga.dim1
    }

    pub fn dim2(&self) -> usize {
        self.cdga.dim2
    }

    pub fn label1(&self, p: usize) -> String {
        self.deg1[p].to_string()
    }

    pub fn label2(&self, t: usize) -> String {
        match self.deg2[t] {
            Deg2::Omega { vertex } => format!("omega({vertex})"),
            Deg2::Cross { left, right } => {
                format!("{}*{}", self.deg1[left], self.deg1[right])
            }
            Deg2::Tens { gen, i, j } => format!("{}*G({i},{j})", self.deg1[gen]),
            Deg2::Wedge { e1, e2 } => {
                format!("G({},{})*G({},{})", e1.0, e1.1, e2.0, e2.1)
            }
        }
    }

    /// Index of `x_i^s` (`s` 1-based) in the degree-one basis.
    pub fn x_index(&self, vertex: usize, s: usize) -> usize {
        vertex * 2 * self.genus + 2 * (s - 1)
    }

    pub fn y_index(&self, vertex: usize, s: usize) -> usize {
        self.x_index(vertex, s) + 1
    }

    pub fn g_index(&self, i: usize, j: usize) -> Option<usize> {
        self.graph
            .edge_index(i, j)
            .map(|e| 2 * self.genus * self.graph.n() + e)
    }

    /// Unit coordinate vector in `A¹`.
    pub fn unit1(&self, p: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim1()];
        v[p] = rat(1);
        v
    }
}

/// Quotient of a raw coordinate space by the row space of `relations`:
/// returns the kept (non-pivot) raw columns and the projection matrix
/// (kept-dim × raw-dim) sending a raw vector to quotient coordinates.
fn quotient_by_relations(raw_dim: usize, relations: &QMatrix) -> (Vec<usize>, QMatrix) {
    if relations.rows() == 0 {
        return ((0..raw_dim).collect(), QMatrix::identity(raw_dim));
    }
    let (r, pivots) = relations.rref();
    let kept: Vec<usize> = (0..raw_dim).filter(|c| !pivots.contains(c)).collect();
    let mut proj = QMatrix::zeros(kept.len(), raw_dim);
    for (t, &c) in kept.iter().enumerate() {
        proj[(t, c)] = rat(1);
    }
    for (ri, &p) in pivots.iter().enumerate() {
        // e_p ≡ −Σ_f R[ri,f]·e_f over the kept columns
        for (t, &f) in kept.iter().enumerate() {
            let v = -r[(ri, f)].clone();
            proj[(t, p)] = v;
        }
    }
    (kept, proj)
}

/// Builds `A^≤2(g, Γ)`. Any genus and simple graph is valid; degenerate
/// inputs (no edges, a single vertex) fall out of the same construction.
pub fn build_model(genus: usize, graph: &Graph) -> OSModel {
    let n = graph.n();
    let g = genus;
    let ecount = graph.edge_count();
    let dim1 = 2 * g * n + ecount;

    let mut deg1 = Vec::with_capacity(dim1);
    for vertex in 0..n {
        for s in 1..=g {
            deg1.push(Deg1::X { vertex, s });
            deg1.push(Deg1::Y { vertex, s });
        }
    }
    for &(i, j) in graph.edges() {
        deg1.push(Deg1::G { i, j });
    }
    let weights1: Vec<u32> = deg1
        .iter()
        .map(|b| if matches!(b, Deg1::G { .. }) { 2 } else { 1 })
        .collect();

    let x_idx = |vertex: usize, s: usize| vertex * 2 * g + 2 * (s - 1);
    let y_idx = |vertex: usize, s: usize| vertex * 2 * g + 2 * (s - 1) + 1;
    let g_idx = |e: usize| 2 * g * n + e;

    // ---- degree-two basis ----
    let mut deg2 = Vec::new();
    for vertex in 0..n {
        deg2.push(Deg2::Omega { vertex });
    }
    // cross classes u_i ⊗ v_j, pairs i < j, u-slot major then v-slot
    let mut cross_index = std::collections::HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for us in 0..2 * g {
                for vs in 0..2 * g {
                    let left = i * 2 * g + us;
                    let right = j * 2 * g + vs;
                    cross_index.insert((left, right), deg2.len());
                    deg2.push(Deg2::Cross { left, right });
                }
            }
        }
    }
    let dim_a2w2 = deg2.len();

    // weight 3: raw = vertex-class ⊗ edge, index gen * |E| + e
    let raw3 = 2 * g * n * ecount;
    let mut rel3_rows = Vec::new();
    for (e, &(i, j)) in graph.edges().iter().enumerate() {
        for s in 1..=g {
            for (pi, pj) in [(x_idx(i, s), x_idx(j, s)), (y_idx(i, s), y_idx(j, s))] {
                let mut row = vec![Rational::zero(); raw3];
                row[pi * ecount + e] = rat(1);
                row[pj * ecount + e] = rat(-1);
                rel3_rows.push(row);
            }
        }
    }
    let rel3 = if rel3_rows.is_empty() {
        QMatrix::zeros(0, raw3)
    } else {
        QMatrix::from_rows(rel3_rows)
    };
    let (kept3, a2w3_proj) = quotient_by_relations(raw3, &rel3);
    let w3_offset = deg2.len();
    for &c in &kept3 {
        let (gen, e) = (c / ecount, c % ecount);
        let (i, j) = graph.edges()[e];
        deg2.push(Deg2::Tens { gen, i, j });
    }
    let dim_a2w3 = kept3.len();

    // weight 4: raw = wedge pairs e < f of edges, lex order
    let raw4 = ecount * ecount.saturating_sub(1) / 2;
    let mut rel4_rows = Vec::new();
    for t in graph.triangles() {
        let [i, j, k] = t;
        let e1 = graph.edge_index(i, j).unwrap();
        let e2 = graph.edge_index(i, k).unwrap();
        let e3 = graph.edge_index(j, k).unwrap();
        // G_jk ∧ G_ik − G_ij ∧ G_ik + G_ij ∧ G_jk, in normalized pair coords
        let mut row = vec![Rational::zero(); raw4];
        row[pair_index(e2.min(e3), e2.max(e3), ecount)] += rat(if e3 < e2 { 1 } else { -1 });
        row[pair_index(e1, e2, ecount)] += rat(-1);
        row[pair_index(e1, e3, ecount)] += rat(1);
        rel4_rows.push(row);
    }
    let rel4 = if rel4_rows.is_empty() {
        QMatrix::zeros(0, raw4)
    } else {
        QMatrix::from_rows(rel4_rows)
    };
    let (kept4, a2w4_proj) = quotient_by_relations(raw4, &rel4);
    let w4_offset = deg2.len();
    for &c in &kept4 {
        // invert the triangular pair index
        let mut p = 0;
        let mut rem = c;
        while rem >= ecount - p - 1 {
            rem -= ecount - p - 1;
            p += 1;
        }
        let q = p + 1 + rem;
        deg2.push(Deg2::Wedge {
            e1: graph.edges()[p],
            e2: graph.edges()[q],
        });
    }
    let dim_a2w4 = kept4.len();

    let dim2 = deg2.len();
    let weights2: Vec<u32> = deg2
        .iter()
        .map(|b| match b {
            Deg2::Omega { .. } | Deg2::Cross { .. } => 2,
            Deg2::Tens { .. } => 3,
            Deg2::Wedge { .. } => 4,
        })
        .collect();

    let mut cdga = Cdga::new(dim1, dim2, weights1, weights2);

    // ---- differential ----
    // d vanishes on A¹₁; d(G_ij) = ω_i + ω_j + Σ_s (y_i^s⊗x_j^s − x_i^s⊗y_j^s)
    for (e, &(i, j)) in graph.edges().iter().enumerate() {
        let col = g_idx(e);
        cdga.d1[(i, col)] = rat(1);
        cdga.d1[(j, col)] = rat(1);
        for s in 1..=g {
            let yx = cross_index[&(y_idx(i, s), x_idx(j, s))];
            let xy = cross_index[&(x_idx(i, s), y_idx(j, s))];
            cdga.d1[(yx, col)] = rat(1);
            cdga.d1[(xy, col)] = rat(-1);
        }
    }

    // ---- product ----
    let proj_col = |proj: &QMatrix, offset: usize, raw: usize| -> SparseVec {
        (0..proj.rows())
            .filter(|&t| !proj[(t, raw)].is_zero())
            .map(|t| (offset + t, proj[(t, raw)].clone()))
            .collect()
    };
    for p in 0..dim1 {
        for q in p + 1..dim1 {
            let value: SparseVec = match (deg1[p], deg1[q]) {
                (Deg1::X { vertex: i, s }, Deg1::Y { vertex: j, s: t }) if i == j && s == t => {
                    vec![(i, rat(1))] // x_i^s · y_i^s = ω_i
                }
                (Deg1::X { .. } | Deg1::Y { .. }, Deg1::X { .. } | Deg1::Y { .. }) => {
                    let (vi, vj) = (p / (2 * g), q / (2 * g));
                    if vi == vj {
                        Vec::new() // same-vertex products other than x^s y^s vanish
                    } else {
                        vec![(cross_index[&(p, q)], rat(1))]
                    }
                }
                (Deg1::X { .. } | Deg1::Y { .. }, Deg1::G { .. }) => {
                    let e = q - 2 * g * n;
                    proj_col(&a2w3_proj, w3_offset, p * ecount + e)
                }
                (Deg1::G { .. }, Deg1::G { .. }) => {
                    let (e, f) = (p - 2 * g * n, q - 2 * g * n);
                    proj_col(&a2w4_proj, w4_offset, pair_index(e, f, ecount))
                }
                (Deg1::G { .. }, Deg1::X { .. } | Deg1::Y { .. }) => {
                    unreachable!("G generators come after vertex classes")
                }
            };
            cdga.set_mu(p, q, value);
        }
    }

    OSModel {
        genus,
        graph: graph.clone(),
        deg1,
        deg2,
        dim_a2w2,
        dim_a2w3,
        dim_a2w4,
        a2w3_proj,
        a2w4_proj,
        cdga,
    }
}

/// Basis of `H¹(A) = ker(d: A¹ → A²)` in `A¹` coordinates.
pub fn h1_basis(m: &OSModel) -> Subspace {
    m.cdga.h1_basis()
}

/// First Betti number of `F(g, Γ)`.
pub fn betti1(genus: usize, graph: &Graph) -> usize {
    build_model(genus, graph).cdga.betti1()
}

/// The three curve models that occur as targets of admissible maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    /// `Σ_g` for `g ≥ 2`: exterior data of a closed surface, `d = 0`.
    GenusTwoPlus(usize),
    /// Once-punctured elliptic curve: `dx = dy = 0`, `dg' = O`, `xy = O`.
    EllipticPunctured,
    /// `P¹` minus three points: `dG_p = ω̄`, all degree-one products zero.
    ProjLineThreePoints,
}

#[derive(Debug, Clone)]
pub struct CurveModel {
    pub kind: CurveKind,
    pub labels: Vec<String>,
    pub cdga: Cdga,
}

pub fn build_curve_model(kind: CurveKind) -> CurveModel {
    match kind {
        CurveKind::GenusTwoPlus(g) => {
            assert!(g >= 2, "curve target of general type needs genus >= 2");
            let mut labels = Vec::new();
            for s in 1..=g {
                labels.push(format!("x^{s}"));
                labels.push(format!("y^{s}"));
            }
            let mut cdga = Cdga::new(2 * g, 1, vec![1; 2 * g], vec![2]);
            for s in 0..g {
                cdga.set_mu(2 * s, 2 * s + 1, vec![(0, rat(1))]);
            }
            CurveModel { kind, labels, cdga }
        }
        CurveKind::EllipticPunctured => {
            let labels = vec!["x".into(), "y".into(), "g".into()];
            let mut cdga = Cdga::new(3, 1, vec![1, 1, 2], vec![2]);
            cdga.d1[(0, 2)] = rat(1); // dg' = O
            cdga.set_mu(0, 1, vec![(0, rat(1))]); // xy = O
            CurveModel { kind, labels, cdga }
        }
        CurveKind::ProjLineThreePoints => {
            let labels = vec!["G_0".into(), "G_1".into(), "G_inf".into()];
            let mut cdga = Cdga::new(3, 1, vec![2, 2, 2], vec![2]);
            for p in 0..3 {
                cdga.d1[(0, p)] = rat(1);
            }
            CurveModel { kind, labels, cdga }
        }
    }
}

/// Serializable dump of a model: labels per bigraded piece, sparse `d`, and
/// sparse `μ` quadruples, all deterministically ordered.
#[derive(Debug, Serialize)]
pub struct ModelDump {
    pub genus: usize,
    pub graph: Graph,
    pub deg1: Vec<String>,
    pub deg2_weight2: Vec<String>,
    pub deg2_weight3: Vec<String>,
    pub deg2_weight4: Vec<String>,
    /// Triplets `(target, source, coefficient)`.
    pub d1: Vec<(usize, usize, String)>,
    /// Quadruples `(p, q, target, coefficient)` with `p < q`.
    pub mu: Vec<(usize, usize, usize, String)>,
}

pub fn model_dump(m: &OSModel) -> ModelDump {
    let mut d1 = Vec::new();
    for t in 0..m.dim2() {
        for p in 0..m.dim1() {
            let c = &m.cdga.d1[(t, p)];
            if !c.is_zero() {
                d1.push((t, p, c.to_string()));
            }
        }
    }
    let mu = m
        .cdga
        .mu_entries()
        .into_iter()
        .map(|(p, q, t, c)| (p, q, t, c.to_string()))
        .collect();
    ModelDump {
        genus: m.genus,
        graph: m.graph.clone(),
        deg1: (0..m.dim1()).map(|p| m.label1(p)).collect(),
        deg2_weight2: (0..m.dim_a2w2).map(|t| m.label2(t)).collect(),
        deg2_weight3: (m.dim_a2w2..m.dim_a2w2 + m.dim_a2w3)
            .map(|t| m.label2(t))
            .collect(),
        deg2_weight4: (m.dim_a2w2 + m.dim_a2w3..m.dim2())
            .map(|t| m.label2(t))
            .collect(),
        d1,
        mu,
    }
}
