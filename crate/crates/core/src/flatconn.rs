//! Flat connections with values in sl₂ or sol₂: exact Maurer–Cartan
//! residuals, the rank-one locus and its θ-singular part Π, covariant
//! cohomology ranks, decomposition of flat connections through admissible
//! maps, and exhaustive grid enumeration.
//!
//! A connection is a coefficient matrix `c` of shape `dim A¹ × dim 𝔤`,
//! standing for `ω = Σ c[p,k] · e_p ⊗ g_k`. Flatness means
//! `dω + ½[ω,ω] = 0`, where the bracket term expands to
//! `Σ_{p<q,k,l} c[p,k] c[q,l] μ(e_p,e_q) ⊗ [g_k,g_l]`.

use crate::admissible::{enumerate_admissible, AdmissibleMap, MapLabel};
use crate::linalg::{rat, QMatrix, Rational};
use crate::model::{Cdga, CurveKind, OSModel};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlatError {
    #[error("coefficient shape ({rows}x{cols}) does not match dim A¹ = {dim1}, dim 𝔤 = {dimg}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        dim1: usize,
        dimg: usize,
    },
    #[error("connection is not flat")]
    NotFlat,
    #[error("grid enumeration of {total} candidates exceeds budget {budget}")]
    BudgetExceeded { total: u128, budget: u128 },
    #[error("matrices do not define a Lie algebra representation")]
    NotAHomomorphism,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LieAlgKind {
    Sl2,
    Sol2,
}

/// A matrix Lie algebra given by an explicit basis of 2×2 matrices, with
/// precomputed structure constants.
#[derive(Debug, Clone)]
pub struct MatrixLieAlgebra {
    pub kind: LieAlgKind,
    pub basis: Vec<QMatrix>,
    /// `[g_k, g_l]` in basis coordinates, for `k < l`.
    brackets: Vec<Vec<(usize, Rational)>>,
}

fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let ab = a.mul(b);
    let ba = b.mul(a);
    QMatrix::from_fn(ab.rows(), ab.cols(), |r, c| &ab[(r, c)] - &ba[(r, c)])
}

impl MatrixLieAlgebra {
    fn from_basis(kind: LieAlgKind, basis: Vec<QMatrix>) -> Self {
        let dim = basis.len();
        let mut alg = MatrixLieAlgebra {
            kind,
            basis,
            brackets: vec![Vec::new(); dim * dim.saturating_sub(1) / 2],
        };
        for k in 0..dim {
            for l in k + 1..dim {
                let com = commutator(&alg.basis[k], &alg.basis[l]);
                let coords = alg
                    .coords_of(&com)
                    .expect("basis must be closed under brackets");
                alg.brackets[pair_index(k, l, dim)] = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
            }
        }
        alg
    }

    /// Trace-zero 2×2 matrices with the standard basis `H, E, F`.
    pub fn sl2() -> Self {
        Self::from_basis(
            LieAlgKind::Sl2,
            vec![
                QMatrix::from_int_rows(&[&[1, 0], &[0, -1]]),
                QMatrix::from_int_rows(&[&[0, 1], &[0, 0]]),
                QMatrix::from_int_rows(&[&[0, 0], &[1, 0]]),
            ],
        )
    }

    /// Upper-triangular trace-zero 2×2 matrices, basis `H, E`.
    pub fn sol2() -> Self {
        Self::from_basis(
            LieAlgKind::Sol2,
            vec![
                QMatrix::from_int_rows(&[&[1, 0], &[0, -1]]),
                QMatrix::from_int_rows(&[&[0, 1], &[0, 0]]),
            ],
        )
    }

    pub fn of_kind(kind: LieAlgKind) -> Self {
        match kind {
            LieAlgKind::Sl2 => Self::sl2(),
            LieAlgKind::Sol2 => Self::sol2(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `[g_k, g_l]` in basis coordinates; antisymmetric, empty on `k = l`.
    pub fn bracket_pair(&self, k: usize, l: usize) -> Vec<(usize, Rational)> {
        if k == l {
            return Vec::new();
        }
        let (a, b, sign) = if k < l { (k, l, 1) } else { (l, k, -1) };
        let v = &self.brackets[pair_index(a, b, self.dim())];
        if sign == 1 {
            v.clone()
        } else {
            v.iter().map(|(i, c)| (*i, -c)).collect()
        }
    }

    /// Coordinates of a matrix in the basis span, or `None` if outside.
    pub fn coords_of(&self, m: &QMatrix) -> Option<Vec<Rational>> {
        let (r, c) = (self.basis[0].rows(), self.basis[0].cols());
        if m.rows() != r || m.cols() != c {
            return None;
        }
        // flatten basis matrices into columns and solve
        let flat = QMatrix::from_fn(r * c, self.dim(), |rc, k| {
            self.basis[k][(rc / c, rc % c)].clone()
        });
        let rhs = QMatrix::from_fn(r * c, 1, |rc, _| m[(rc / c, rc % c)].clone());
        let sol = flat.solve(&rhs)?;
        Some(sol.col(0))
    }

    pub fn from_coords(&self, coords: &[Rational]) -> QMatrix {
        assert_eq!(coords.len(), self.dim());
        let (r, c) = (self.basis[0].rows(), self.basis[0].cols());
        QMatrix::from_fn(r, c, |i, j| {
            coords
                .iter()
                .zip(&self.basis)
                .map(|(x, b)| x * &b[(i, j)])
                .sum()
        })
    }
}

fn pair_index(p: usize, q: usize, n: usize) -> usize {
    debug_assert!(p < q && q < n);
    p * n - p * (p + 1) / 2 + (q - p - 1)
}

/// A finite-dimensional representation `θ: 𝔤 → gl(V)`, checked to be a Lie
/// homomorphism at construction.
#[derive(Debug, Clone)]
pub struct Representation {
    pub algebra: MatrixLieAlgebra,
    pub dim_v: usize,
    pub theta: Vec<QMatrix>,
}

impl Representation {
    pub fn new(algebra: MatrixLieAlgebra, theta: Vec<QMatrix>) -> Result<Self, FlatError> {
        if theta.len() != algebra.dim() || theta.is_empty() {
            return Err(FlatError::NotAHomomorphism);
        }
        let dim_v = theta[0].rows();
        if theta.iter().any(|m| m.rows() != dim_v || m.cols() != dim_v) {
            return Err(FlatError::NotAHomomorphism);
        }
        for k in 0..algebra.dim() {
            for l in k + 1..algebra.dim() {
                let lhs: QMatrix = {
                    let mut acc = QMatrix::zeros(dim_v, dim_v);
                    for (i, c) in algebra.bracket_pair(k, l) {
                        for r in 0..dim_v {
                            for cc in 0..dim_v {
                                let v = &acc[(r, cc)] + &c * &theta[i][(r, cc)];
                                acc[(r, cc)] = v;
                            }
                        }
                    }
                    acc
                };
                if lhs != commutator(&theta[k], &theta[l]) {
                    return Err(FlatError::NotAHomomorphism);
                }
            }
        }
        Ok(Representation {
            algebra,
            dim_v,
            theta,
        })
    }

    /// The defining 2-dimensional representation (inclusion of the basis).
    pub fn standard(algebra: MatrixLieAlgebra) -> Self {
        let theta = algebra.basis.clone();
        Representation::new(algebra, theta).expect("inclusion is a homomorphism")
    }

    /// The adjoint representation on the algebra itself.
    pub fn adjoint(algebra: MatrixLieAlgebra) -> Self {
        let d = algebra.dim();
        let theta = (0..d)
            .map(|k| {
                QMatrix::from_fn(d, d, |r, c| {
                    algebra
                        .bracket_pair(k, c)
                        .into_iter()
                        .find(|(i, _)| *i == r)
                        .map(|(_, v)| v)
                        .unwrap_or_else(Rational::zero)
                })
            })
            .collect();
        Representation::new(algebra, theta).expect("adjoint is a homomorphism")
    }

    pub fn apply(&self, coords: &[Rational]) -> QMatrix {
        assert_eq!(coords.len(), self.algebra.dim());
        QMatrix::from_fn(self.dim_v, self.dim_v, |r, c| {
            coords
                .iter()
                .zip(&self.theta)
                .map(|(x, m)| x * &m[(r, c)])
                .sum()
        })
    }
}

fn check_shape(cdga: &Cdga, alg: &MatrixLieAlgebra, coeffs: &QMatrix) -> Result<(), FlatError> {
    if coeffs.rows() != cdga.dim1 || coeffs.cols() != alg.dim() {
        return Err(FlatError::ShapeMismatch {
            rows: coeffs.rows(),
            cols: coeffs.cols(),
            dim1: cdga.dim1,
            dimg: alg.dim(),
        });
    }
    Ok(())
}

/// The Maurer–Cartan residual `dω + ½[ω,ω]` as a vector over `A² ⊗ 𝔤`,
/// indexed `t·dim𝔤 + k`. The connection is flat iff this vanishes.
pub fn mc_residual(
    cdga: &Cdga,
    alg: &MatrixLieAlgebra,
    coeffs: &QMatrix,
) -> Result<Vec<Rational>, FlatError> {
    check_shape(cdga, alg, coeffs)?;
    let ad = alg.dim();
    let mut resid = vec![Rational::zero(); cdga.dim2 * ad];
    for p in 0..cdga.dim1 {
        for t in 0..cdga.dim2 {
            let d = &cdga.d1[(t, p)];
            if d.is_zero() {
                continue;
            }
            for k in 0..ad {
                let c = &coeffs[(p, k)];
                if !c.is_zero() {
                    resid[t * ad + k] += d * c;
                }
            }
        }
    }
    for p in 0..cdga.dim1 {
        for q in p + 1..cdga.dim1 {
            let mu = cdga.mu_pair(p, q);
            if mu.is_empty() {
                continue;
            }
            for k in 0..ad {
                for l in k + 1..ad {
                    // antisymmetrized coefficient of [g_k, g_l]
                    let f = &coeffs[(p, k)] * &coeffs[(q, l)]
                        - &coeffs[(p, l)] * &coeffs[(q, k)];
                    if f.is_zero() {
                        continue;
                    }
                    for (gi, bc) in alg.bracket_pair(k, l) {
                        for (t, mc) in &mu {
                            resid[t * ad + gi] += &f * &bc * mc;
                        }
                    }
                }
            }
        }
    }
    Ok(resid)
}

pub fn is_flat(cdga: &Cdga, alg: &MatrixLieAlgebra, coeffs: &QMatrix) -> Result<bool, FlatError> {
    Ok(mc_residual(cdga, alg, coeffs)?.iter().all(Zero::is_zero))
}

/// Is `ω = η ⊗ g` for a closed η? True for the zero connection.
pub fn is_rank_one(cdga: &Cdga, coeffs: &QMatrix) -> bool {
    if coeffs.rank() > 1 {
        return false;
    }
    match first_nonzero_column(coeffs) {
        None => true,
        Some(eta) => cdga.d_apply(&eta).iter().all(Zero::is_zero),
    }
}

fn first_nonzero_column(coeffs: &QMatrix) -> Option<Vec<Rational>> {
    (0..coeffs.cols())
        .map(|k| coeffs.col(k))
        .find(|col| col.iter().any(|c| !c.is_zero()))
}

/// Decomposes a rank-≤1 coefficient matrix as `η · gᵀ`.
fn rank_one_factors(coeffs: &QMatrix) -> Option<(Vec<Rational>, Vec<Rational>)> {
    if coeffs.rank() > 1 {
        return None;
    }
    let Some(eta) = first_nonzero_column(coeffs) else {
        return Some((
            vec![Rational::zero(); coeffs.rows()],
            vec![Rational::zero(); coeffs.cols()],
        ));
    };
    let p0 = eta.iter().position(|c| !c.is_zero()).unwrap();
    let inv = eta[p0].recip();
    let g: Vec<Rational> = (0..coeffs.cols()).map(|k| &coeffs[(p0, k)] * &inv).collect();
    Some((eta, g))
}

/// Membership in `Π(A, θ)`: rank-one, flat, and the Lie factor is singular
/// under θ. The zero connection belongs (its factor is 0).
pub fn pi_membership(
    cdga: &Cdga,
    rep: &Representation,
    coeffs: &QMatrix,
) -> Result<bool, FlatError> {
    check_shape(cdga, &rep.algebra, coeffs)?;
    if !is_rank_one(cdga, coeffs) {
        return Ok(false);
    }
    if !is_flat(cdga, &rep.algebra, coeffs)? {
        return Ok(false);
    }
    let (_, g) = rank_one_factors(coeffs).expect("rank checked above");
    let det = rep.apply(&g).det().expect("θ(g) is square");
    Ok(det.is_zero())
}

/// `dim H¹(A ⊗ V, d_ω)` for a flat ω: kernel of the covariant derivative on
/// `A¹ ⊗ V` minus the rank of its restriction to `A⁰ ⊗ V`.
pub fn covariant_h1(
    cdga: &Cdga,
    rep: &Representation,
    coeffs: &QMatrix,
) -> Result<usize, FlatError> {
    check_shape(cdga, &rep.algebra, coeffs)?;
    if !is_flat(cdga, &rep.algebra, coeffs)? {
        return Err(FlatError::NotFlat);
    }
    let dv = rep.dim_v;
    let ad = rep.algebra.dim();
    // d¹_ω(η ⊗ v) = dη ⊗ v + Σ_{p,k} c[p,k] μ(e_p, η) ⊗ θ_k v
    let mut d1 = QMatrix::zeros(cdga.dim2 * dv, cdga.dim1 * dv);
    for t in 0..cdga.dim2 {
        for q in 0..cdga.dim1 {
            let d = &cdga.d1[(t, q)];
            if d.is_zero() {
                continue;
            }
            for r in 0..dv {
                d1[(t * dv + r, q * dv + r)] = d.clone();
            }
        }
    }
    for p in 0..cdga.dim1 {
        for k in 0..ad {
            let c = &coeffs[(p, k)];
            if c.is_zero() {
                continue;
            }
            for q in 0..cdga.dim1 {
                for (t, mc) in cdga.mu_pair(p, q) {
                    let scale = c * &mc;
                    for r in 0..dv {
                        for cc in 0..dv {
                            let th = &rep.theta[k][(r, cc)];
                            if th.is_zero() {
                                continue;
                            }
                            let v = &d1[(t * dv + r, q * dv + cc)] + &scale * th;
                            d1[(t * dv + r, q * dv + cc)] = v;
                        }
                    }
                }
            }
        }
    }
    // d⁰_ω(v) = Σ_{p,k} c[p,k] e_p ⊗ θ_k v
    let mut d0 = QMatrix::zeros(cdga.dim1 * dv, dv);
    for p in 0..cdga.dim1 {
        for k in 0..ad {
            let c = &coeffs[(p, k)];
            if c.is_zero() {
                continue;
            }
            for r in 0..dv {
                for cc in 0..dv {
                    let v = &d0[(p * dv + r, cc)] + c * &rep.theta[k][(r, cc)];
                    d0[(p * dv + r, cc)] = v;
                }
            }
        }
    }
    Ok(d1.kernel_basis().dim() - d0.rank())
}

/// Verdict of `decompose_flat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatDecomposition {
    NotFlat,
    RankOne,
    ViaMap {
        label: MapLabel,
        source: QMatrix,
    },
    /// A flat connection that is neither rank-one nor a pullback: a
    /// falsification witness, kept as data rather than an error.
    Failure,
}

/// Solves `pullback_deg1 · S = coeffs` for a flat source in the target
/// model, if one exists.
pub fn pullback_source(
    f: &AdmissibleMap,
    alg: &MatrixLieAlgebra,
    coeffs: &QMatrix,
) -> Option<QMatrix> {
    let source = match f.target.kind {
        CurveKind::ProjLineThreePoints => {
            // the third generator pulls back to zero, so solve on the first
            // two columns and complete the free row with the flatness
            // condition Σ_p rows = 0
            let p2 = QMatrix::from_fn(f.pullback_deg1.rows(), 2, |r, c| {
                f.pullback_deg1[(r, c)].clone()
            });
            let s2 = p2.solve(coeffs)?;
            let mut s = QMatrix::zeros(3, coeffs.cols());
            for k in 0..coeffs.cols() {
                s[(0, k)] = s2[(0, k)].clone();
                s[(1, k)] = s2[(1, k)].clone();
                s[(2, k)] = -(&s2[(0, k)] + &s2[(1, k)]);
            }
            s
        }
        _ => f.pullback_deg1.solve(coeffs)?,
    };
    if f.pullback_deg1.mul(&source) != *coeffs {
        return None;
    }
    let flat = is_flat(&f.target.cdga, alg, &source).ok()?;
    flat.then_some(source)
}

/// First admissible map (in enumeration order) through which the connection
/// pulls back flatly.
pub fn in_pullback_union(
    maps: &[AdmissibleMap],
    alg: &MatrixLieAlgebra,
    coeffs: &QMatrix,
) -> Option<(MapLabel, QMatrix)> {
    maps.iter()
        .find_map(|f| pullback_source(f, alg, coeffs).map(|s| (f.label, s)))
}

/// Classifies a coefficient matrix: not flat, rank-one, pulled back through
/// an admissible map, or a decomposition failure.
pub fn decompose_flat(
    m: &OSModel,
    alg: &MatrixLieAlgebra,
    coeffs: &QMatrix,
) -> FlatDecomposition {
    decompose_flat_with(&enumerate_admissible(m), m, alg, coeffs)
}

pub fn decompose_flat_with(
    maps: &[AdmissibleMap],
    m: &OSModel,
    alg: &MatrixLieAlgebra,
    coeffs: &QMatrix,
) -> FlatDecomposition {
    match is_flat(&m.cdga, alg, coeffs) {
        Ok(true) => {}
        _ => return FlatDecomposition::NotFlat,
    }
    if is_rank_one(&m.cdga, coeffs) {
        return FlatDecomposition::RankOne;
    }
    match in_pullback_union(maps, alg, coeffs) {
        Some((label, source)) => FlatDecomposition::ViaMap { label, source },
        None => FlatDecomposition::Failure,
    }
}

/// Integer view of the structure constants, for the fast exhaustive scan.
struct IntTables {
    dim2: usize,
    ad: usize,
    d_entries: Vec<(usize, usize, i64)>,
    mu_terms: Vec<(usize, usize, Vec<(usize, i64)>)>,
    brackets: Vec<(usize, usize, Vec<(usize, i64)>)>,
}

fn to_i64(r: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if !r.denom().eq(&1.into()) {
        return None;
    }
    r.numer().to_i64()
}

fn int_tables(cdga: &Cdga, alg: &MatrixLieAlgebra) -> Option<IntTables> {
    let ad = alg.dim();
    let mut d_entries = Vec::new();
    for t in 0..cdga.dim2 {
        for p in 0..cdga.dim1 {
            let c = &cdga.d1[(t, p)];
            if !c.is_zero() {
                d_entries.push((t, p, to_i64(c)?));
            }
        }
    }
    let mut mu_terms = Vec::new();
    for p in 0..cdga.dim1 {
        for q in p + 1..cdga.dim1 {
            let mu = cdga.mu_pair(p, q);
            if mu.is_empty() {
                continue;
            }
            let terms: Option<Vec<(usize, i64)>> =
                mu.iter().map(|(t, c)| Some((*t, to_i64(c)?))).collect();
            mu_terms.push((p, q, terms?));
        }
    }
    let mut brackets = Vec::new();
    for k in 0..ad {
        for l in k + 1..ad {
            let br = alg.bracket_pair(k, l);
            if br.is_empty() {
                continue;
            }
            let terms: Option<Vec<(usize, i64)>> =
                br.iter().map(|(i, c)| Some((*i, to_i64(c)?))).collect();
            brackets.push((k, l, terms?));
        }
    }
    Some(IntTables {
        dim2: cdga.dim2,
        ad,
        d_entries,
        mu_terms,
        brackets,
    })
}

impl IntTables {
    fn residual_is_zero(&self, coef: &[i64], resid: &mut [i64]) -> bool {
        resid.fill(0);
        let ad = self.ad;
        for &(t, p, c) in &self.d_entries {
            for k in 0..ad {
                let x = coef[p * ad + k];
                if x != 0 {
                    resid[t * ad + k] += c * x;
                }
            }
        }
        for (p, q, mus) in &self.mu_terms {
            for (k, l, brs) in &self.brackets {
                let f = coef[p * ad + k] * coef[q * ad + l]
                    - coef[p * ad + l] * coef[q * ad + k];
                if f == 0 {
                    continue;
                }
                for &(gi, bc) in brs {
                    for &(t, mc) in mus {
                        resid[t * ad + gi] += f * bc * mc;
                    }
                }
            }
        }
        resid.iter().all(|&x| x == 0)
    }
}

/// Exhaustively enumerates all coefficient matrices over the grid and keeps
/// the flat ones, in lexicographic order of the coefficient vector (row-major
/// over `(p, k)`, digits ordered as in `grid`).
pub fn grid_enumerate_flat(
    cdga: &Cdga,
    alg: &MatrixLieAlgebra,
    grid: &[Rational],
    budget: u128,
) -> Result<Vec<QMatrix>, FlatError> {
    let dims = cdga.dim1 * alg.dim();
    let glen = grid.len() as u128;
    let total = glen.checked_pow(dims as u32).ok_or(FlatError::BudgetExceeded {
        total: u128::MAX,
        budget,
    })?;
    if total > budget {
        return Err(FlatError::BudgetExceeded { total, budget });
    }
    if dims == 0 {
        let zero = QMatrix::zeros(cdga.dim1, alg.dim());
        return Ok(if is_flat(cdga, alg, &zero)? { vec![zero] } else { vec![] });
    }

    let igrid: Option<Vec<i64>> = grid.iter().map(to_i64).collect();
    let tables = int_tables(cdga, alg);
    let total = total as u64;
    let ad = alg.dim();

    let decode_to_matrix = |idx: u64| -> QMatrix {
        let mut digits = vec![0usize; dims];
        let mut rem = idx;
        for slot in (0..dims).rev() {
            digits[slot] = (rem % grid.len() as u64) as usize;
            rem /= grid.len() as u64;
        }
        QMatrix::from_fn(cdga.dim1, ad, |p, k| grid[digits[p * ad + k]].clone())
    };

    if let (Some(igrid), Some(tables)) = (igrid, tables) {
        // fast path: everything integral, scan in i64 with rayon
        let nblocks = 256u64.min(total);
        let block = total.div_ceil(nblocks);
        let hits: Vec<Vec<u64>> = (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let start = b * block;
                let end = ((b + 1) * block).min(total);
                let mut found = Vec::new();
                let mut coef = vec![0i64; dims];
                let mut resid = vec![0i64; tables.dim2 * tables.ad];
                let mut digits = vec![0usize; dims];
                for idx in start..end {
                    let mut rem = idx;
                    for slot in (0..dims).rev() {
                        digits[slot] = (rem % igrid.len() as u64) as usize;
                        rem /= igrid.len() as u64;
                    }
                    for (c, &d) in coef.iter_mut().zip(&digits) {
                        *c = igrid[d];
                    }
                    if tables.residual_is_zero(&coef, &mut resid) {
                        found.push(idx);
                    }
                }
                found
            })
            .collect();
        return Ok(hits
            .into_iter()
            .flatten()
            .map(decode_to_matrix)
            .collect());
    }

    // general path for non-integer grids; only sensible for small spaces
    let mut out = Vec::new();
    for idx in 0..total {
        let m = decode_to_matrix(idx);
        if is_flat(cdga, alg, &m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// Grid values `{-1, 0, 1}`.
pub fn default_grid() -> Vec<Rational> {
    vec![rat(-1), rat(0), rat(1)]
}

pub const DEFAULT_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct M3Mismatch {
    pub coeffs: Vec<Vec<String>>,
    pub covariant_resonant: bool,
    pub in_pi_or_pullback: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct M3Report {
    pub checked: usize,
    pub mismatches: Vec<M3Mismatch>,
}

impl M3Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For each flat connection, compares covariant-derivative resonance
/// (`dim H¹(A ⊗ V, d_ω) ≥ 1`) against membership in `Π ∪ ⋃_f f*F(B_f)`.
/// The pullback union is tested directly, whether or not the connection is
/// rank-one. Requires `H¹(A) ≠ 0`.
pub fn verify_m3res(
    m: &OSModel,
    maps: &[AdmissibleMap],
    rep: &Representation,
    flats: &[QMatrix],
) -> Result<M3Report, FlatError> {
    if m.cdga.betti1() == 0 {
        return Err(FlatError::Precondition(
            "H¹(A) = 0: resonance comparison needs a nonzero H¹".into(),
        ));
    }
    let mut mismatches = Vec::new();
    for coeffs in flats {
        let lhs = covariant_h1(&m.cdga, rep, coeffs)? >= 1;
        let rhs = pi_membership(&m.cdga, rep, coeffs)?
            || in_pullback_union(maps, &rep.algebra, coeffs).is_some();
        if lhs != rhs {
            mismatches.push(M3Mismatch {
                coeffs: (0..coeffs.rows())
                    .map(|r| coeffs.row(r).iter().map(|c| c.to_string()).collect())
                    .collect(),
                covariant_resonant: lhs,
                in_pi_or_pullback: rhs,
            });
        }
    }
    Ok(M3Report {
        checked: flats.len(),
        mismatches,
    })
}
