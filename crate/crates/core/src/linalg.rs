//! Exact rational linear algebra: dense matrices over ℚ, reduced row echelon
//! form, kernels, and subspaces given by row bases.
//!
//! Matrices here are small (a few hundred rows/columns at most), so a dense
//! representation with arbitrary-precision rationals is the right trade-off.
//! Pivoting is leftmost-nonzero, which makes every reduction deterministic.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (maintained by `num_rational`).
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer as a `Rational`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense matrix over ℚ, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from integer literals, handy in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        QMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        QMatrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols)
                .map(|k| &self[(r, k)] * &other[(k, c)])
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        QMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    /// Reduced row echelon form together with the pivot column indices.
    /// Row space is preserved; pivots are found leftmost-first.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&rr| !m[(rr, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].recip();
            for cc in c..m.cols {
                let v = &m[(r, cc)] * &inv;
                m[(r, cc)] = v;
            }
            for rr in 0..m.rows {
                if rr == r || m[(rr, c)].is_zero() {
                    continue;
                }
                let f = m[(rr, c)].clone();
                for cc in c..m.cols {
                    let v = &m[(rr, cc)] - &f * &m[(r, cc)];
                    m[(rr, cc)] = v;
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{ v : m·v = 0 }`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = -r[(ri, f)].clone();
            }
            basis.push(v);
        }
        Subspace::from_spanning_rows(self.cols, basis)
    }

    /// Solve `self · X = rhs` exactly. Returns the particular solution with
    /// all free variables set to zero, or `None` when inconsistent.
    pub fn solve(&self, rhs: &QMatrix) -> Option<QMatrix> {
        assert_eq!(self.rows, rhs.rows, "rhs row count mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        // with free variables at zero, each pivot row reads off its solution entry
        let mut x = QMatrix::zeros(self.cols, rhs.cols);
        for (ri, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = r[(ri, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Determinant by Gaussian elimination. Only used on small matrices.
    pub fn det(&self) -> Result<Rational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&rr| !m[(rr, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for rr in c + 1..n {
                if m[(rr, c)].is_zero() {
                    continue;
                }
                let f = &m[(rr, c)] * &inv;
                for cc in c..n {
                    let v = &m[(rr, cc)] - &f * &m[(c, cc)];
                    m[(rr, cc)] = v;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

impl std::fmt::Display for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Linear subspace of ℚ^n, stored as an RREF'd row basis. Two subspaces are
/// equal iff they have identical bases, which the RREF makes canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: QMatrix,
}

impl Subspace {
    /// Builds a subspace from spanning rows; dependent and zero rows are
    /// discarded by row reduction.
    pub fn from_spanning_rows(ambient: usize, rows: Vec<Vec<Rational>>) -> Self {
        for row in &rows {
            assert_eq!(row.len(), ambient, "spanning row has wrong length");
        }
        if rows.is_empty() {
            return Subspace {
                ambient,
                basis: QMatrix::zeros(0, ambient),
            };
        }
        let (r, pivots) = QMatrix::from_rows(rows).rref();
        let basis = QMatrix::from_fn(pivots.len(), ambient, |i, j| r[(i, j)].clone());
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: QMatrix::zeros(0, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    /// Exact membership test: is `v` a rational combination of basis rows?
    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        let mut v = v.to_vec();
        for i in 0..self.basis.rows() {
            // leading entry of each RREF'd basis row is its pivot
            let pivot = self.basis.row(i).iter().position(|x| !x.is_zero()).unwrap();
            if !v[pivot].is_zero() {
                let f = v[pivot].clone();
                for c in pivot..self.ambient {
                    let x = &v[c] - &f * &self.basis[(i, c)];
                    v[c] = x;
                }
            }
        }
        Ok(v.iter().all(Zero::is_zero))
    }
}

/// Sum of absolute values; a cheap "size" used when tests want a canonical
/// smallest witness.
pub fn l1_norm(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).sum()
}
