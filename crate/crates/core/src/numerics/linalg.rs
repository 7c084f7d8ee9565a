//! Small dense matrices, Cholesky factorization and Mahalanobis distances.
//!
//! Dimensions in this crate stay small (p ≤ a few dozen), so a plain
//! row-major `Vec<f64>` matrix is all we need.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from a flat row-major vector. Length must equal rows*cols.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Largest absolute entry-wise difference against another matrix.
    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Symmetry defect: max |A_ij − A_ji|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Rank-one update: A += w * v vᵀ.
    pub fn add_scaled_outer(&mut self, v: &[f64], w: f64) {
        debug_assert_eq!(v.len(), self.rows);
        debug_assert_eq!(v.len(), self.cols);
        for i in 0..self.rows {
            let wi = w * v[i];
            for j in 0..self.cols {
                self.data[i * self.cols + j] += wi * v[j];
            }
        }
    }

    /// Determinant via LU with partial pivoting. Works for any square matrix;
    /// used as the PSD fallback when Cholesky fails.
    pub fn det_lu(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot * n + c);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in (col + 1)..n {
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Pivots at or below this are treated as loss of positive definiteness.
pub const SPD_PIVOT_FLOOR: f64 = 1e-12;

/// Cholesky factor of a symmetric positive definite matrix, with its
/// log-determinant.
#[derive(Clone, Debug)]
pub struct SpdFactor {
    lower: Mat,
    log_det: f64,
}

impl SpdFactor {
    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &Mat {
        &self.lower
    }

    /// log |Σ| = 2 Σ_j ln L_jj.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// Solves L y = b by forward substitution.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        debug_assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lower[(i, j)] * y[j];
            }
            y[i] = s / self.lower[(i, i)];
        }
        y
    }

    /// L Lᵀ, the matrix that was factorized (up to rounding).
    pub fn reconstruct(&self) -> Mat {
        let n = self.dim();
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..=i.min(j) {
                    s += self.lower[(i, k)] * self.lower[(j, k)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    /// Applies the factor to a vector: L v (used for sampling x = μ + L z).
    pub fn apply_lower(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        debug_assert_eq!(v.len(), n);
        (0..n)
            .map(|i| (0..=i).map(|j| self.lower[(i, j)] * v[j]).sum())
            .collect()
    }
}

/// Cholesky factorization of a symmetric positive definite matrix.
///
/// The input must be symmetric to within 1e-8; it is symmetrized before
/// factorization so the factor is exact for (S + Sᵀ)/2. A pivot at or below
/// [`SPD_PIVOT_FLOOR`] reports `NotPositiveDefinite` with the failing index.
pub fn factorize_spd(s: &Mat) -> Result<SpdFactor> {
    if !s.is_square() {
        return Err(Error::Dimension {
            expected: s.rows(),
            found: s.cols(),
        });
    }
    if !s.all_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if s.asymmetry() > 1e-8 {
        return Err(Error::domain(format!(
            "matrix is not symmetric (defect {:.3e})",
            s.asymmetry()
        )));
    }
    let n = s.rows();
    let mut lower = Mat::zeros(n, n);
    let mut log_det = 0.0;
    for j in 0..n {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= lower[(j, k)] * lower[(j, k)];
        }
        if d <= SPD_PIVOT_FLOOR {
            return Err(Error::NotPositiveDefinite { pivot_index: j });
        }
        let l_jj = d.sqrt();
        lower[(j, j)] = l_jj;
        log_det += 2.0 * l_jj.ln();
        for i in (j + 1)..n {
            let mut v = 0.5 * (s[(i, j)] + s[(j, i)]);
            for k in 0..j {
                v -= lower[(i, k)] * lower[(j, k)];
            }
            lower[(i, j)] = v / l_jj;
        }
    }
    Ok(SpdFactor { lower, log_det })
}

/// Squared Mahalanobis distance (x − μ)ᵀ Σ⁻¹ (x − μ) through one triangular
/// solve against the Cholesky factor of Σ.
pub fn mahalanobis_sq(x: &[f64], mu: &[f64], factor: &SpdFactor) -> Result<f64> {
    if x.len() != factor.dim() {
        return Err(Error::Dimension {
            expected: factor.dim(),
            found: x.len(),
        });
    }
    if mu.len() != factor.dim() {
        return Err(Error::Dimension {
            expected: factor.dim(),
            found: mu.len(),
        });
    }
    let diff: Vec<f64> = x.iter().zip(mu).map(|(a, b)| a - b).collect();
    let y = factor.solve_lower(&diff);
    Ok(y.iter().map(|v| v * v).sum())
}
