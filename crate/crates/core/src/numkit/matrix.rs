//! Dense square matrices and determinants.

use super::Real;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Real>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Real) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Real>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for small integer fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Real::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Real::one() } else { Real::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Real {
        &self.data[i * self.cols + j]
    }

    /// Largest absolute entry (zero for an empty matrix).
    pub fn max_abs(&self) -> Real {
        self.data
            .iter()
            .map(Real::abs)
            .fold(Real::zero(), Real::max)
    }

    /// Copy with the listed (0-based) rows and columns removed.
    pub fn without(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix> {
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::Dimension(format!("row {r} out of range for {} rows", self.rows)));
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Dimension(format!("column {c} out of range for {} columns", self.cols)));
        }
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !cols.contains(j)).collect();
        Ok(Matrix::from_fn(keep_r.len(), keep_c.len(), |i, j| {
            self.get(keep_r[i], keep_c[j]).clone()
        }))
    }
}

fn require_square(m: &Matrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a square matrix, got {}x{}", m.rows, m.cols)))
    }
}

/// Determinant by Gaussian elimination with partial pivoting. The empty
/// matrix has determinant 1.
pub fn det_dense(m: &Matrix) -> Result<Real> {
    require_square(m)?;
    let n = m.rows;
    let mut a: Vec<Vec<Real>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut det = Real::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .expect("non-empty pivot range");
        if a[pivot][col].is_zero() {
            return Ok(Real::zero());
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let (upper, lower) = a.split_at_mut(col + 1);
        let prow = &upper[col];
        let p = &prow[col];
        det *= p;
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / p;
            for j in col + 1..n {
                let delta = &factor * &prow[j];
                row[j] -= delta;
            }
        }
    }
    Ok(det)
}

/// Laplace expansion along the first row. Exponential cost; kept as an
/// independent check on [`det_dense`].
pub fn det_cofactor(m: &Matrix) -> Result<Real> {
    require_square(m)?;
    let n = m.rows;
    if n == 0 {
        return Ok(Real::one());
    }
    if n == 1 {
        return Ok(m.get(0, 0).clone());
    }
    let mut total = Real::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let term = m.get(0, j) * det_cofactor(&m.without(&[0], &[j])?)?;
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Determinant of `m` with the given 0-based rows and columns deleted.
/// Deleting every row and column yields 1.
pub fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Real> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "deleting {} rows but {} columns",
            rows.len(),
            cols.len()
        )));
    }
    require_square(m)?;
    det_dense(&m.without(rows, cols)?)
}
