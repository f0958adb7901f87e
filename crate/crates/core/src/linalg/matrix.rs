use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Dense `n × d` measurement matrix with cached column norms.
///
/// Entries are stored column-major so that column slices are contiguous;
/// constructors accept either layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    column_norms: Vec<f64>,
}

impl DesignMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        check_shape(rows, cols, entries.len())?;
        let mut data = alloc::vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                data[c * rows + r] = entries[r * cols + c];
            }
        }
        Self::from_col_major(rows, cols, data)
    }

    /// Builds a matrix from column-major entries.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols, data.len())?;
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("design matrix"));
        }
        let column_norms = data.chunks_exact(rows).map(math::norm2).collect();
        Ok(Self {
            rows,
            cols,
            data,
            column_norms,
        })
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(n * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: d,
                    found: rows[i].len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_major(n, d, &flat)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = alloc::vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::from_col_major(n, n, data).expect("identity is well formed")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn column(&self, c: usize) -> &[f64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[c * self.rows + r]
    }

    #[inline]
    pub fn column_norm(&self, c: usize) -> f64 {
        self.column_norms[c]
    }

    pub fn column_norms(&self) -> &[f64] {
        &self.column_norms
    }

    /// Column-major entry slice.
    pub fn as_col_major(&self) -> &[f64] {
        &self.data
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.rows * self.cols];
        for c in 0..self.cols {
            for r in 0..self.rows {
                out[r * self.cols + c] = self.get(r, c);
            }
        }
        out
    }

    /// Rescales every nonzero column to unit ℓ2 norm.
    pub fn normalize_columns(&mut self) {
        let rows = self.rows;
        for (col, norm) in self.data.chunks_exact_mut(rows).zip(&mut self.column_norms) {
            if *norm > 0.0 {
                let inv = 1.0 / *norm;
                col.iter_mut().for_each(|v| *v *= inv);
                *norm = math::norm2(col);
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize_columns();
        self
    }

    /// `Φ x` for a full-length coefficient vector.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_cols(x.len(), "coefficient vector")?;
        let mut out = alloc::vec![0.0; self.rows];
        for (c, &xc) in x.iter().enumerate() {
            if xc != 0.0 {
                axpy(xc, self.column(c), &mut out);
            }
        }
        Ok(out)
    }

    /// `Φᵀ r`.
    pub fn t_matvec(&self, r: &[f64]) -> Result<Vec<f64>> {
        self.check_rows(r.len(), "measurement vector")?;
        Ok(self.data.chunks_exact(self.rows).map(|col| math::dot(col, r)).collect())
    }

    /// `Φ_s z` for coefficients aligned with `support`.
    pub(crate) fn support_matvec(&self, support: &[usize], z: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.rows];
        for (&c, &zc) in support.iter().zip(z) {
            axpy(zc, self.column(c), &mut out);
        }
        out
    }

    /// Selects rows, keeping all columns.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for c in 0..self.cols {
            let col = self.column(c);
            for &r in rows {
                if r >= self.rows {
                    return Err(Error::IndexOutOfRange {
                        index: r,
                        cols: self.rows,
                    });
                }
                data.push(col[r]);
            }
        }
        Self::from_col_major(rows.len(), self.cols, data)
    }

    pub(crate) fn check_rows(&self, len: usize, what: &'static str) -> Result<()> {
        if len != self.rows {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.rows,
                found: len,
            });
        }
        Ok(())
    }

    pub(crate) fn check_cols(&self, len: usize, what: &'static str) -> Result<()> {
        if len != self.cols {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.cols,
                found: len,
            });
        }
        Ok(())
    }
}

fn check_shape(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(alloc::format!(
            "matrix must be at least 1x1, got {rows}x{cols}"
        )));
    }
    if len != rows * cols {
        return Err(Error::DimensionMismatch {
            what: "matrix entries",
            expected: rows * cols,
            found: len,
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
