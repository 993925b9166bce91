use crate::error::{Error, Result};

/// Dense real matrix, column-major storage.
///
/// Column-major is the natural layout here: data matrices hold one
/// observation per column and almost every kernel walks columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from a column-major value vector.
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} values for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Build from row slices (convenient in tests and small fixtures).
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row in from_rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
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
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[c * self.rows + r]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[c * self.rows + r] = v;
    }

    #[inline]
    pub fn col(&self, c: usize) -> &[f64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn row(&self, r: usize) -> Vec<f64> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            for r in 0..self.rows {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `self * other`, fixed summation order so results are bit-reproducible.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let bj = other.col(j);
            let oj = out.col_mut(j);
            for (k, &b) in bj.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let ak = self.col(k);
                for (o, &a) in oj.iter_mut().zip(ak.iter()) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `selfᵀ * other` without materializing the transpose.
    pub fn tr_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "tr_mul shape mismatch");
        let mut out = Matrix::zeros(self.cols, other.cols);
        for j in 0..other.cols {
            let bj = other.col(j);
            for i in 0..self.cols {
                out.set(i, j, dot(self.col(i), bj));
            }
        }
        out
    }

    /// Gram matrix `selfᵀ * self` (symmetric by construction).
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            let ci = self.col(i);
            for j in i..n {
                let v = dot(ci, self.col(j));
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let data = self.data.iter().map(|v| v * s).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Mean of the columns (a length-`rows` vector).
    pub fn col_mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.rows];
        for c in 0..self.cols {
            for (m, &v) in mean.iter_mut().zip(self.col(c)) {
                *m += v;
            }
        }
        let inv = 1.0 / self.cols as f64;
        for m in &mut mean {
            *m *= inv;
        }
        mean
    }

    /// Subtract `shift` from every column.
    pub fn shift_columns(&self, shift: &[f64]) -> Matrix {
        assert_eq!(shift.len(), self.rows);
        let mut out = self.clone();
        for c in 0..self.cols {
            for (v, &s) in out.col_mut(c).iter_mut().zip(shift) {
                *v -= s;
            }
        }
        out
    }

    /// Keep only the first `k` columns.
    pub fn take_cols(&self, k: usize) -> Matrix {
        assert!(k <= self.cols);
        Matrix {
            rows: self.rows,
            cols: k,
            data: self.data[..k * self.rows].to_vec(),
        }
    }

    /// Multiply row `r` by `s` in place.
    pub fn scale_row(&mut self, r: usize, s: f64) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, v * s);
        }
    }

    /// Multiply column `c` by `s` in place.
    pub fn scale_col(&mut self, c: usize, s: f64) {
        for v in self.col_mut(c) {
            *v *= s;
        }
    }

    /// Largest absolute off-symmetry |a_ij - a_ji|.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}
