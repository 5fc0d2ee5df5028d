//! Tridiagonal and small dense matrices over a coefficient ring.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Ring;
use crate::rational::{self, Rational};

/// Tridiagonal matrix: `diag[j] = M[j][j]`, `upper[j] = M[j][j+1]`,
/// `lower[j] = M[j+1][j]` (zero-based).
#[derive(Debug, Clone, PartialEq)]
pub struct TriMatrix<R> {
    pub diag: Vec<R>,
    pub upper: Vec<R>,
    pub lower: Vec<R>,
}

impl<R: Ring> TriMatrix<R> {
    pub fn new(diag: Vec<R>, upper: Vec<R>, lower: Vec<R>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || upper.len() + 1 != n || lower.len() + 1 != n {
            return Err(Error::Constraint(format!(
                "tridiagonal shape mismatch: diag {}, upper {}, lower {}",
                n,
                upper.len(),
                lower.len()
            )));
        }
        Ok(TriMatrix { diag, upper, lower })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        if i == j {
            self.diag[i].clone()
        } else if j == i + 1 {
            self.upper[i].clone()
        } else if i == j + 1 {
            self.lower[j].clone()
        } else {
            R::zero()
        }
    }

    pub fn transpose(&self) -> Self {
        TriMatrix { diag: self.diag.clone(), upper: self.lower.clone(), lower: self.upper.clone() }
    }

    pub fn map<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> TriMatrix<S> {
        TriMatrix {
            diag: self.diag.iter().map(&mut f).collect(),
            upper: self.upper.iter().map(&mut f).collect(),
            lower: self.lower.iter().map(&mut f).collect(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<R> {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    pub fn trace(&self) -> R {
        self.diag.iter().cloned().fold(R::zero(), |a, b| a + b)
    }
}

impl TriMatrix<Rational> {
    pub fn to_f64(&self) -> TriMatrix<f64> {
        self.map(rational::to_f64)
    }

    pub fn to_json(&self) -> TriMatrixJson {
        let s = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect();
        TriMatrixJson { n: self.dim(), diag: s(&self.diag), upper: s(&self.upper), lower: s(&self.lower) }
    }
}

impl TriMatrix<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }

    pub fn is_finite(&self) -> bool {
        self.diag.iter().chain(&self.upper).chain(&self.lower).all(|x| x.is_finite())
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                (i.saturating_sub(1)..(i + 2).min(self.dim()))
                    .map(|j| self.get(i, j).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriMatrixJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub diag: Vec<String>,
    pub upper: Vec<String>,
    pub lower: Vec<String>,
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> DenseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Constraint("ragged matrix rows".into()));
        }
        Ok(DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
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

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> DenseMatrix<S> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl DenseMatrix<Rational> {
    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| rational::to_f64(self.get(i, j)))
    }
}

/// Dense float matrix as CSV rows (no header).
pub fn dense_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:.17e}", m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn shape_is_checked() {
        assert!(TriMatrix::new(vec![int(1), int(2)], vec![int(3)], vec![]).is_err());
        assert!(TriMatrix::<Rational>::new(vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn dense_embedding() {
        let m = TriMatrix::new(vec![int(1), int(2), int(3)], vec![int(4), int(5)], vec![int(6), int(7)]).unwrap();
        let d = m.to_dense();
        assert_eq!(d.get(0, 1), &int(4));
        assert_eq!(d.get(2, 1), &int(7));
        assert_eq!(d.get(0, 2), &int(0));
        assert_eq!(m.transpose().to_dense().get(0, 1), &int(6));
        assert_eq!(m.trace(), int(6));
    }
}
