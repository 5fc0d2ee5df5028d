//! Floating-point spectra, parameter sweeps and complexification events.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::TriMatrix;
use crate::path::{Grid, PathSpec};

/// Relative tolerance on the imaginary part for an eigenvalue to count as
/// real, in units of `max(1, ‖M‖∞)`.
pub const REALITY_TOL: f64 = 1e-9;

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts, ascending.
pub fn symmetric_tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::Constraint("symmetric tridiagonal shape mismatch".into()));
    }
    if diag.iter().chain(off).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 100 {
                return Err(Error::Numerical("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues of a dense real matrix via the real Schur form.
///
/// Francis iterations can stall on matrices with a spectrum symmetric about
/// zero; each attempt is bounded and retried on `M + cI` for a few shifts `c`.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = m.norm().max(f64::MIN_POSITIVE);
    for c in [0.0, 0.37, -0.61, 1.13, -1.7] {
        let shifted = m + DMatrix::<f64>::identity(n, n) * (c * scale);
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, 2000) {
            let shift = Complex64::new(c * scale, 0.0);
            return Ok(schur.complex_eigenvalues().iter().map(|z| z - shift).collect());
        }
    }
    Err(Error::Numerical("real Schur iteration did not converge".into()))
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// All eigenvalues, sorted by `(re, im)`.
///
/// Zero products `upper_j * lower_j` split the matrix into independent
/// diagonal blocks. A block whose products are all positive is similar to
/// the symmetric tridiagonal matrix with off-diagonal `sqrt(upper_j lower_j)`
/// and is solved by QL; any other block goes to the dense real Schur solver.
pub fn eigs(m: &TriMatrix<f64>) -> Result<Vec<Complex64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim();
    let prods: Vec<f64> = m.upper.iter().zip(&m.lower).map(|(u, l)| u * l).collect();
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for end in 1..=n {
        if end < n && prods[end - 1] != 0.0 {
            continue;
        }
        let block = &prods[start..end - 1];
        if block.iter().all(|p| *p > 0.0) {
            let e: Vec<f64> = block.iter().map(|p| p.sqrt()).collect();
            let vals = symmetric_tridiag_eigenvalues(&m.diag[start..end], &e)?;
            out.extend(vals.into_iter().map(|x| Complex64::new(x, 0.0)));
        } else {
            let size = end - start;
            let dense = DMatrix::from_fn(size, size, |i, j| m.get(start + i, start + j));
            out.extend(dense_eigenvalues(&dense)?);
        }
        start = end;
    }
    out.sort_by(cmp_complex);
    Ok(out)
}

pub fn is_real(z: &Complex64, norm: f64) -> bool {
    z.im.abs() <= REALITY_TOL * norm.max(1.0)
}

pub fn count_real(values: &[Complex64], norm: f64) -> usize {
    values.iter().filter(|z| is_real(z, norm)).count()
}

/// Eigenvalues and real count of the path matrix at one parameter value.
pub fn spectrum_at(path: &PathSpec, t: f64) -> Result<(Vec<Complex64>, usize)> {
    let m = path.matrix_f64(t);
    let values = eigs(&m)?;
    let real = count_real(&values, m.norm_inf());
    Ok((values, real))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub eigenvalues: Vec<Complex64>,
    pub real_count: usize,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| (z.re, z.im)))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub path: PathSpec,
    pub rows: Vec<SweepRow>,
}

pub fn sweep(path: &PathSpec, grid: &Grid) -> Result<SweepResult> {
    let rows = grid
        .points_f64()
        .into_par_iter()
        .map(|t| spectrum_at(path, t).map(|(eigenvalues, real_count)| SweepRow { t, eigenvalues, real_count }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { path: path.clone(), rows })
}

impl SweepResult {
    pub fn csv_header(&self) -> String {
        let mut cols = vec!["t".to_string()];
        for j in 1..=self.path.n {
            cols.push(format!("re_{j}"));
            cols.push(format!("im_{j}"));
        }
        cols.push("real_count".into());
        cols.join(",")
    }

    fn csv_with(&self, rows: &[Vec<Complex64>]) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for (row, values) in self.rows.iter().zip(rows) {
            let mut fields = vec![format!("{}", row.t)];
            for z in values {
                fields.push(format!("{}", z.re));
                fields.push(format!("{}", z.im));
            }
            fields.push(row.real_count.to_string());
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// One row per grid point, eigenvalues in `(re, im)` order.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<Complex64>> = self.rows.iter().map(|r| r.eigenvalues.clone()).collect();
        self.csv_with(&rows)
    }

    /// Like [`to_csv`](Self::to_csv) but with columns following continuous
    /// tracks.
    pub fn to_csv_tracks(&self) -> String {
        self.csv_with(&self.tracks())
    }

    /// Eigenvalues reordered so that column `j` follows one level across the
    /// grid: greedy nearest-neighbour matching against the previous row,
    /// ties broken by real part.
    pub fn tracks(&self) -> Vec<Vec<Complex64>> {
        let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let Some(prev) = out.last() else {
                out.push(row.eigenvalues.clone());
                continue;
            };
            let n = prev.len();
            let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::with_capacity(n * n);
            for (i, p) in prev.iter().enumerate() {
                for (j, c) in row.eigenvalues.iter().enumerate() {
                    pairs.push(((p - c).norm(), c.re, i, j));
                }
            }
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            let mut next = vec![Complex64::new(f64::NAN, f64::NAN); n];
            let (mut used_prev, mut used_cur) = (vec![false; n], vec![false; n]);
            for (_, _, i, j) in pairs {
                if !used_prev[i] && !used_cur[j] {
                    used_prev[i] = true;
                    used_cur[j] = true;
                    next[i] = row.eigenvalues[j];
                }
            }
            out.push(next);
        }
        out
    }
}

/// A change in the number of real eigenvalues between two grid points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexificationEvent {
    pub t_lo: f64,
    pub t_hi: f64,
    pub real_before: usize,
    pub real_after: usize,
    pub t_star: f64,
}

impl ComplexificationEvent {
    pub fn contains(&self, t: f64) -> bool {
        self.t_lo <= t && t <= self.t_hi
    }
}

/// Every adjacent grid pair with different real counts, refined by
/// bisection on the real count until the bracket is at most `refine_tol`.
pub fn detect_complexification(res: &SweepResult, refine_tol: f64) -> Result<Vec<ComplexificationEvent>> {
    if !(refine_tol > 0.0) {
        return Err(Error::Constraint(format!("tolerance {refine_tol} must be positive")));
    }
    let mut events = Vec::new();
    for w in res.rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.real_count == b.real_count {
            continue;
        }
        let (mut lo, mut hi) = (a.t, b.t);
        let count_lo = a.real_count;
        while hi - lo > refine_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if spectrum_at(&res.path, mid)?.1 == count_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        events.push(ComplexificationEvent {
            t_lo: lo,
            t_hi: hi,
            real_before: a.real_count,
            real_after: b.real_count,
            t_star: 0.5 * (lo + hi),
        });
    }
    Ok(events)
}
