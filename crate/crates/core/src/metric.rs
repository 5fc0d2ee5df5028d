//! Hermitizing metrics: the exact diagonal metric, the bidiagonal
//! pseudometric, their one-parameter mixture and the spectral-expansion
//! metric built from left eigenvectors.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, TriMatrix};
use crate::model::CouplingVector;
use crate::rational::{self, Rational};
use crate::spectra::{self, symmetric_tridiag_eigenvalues};

/// `f(x) = (1 - x)/(1 + x)`.
pub fn f(x: &Rational) -> Result<Rational> {
    let den = Rational::one() + x;
    if den.is_zero() {
        return Err(Error::Pole);
    }
    Ok((Rational::one() - x) / den)
}

/// Diagonal of `Θ`, palindromic and positive inside the domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalMetric {
    #[serde(with = "crate::rational::serde_str_vec")]
    pub z: Vec<Rational>,
}

/// Shared off-diagonal of the symmetric pseudometric (zero main diagonal).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pseudometric {
    #[serde(with = "crate::rational::serde_str_vec")]
    pub off: Vec<Rational>,
}

/// `Θ = diag(z) + v P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagMetric {
    pub base: DiagonalMetric,
    pub pseudo: Pseudometric,
    #[serde(with = "crate::rational::serde_str")]
    pub v: Rational,
}

/// Suffix products `∏_{i=j}^{k} f(λ_i)` for `j = 1..k`.
fn suffix_products(lambdas: &[Rational]) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::one(); lambdas.len()];
    let mut acc = Rational::one();
    for (j, l) in lambdas.iter().enumerate().rev() {
        acc *= f(l)?;
        out[j] = acc.clone();
    }
    Ok(out)
}

fn check(couplings: &CouplingVector, n: usize) -> Result<()> {
    couplings.check_fits(n)?;
    couplings.check_unitarity_domain()
}

pub fn diagonal_metric(couplings: &CouplingVector, n: usize) -> Result<DiagonalMetric> {
    check(couplings, n)?;
    let prods = suffix_products(couplings.as_slice())?;
    let mut z = vec![Rational::one(); n];
    for (j, p) in prods.into_iter().enumerate() {
        z[n - 1 - j] = p.clone();
        z[j] = p;
    }
    Ok(DiagonalMetric { z })
}

pub fn pseudometric(couplings: &CouplingVector, n: usize) -> Result<Pseudometric> {
    check(couplings, n)?;
    let lambdas = couplings.as_slice();
    let prods = suffix_products(lambdas)?;
    let mut off = vec![Rational::one(); n - 1];
    for (j, p) in prods.into_iter().enumerate() {
        let value = (Rational::one() + &lambdas[j]) * p;
        off[n - 2 - j] = value.clone();
        off[j] = value;
    }
    Ok(Pseudometric { off })
}

impl DiagonalMetric {
    pub fn to_dense(&self) -> DenseMatrix<Rational> {
        let n = self.z.len();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, z) in self.z.iter().enumerate() {
            m.set(i, i, z.clone());
        }
        m
    }

    pub fn determinant(&self) -> Rational {
        self.z.iter().fold(Rational::one(), |a, b| a * b)
    }

    pub fn is_positive(&self) -> bool {
        self.z.iter().all(Signed::is_positive)
    }
}

impl Pseudometric {
    pub fn to_dense(&self) -> DenseMatrix<Rational> {
        let n = self.off.len() + 1;
        let mut m = DenseMatrix::zeros(n, n);
        for (i, o) in self.off.iter().enumerate() {
            m.set(i, i + 1, o.clone());
            m.set(i + 1, i, o.clone());
        }
        m
    }
}

impl TridiagMetric {
    pub fn new(base: DiagonalMetric, pseudo: Pseudometric, v: Rational) -> Result<Self> {
        if base.z.len() != pseudo.off.len() + 1 {
            return Err(Error::Constraint("metric and pseudometric dimensions differ".into()));
        }
        Ok(TridiagMetric { base, pseudo, v })
    }

    pub fn build(couplings: &CouplingVector, n: usize, v: Rational) -> Result<Self> {
        Self::new(diagonal_metric(couplings, n)?, pseudometric(couplings, n)?, v)
    }

    pub fn to_tri(&self) -> TriMatrix<Rational> {
        let off: Vec<Rational> = self.pseudo.off.iter().map(|o| o * &self.v).collect();
        TriMatrix::new(self.base.z.clone(), off.clone(), off).expect("consistent dimensions")
    }

    pub fn to_dense(&self) -> DenseMatrix<Rational> {
        self.to_tri().to_dense()
    }

    /// Smallest eigenvalue, in floating point.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.base, &self.pseudo, rational::to_f64(&self.v))
    }
}

/// `Hᵀ Θ - Θ H` in exact arithmetic; the zero matrix certifies that `H` is
/// self-adjoint with respect to `Θ`.
pub fn crypto_residual(h: &TriMatrix<Rational>, theta: &DenseMatrix<Rational>) -> Result<DenseMatrix<Rational>> {
    let n = h.dim();
    if theta.rows() != n || theta.cols() != n {
        return Err(Error::Constraint(format!(
            "metric is {}x{} but the Hamiltonian is {n}x{n}",
            theta.rows(),
            theta.cols()
        )));
    }
    let mut out = DenseMatrix::zeros(n, n);
    let band = |i: usize| i.saturating_sub(1)..(i + 2).min(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rational::zero();
            // (Hᵀ Θ)_ij = Σ_k H_ki Θ_kj
            for k in band(i) {
                let t = theta.get(k, j);
                if !t.is_zero() {
                    acc += h.get(k, i) * t;
                }
            }
            // (Θ H)_ij = Σ_k Θ_ik H_kj
            for k in band(j) {
                let t = theta.get(i, k);
                if !t.is_zero() {
                    acc -= t * h.get(k, j);
                }
            }
            if !acc.is_zero() {
                out.set(i, j, acc);
            }
        }
    }
    Ok(out)
}

fn min_eigenvalue(base: &DiagonalMetric, pseudo: &Pseudometric, v: f64) -> Result<f64> {
    let d: Vec<f64> = base.z.iter().map(rational::to_f64).collect();
    let e: Vec<f64> = pseudo.off.iter().map(|o| v * rational::to_f64(o)).collect();
    let eigs = symmetric_tridiag_eigenvalues(&d, &e)?;
    Ok(eigs[0])
}

/// Open interval of mixing weights around 0 on which `diag(z) + v P` is
/// positive definite, each end bracketed to the requested width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleInterval {
    /// `(inside, outside)` bracket of the lower end.
    pub lower: (f64, f64),
    /// `(inside, outside)` bracket of the upper end.
    pub upper: (f64, f64),
}

impl AdmissibleInterval {
    pub fn v_min(&self) -> f64 {
        0.5 * (self.lower.0 + self.lower.1)
    }

    pub fn v_max(&self) -> f64 {
        0.5 * (self.upper.0 + self.upper.1)
    }

    /// Certified membership: `Some(true)` inside both inner bracket ends,
    /// `Some(false)` outside an outer end, `None` inside a bracket.
    pub fn contains(&self, v: f64) -> Option<bool> {
        if v > self.lower.0 && v < self.upper.0 {
            Some(true)
        } else if v <= self.lower.1 || v >= self.upper.1 {
            Some(false)
        } else {
            None
        }
    }
}

/// `λ_min(diag(z) + v P)` is concave in `v` and positive at 0, so the
/// positive set is an interval; each end is found by doubling then bisection.
pub fn admissible_v_interval(base: &DiagonalMetric, pseudo: &Pseudometric, tol: f64) -> Result<AdmissibleInterval> {
    if !(tol > 0.0) {
        return Err(Error::Constraint(format!("tolerance {tol} must be positive")));
    }
    if !base.is_positive() {
        return Err(Error::OutsideDomain("diagonal metric is not positive".into()));
    }
    if base.z.len() != pseudo.off.len() + 1 {
        return Err(Error::Constraint("metric and pseudometric dimensions differ".into()));
    }
    let lam = |v: f64| min_eigenvalue(base, pseudo, v);
    let end = |dir: f64| -> Result<(f64, f64)> {
        let (mut inside, mut outside) = (0.0, dir);
        let mut doublings = 0;
        while lam(outside)? > 0.0 {
            inside = outside;
            outside *= 2.0;
            doublings += 1;
            if doublings > 200 {
                return Err(Error::Numerical("metric stays positive for all v".into()));
            }
        }
        while (outside - inside).abs() > tol {
            let mid = 0.5 * (inside + outside);
            if lam(mid)? > 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok((inside, outside))
    };
    Ok(AdmissibleInterval { lower: end(-1.0)?, upper: end(1.0)? })
}

/// `Θ = Σ κ_n ξ_n ξ_nᵀ` from unit left eigenvectors `Hᵀ ξ_n = E_n ξ_n`.
#[derive(Debug, Clone)]
pub struct SpectralMetric {
    pub kappas: Vec<f64>,
    pub energies: Vec<f64>,
    /// Rows are the left eigenvectors, ordered like `energies`.
    pub xi: DMatrix<f64>,
    pub theta: DMatrix<f64>,
    /// `‖Hᵀ Θ - Θ H‖_F`.
    pub residual: f64,
}

pub fn spectral_metric(h: &DMatrix<f64>, kappas: &[f64]) -> Result<SpectralMetric> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::Constraint("Hamiltonian is not square".into()));
    }
    if kappas.len() != n {
        return Err(Error::Constraint(format!("{} weights given for dimension {n}", kappas.len())));
    }
    if let Some(k) = kappas.iter().find(|k| !(**k > 0.0)) {
        return Err(Error::Constraint(format!("weight {k} is not positive")));
    }
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = h.norm().max(1.0);
    let mut energies = Vec::with_capacity(n);
    for z in spectra::dense_eigenvalues(h)? {
        if z.im.abs() > spectra::REALITY_TOL * scale {
            return Err(Error::OutsideDomain(format!("complex eigenvalue {z}")));
        }
        energies.push(z.re);
    }
    energies.sort_by(f64::total_cmp);
    if energies.windows(2).any(|w| w[1] - w[0] <= 1e-8 * scale) {
        return Err(Error::OutsideDomain("spectrum is not simple".into()));
    }
    let ht = h.transpose();
    let mut xi = DMatrix::<f64>::zeros(n, n);
    for (row, e) in energies.iter().enumerate() {
        let shifted = &ht - DMatrix::<f64>::identity(n, n) * *e;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
        let idx = svd.singular_values.imin();
        let mut v = v_t.row(idx).transpose();
        let pivot = v.iamax();
        if v[pivot] < 0.0 {
            v = -v;
        }
        xi.set_row(row, &(v.normalize()).transpose());
    }
    let mut theta = DMatrix::<f64>::zeros(n, n);
    for (row, k) in kappas.iter().enumerate() {
        let x = xi.row(row).transpose();
        theta += (&x * x.transpose()) * *k;
    }
    let residual = (&ht * &theta - &theta * h).norm();
    Ok(SpectralMetric { kappas: kappas.to_vec(), energies, xi, theta, residual })
}

/// JSON-ready export of the exact metric data.
#[derive(Debug, Clone, Serialize)]
pub struct MetricBundle {
    #[serde(rename = "N")]
    pub n: usize,
    pub diagonal: DiagonalMetric,
    pub pseudometric: Pseudometric,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub v: Option<Rational>,
}

mod opt_rational {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }
}

impl MetricBundle {
    pub fn build(couplings: &CouplingVector, n: usize, v: Option<Rational>) -> Result<Self> {
        Ok(MetricBundle { n, diagonal: diagonal_metric(couplings, n)?, pseudometric: pseudometric(couplings, n)?, v })
    }

    /// The metric actually in use: `diag(z)` or `diag(z) + v P`.
    pub fn theta(&self) -> DenseMatrix<Rational> {
        match &self.v {
            None => self.diagonal.to_dense(),
            Some(v) => TridiagMetric::new(self.diagonal.clone(), self.pseudometric.clone(), v.clone())
                .expect("consistent dimensions")
                .to_dense(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_boundary_well;
    use crate::rational::{int, rat};
    use nalgebra::SymmetricEigen;
    use proptest::prelude::*;

    fn cv(ls: &[Rational]) -> CouplingVector {
        CouplingVector(ls.to_vec())
    }

    #[test]
    fn f_values() {
        assert_eq!(f(&int(0)).unwrap(), int(1));
        assert_eq!(f(&rat(-9, 10)).unwrap(), int(19));
        assert_eq!(f(&int(1)).unwrap(), int(0));
        assert!(matches!(f(&int(-1)), Err(Error::Pole)));
    }

    #[test]
    fn single_coupling_metric() {
        let l = rat(1, 2);
        let z = diagonal_metric(&cv(&[l.clone()]), 5).unwrap().z;
        let fl = f(&l).unwrap();
        assert_eq!(z, vec![fl.clone(), int(1), int(1), int(1), fl]);
    }

    #[test]
    fn four_coupling_entries() {
        let (la, mu, nu, rho) = (rat(1, 3), rat(2, 5), rat(3, 7), rat(9, 10));
        let c = cv(&[la.clone(), -mu.clone(), nu.clone(), -rho.clone()]);
        let z = diagonal_metric(&c, 11).unwrap().z;
        let ff = |x: Rational| f(&x).unwrap();
        assert_eq!(z[1], ff(-rho.clone()) * ff(nu.clone()) * ff(-mu.clone()));
        assert_eq!(z[3], ff(-rho.clone()));
        assert_eq!(z[3], (int(1) + &rho) / (int(1) - &rho));
        let off = pseudometric(&c, 11).unwrap().off;
        assert_eq!(off[3], int(1) + &rho);
        assert_eq!(off[0], (int(1) + &la) * &z[0]);
        assert_eq!(off[4], int(1));
        assert_eq!(off[9], off[0]);
    }

    #[test]
    fn zero_couplings_give_identity() {
        let c = cv(&vec![int(0); 3]);
        assert!(diagonal_metric(&c, 9).unwrap().z.iter().all(|z| *z == int(1)));
        assert!(pseudometric(&c, 9).unwrap().off.iter().all(|o| *o == int(1)));
        let h = build_boundary_well(9, &c, &int(0)).unwrap();
        let res = crypto_residual(&h, &DenseMatrix::identity(9)).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(diagonal_metric(&cv(&[int(1)]), 5), Err(Error::OutsideDomain(_))));
        assert!(matches!(pseudometric(&cv(&[rat(-3, 2)]), 5), Err(Error::OutsideDomain(_))));
        assert!(matches!(diagonal_metric(&cv(&vec![int(0); 3]), 6), Err(Error::Constraint(_))));
    }

    #[test]
    fn metric_degenerates_toward_boundary() {
        let dets: Vec<f64> = [rat(9, 10), rat(99, 100), rat(999, 1000)]
            .iter()
            .map(|l| rational::to_f64(&diagonal_metric(&cv(&[l.clone()]), 5).unwrap().determinant()))
            .collect();
        assert!(dets[0] > dets[1] && dets[1] > dets[2] && dets[2] < 1e-5);
    }

    #[test]
    fn residual_detects_wrong_metric() {
        let c = cv(&[rat(1, 2)]);
        let h = build_boundary_well(5, &c, &int(0)).unwrap();
        let res = crypto_residual(&h, &DenseMatrix::identity(5)).unwrap();
        assert!(res.nonzero_count() > 0);
        assert!(crypto_residual(&h, &DenseMatrix::identity(4)).is_err());
    }

    #[test]
    fn free_chain_interval() {
        let c = CouplingVector::default();
        let (b, p) = (diagonal_metric(&c, 11).unwrap(), pseudometric(&c, 11).unwrap());
        let iv = admissible_v_interval(&b, &p, 1e-9).unwrap();
        // Oracle: 1 / λ_max of the path adjacency from a dense solver.
        let adj = p.to_dense().to_f64();
        let lmax = SymmetricEigen::new(adj).eigenvalues.max();
        let v_star = 1.0 / lmax;
        assert!((v_star - 1.0 / (2.0 * (std::f64::consts::PI / 12.0).cos())).abs() < 1e-12);
        assert!((iv.v_max() - v_star).abs() < 1e-8);
        assert!((iv.v_min() + v_star).abs() < 1e-8);
        assert_eq!(iv.contains(0.0), Some(true));
        assert_eq!(iv.contains(0.6), Some(false));
    }

    #[test]
    fn coupled_interval_matches_dense_scan() {
        let c = cv(&[rat(9, 10), rat(-9, 10), rat(9, 10), rat(-9, 10)]);
        let (b, p) = (diagonal_metric(&c, 11).unwrap(), pseudometric(&c, 11).unwrap());
        let iv = admissible_v_interval(&b, &p, 1e-10).unwrap();
        assert!(iv.v_min() < 0.0 && iv.v_max() > 0.0);
        let (bd, pd) = (b.to_dense().to_f64(), p.to_dense().to_f64());
        let lam = |v: f64| SymmetricEigen::new(&bd + &pd * v).eigenvalues.min();
        assert!(lam(iv.upper.0) > 0.0 && lam(iv.upper.1) <= 1e-9);
        assert!(lam(iv.lower.0) > 0.0 && lam(iv.lower.1) <= 1e-9);
        for i in 1..20 {
            let v = iv.lower.0 + (iv.upper.0 - iv.lower.0) * i as f64 / 20.0;
            assert!(lam(v) > 0.0);
        }
    }

    #[test]
    fn spectral_metric_symmetric_case() {
        let h = build_boundary_well(6, &CouplingVector::default(), &int(0)).unwrap().to_f64().to_nalgebra();
        let m = spectral_metric(&h, &[1.0; 6]).unwrap();
        assert!((&m.theta - DMatrix::<f64>::identity(6, 6)).amax() < 1e-10);
    }

    #[test]
    fn spectral_metric_reproduces_diagonal_metric() {
        let c = cv(&[rat(1, 2)]);
        let hq = build_boundary_well(5, &c, &int(0)).unwrap();
        let h = hq.to_f64().to_nalgebra();
        let theta = diagonal_metric(&c, 5).unwrap().to_dense().to_f64();
        // Right eigenvectors ψ_n; Θψ_n is a left eigenvector and the matching
        // weight is ‖Θψ‖² / (ψᵀΘψ).
        let energies = spectral_metric(&h, &[1.0; 5]).unwrap().energies;
        let kappas: Vec<f64> = energies
            .iter()
            .map(|e| {
                let svd = (&h - DMatrix::<f64>::identity(5, 5) * *e).svd(false, true);
                let psi = svd.v_t.unwrap().row(svd.singular_values.imin()).transpose();
                let tpsi = &theta * &psi;
                tpsi.norm_squared() / psi.dot(&tpsi)
            })
            .collect();
        let m = spectral_metric(&h, &kappas).unwrap();
        let rel = (&m.theta - &theta).amax() / theta.amax();
        assert!(rel <= 1e-8, "relative deviation {rel}");
        assert!(m.residual <= 1e-10 * h.norm() * m.theta.norm());
        assert!(SymmetricEigen::new(m.theta).eigenvalues.min() > 0.0);
    }

    #[test]
    fn spectral_metric_rejects_complex_spectrum() {
        let h = build_boundary_well(5, &cv(&[rat(3, 2)]), &int(0)).unwrap().to_f64().to_nalgebra();
        assert!(matches!(spectral_metric(&h, &[1.0; 5]), Err(Error::OutsideDomain(_))));
        let id = DMatrix::<f64>::identity(3, 3);
        assert!(matches!(spectral_metric(&id, &[1.0; 3]), Err(Error::OutsideDomain(_))));
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<Rational>, Rational)> {
        (3usize..=24).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((-19i64..=19, 20i64..=60).prop_map(|(p, q)| rat(p, q)), 0..=(n - 1) / 2),
                (-30i64..=30, 1i64..=30).prop_map(|(p, q)| rat(p, q)),
            )
        })
    }

    proptest! {
        #[test]
        fn metrics_hermitize_exactly((n, ls, v) in instance()) {
            let c = cv(&ls);
            let h = build_boundary_well(n, &c, &int(0)).unwrap();
            let base = diagonal_metric(&c, n).unwrap();
            prop_assert!(base.is_positive());
            prop_assert!(crypto_residual(&h, &base.to_dense()).unwrap().is_zero());
            let p = pseudometric(&c, n).unwrap();
            prop_assert!(crypto_residual(&h, &p.to_dense()).unwrap().is_zero());
            let mixed = TridiagMetric::new(base, p, v).unwrap();
            prop_assert!(crypto_residual(&h, &mixed.to_dense()).unwrap().is_zero());
        }

        #[test]
        fn metrics_are_palindromic((n, ls, _v) in instance()) {
            let c = cv(&ls);
            let z = diagonal_metric(&c, n).unwrap().z;
            let off = pseudometric(&c, n).unwrap().off;
            for j in 0..n {
                prop_assert_eq!(&z[j], &z[n - 1 - j]);
            }
            for j in 0..n - 1 {
                prop_assert_eq!(&off[j], &off[n - 2 - j]);
            }
        }
    }
}
