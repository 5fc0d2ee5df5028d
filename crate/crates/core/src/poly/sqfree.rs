//! Square-free decomposition and exact root-multiplicity profiles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::UniPoly;
use crate::rational::{self, Rational};

/// Yun's algorithm: `p = unit * prod f_i^i` with every `f_i` monic,
/// square-free and pairwise coprime. Factors equal to 1 are omitted.
pub fn square_free_decomposition(p: &UniPoly) -> (Rational, Vec<(UniPoly, usize)>) {
    let Some(lc) = p.leading().cloned() else {
        return (Rational::zero(), Vec::new());
    };
    let f = p.monic();
    if f.degree() == Some(0) {
        return (lc, Vec::new());
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().is_some_and(|deg| deg > 0) {
        let a = b.gcd(&d);
        if a.degree().is_some_and(|deg| deg > 0) {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    (lc, out)
}

/// Exactly identified root set of one square-free factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootCluster {
    /// The root `s = value`.
    Rational {
        #[serde(with = "crate::rational::serde_str")]
        value: Rational,
    },
    /// Both roots of the irreducible monic quadratic `s^2 + b s + c`.
    Quadratic {
        #[serde(with = "crate::rational::serde_str")]
        b: Rational,
        #[serde(with = "crate::rational::serde_str")]
        c: Rational,
    },
    /// A monic square-free factor left unevaluated.
    Factor {
        #[serde(serialize_with = "serialize_coeffs")]
        poly: UniPoly,
    },
}

fn serialize_coeffs<S: serde::Serializer>(p: &UniPoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

impl RootCluster {
    pub fn root_count(&self) -> usize {
        match self {
            RootCluster::Rational { .. } => 1,
            RootCluster::Quadratic { .. } => 2,
            RootCluster::Factor { poly } => poly.degree().unwrap_or(0),
        }
    }

    pub fn describe(&self, var: &str) -> String {
        match self {
            RootCluster::Rational { value } => format!("{var} = {value}"),
            RootCluster::Quadratic { b, c } if b.is_zero() && c.is_negative() => {
                format!("{var} = ±sqrt({})", -c.clone())
            }
            RootCluster::Quadratic { b, c } => {
                let q = UniPoly::new(vec![c.clone(), b.clone(), Rational::one()]);
                format!("roots of {}", q.display(var))
            }
            RootCluster::Factor { poly } => format!("roots of {}", poly.display(var)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    #[serde(flatten)]
    pub cluster: RootCluster,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityProfile {
    #[serde(with = "crate::rational::serde_str")]
    pub unit: Rational,
    pub entries: Vec<ProfileEntry>,
    /// Square-free factors with their multiplicities.
    #[serde(skip)]
    pub square_free: Vec<(UniPoly, usize)>,
}

impl MultiplicityProfile {
    /// Number of roots counted with multiplicity; equals the degree.
    pub fn root_count(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.cluster.root_count() * e.multiplicity)
            .sum()
    }

    pub fn zero_multiplicity(&self) -> usize {
        self.rational_multiplicity(&Rational::zero())
    }

    pub fn rational_multiplicity(&self, root: &Rational) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(&e.cluster, RootCluster::Rational { value } if value == root))
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Multiplicity of the pair `s = ±sqrt(c)`, i.e. of the factor `s^2 - c`.
    pub fn surd_pair_multiplicity(&self, c: &Rational) -> usize {
        let target_c = -c.clone();
        self.entries
            .iter()
            .filter(|e| {
                matches!(&e.cluster, RootCluster::Quadratic { b, c } if b.is_zero() && *c == target_c)
            })
            .map(|e| e.multiplicity)
            .sum()
    }

    pub fn describe(&self, var: &str) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} (x{})", e.cluster.describe(var), e.multiplicity))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Square-free decomposition plus exact identification of rational roots
/// and irreducible quadratic factors inside each square-free factor.
/// Numerical roots only propose candidates; every reported cluster is
/// confirmed by exact division.
pub fn multiplicity_profile(p: &UniPoly) -> MultiplicityProfile {
    let (unit, square_free) = square_free_decomposition(p);
    let mut entries = Vec::new();
    for (factor, multiplicity) in &square_free {
        for cluster in split_factor(factor) {
            entries.push(ProfileEntry { cluster, multiplicity: *multiplicity });
        }
    }
    entries.sort_by(|a, b| cluster_key(&a.cluster).partial_cmp(&cluster_key(&b.cluster)).unwrap());
    MultiplicityProfile { unit, entries, square_free }
}

fn cluster_key(c: &RootCluster) -> (u8, f64, f64) {
    match c {
        RootCluster::Rational { value } => (0, rational::to_f64(&value.abs()), rational::to_f64(value)),
        RootCluster::Quadratic { b, c } => (1, rational::to_f64(c), rational::to_f64(b)),
        RootCluster::Factor { poly } => (2, poly.degree().unwrap_or(0) as f64, 0.0),
    }
}

const MAX_DENOMINATOR: u64 = 1_000_000;

fn split_factor(factor: &UniPoly) -> Vec<RootCluster> {
    let mut out = Vec::new();
    let mut f = factor.monic();

    if f.degree().unwrap_or(0) >= 1 && f.coeff(0).is_zero() {
        out.push(RootCluster::Rational { value: Rational::zero() });
        f = f.div_rem(&UniPoly::x()).0;
    }

    // Rational roots.
    loop {
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        if f.degree() == Some(1) {
            out.push(RootCluster::Rational { value: -f.coeff(0) });
            return out;
        }
        let found = complex_roots(&f)
            .into_iter()
            .filter(|z| z.im.abs() <= 1e-6 * z.norm().max(1.0))
            .filter_map(|z| rational::approximate(z.re, MAX_DENOMINATOR))
            .find(|r| f.eval(r).is_zero());
        match found {
            Some(r) => {
                f = f.div_rem(&UniPoly::new(vec![-r.clone(), Rational::one()])).0;
                out.push(RootCluster::Rational { value: r });
            }
            None => break,
        }
    }

    // Quadratic factors built from pairs of numerical roots.
    'outer: loop {
        let deg = f.degree().unwrap_or(0);
        if deg < 2 {
            break;
        }
        if deg == 2 {
            out.push(RootCluster::Quadratic { b: f.coeff(1), c: f.coeff(0) });
            return out;
        }
        let roots = complex_roots(&f);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let sum = roots[i] + roots[j];
                let prod = roots[i] * roots[j];
                let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
                if sum.im.abs() > 1e-6 * scale || prod.im.abs() > 1e-6 * scale * scale {
                    continue;
                }
                let (Some(b), Some(c)) = (
                    rational::approximate(-sum.re, MAX_DENOMINATOR),
                    rational::approximate(prod.re, MAX_DENOMINATOR),
                ) else {
                    continue;
                };
                let q = UniPoly::new(vec![c.clone(), b.clone(), Rational::one()]);
                let (quot, rem) = f.div_rem(&q);
                if rem.is_zero() {
                    out.push(RootCluster::Quadratic { b, c });
                    f = quot;
                    continue 'outer;
                }
            }
        }
        break;
    }
    if f.degree().unwrap_or(0) >= 1 {
        out.push(RootCluster::Factor { poly: f });
    }
    out
}

/// Numerical roots from the eigenvalues of the companion matrix.
pub(crate) fn complex_roots(p: &UniPoly) -> Vec<Complex64> {
    let coeffs = p.monic().to_f64();
    companion_roots(&coeffs)
}

/// Roots of `sum coeffs[i] x^i`; the leading coefficient must be nonzero.
pub(crate) fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    crate::spectra::dense_eigenvalues(&m).unwrap_or_default()
}
