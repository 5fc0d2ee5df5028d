//! Matrix families: the k-parametric boundary well, the anharmonic-like
//! ATM chain and the Gegenbauer-related chain.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::TriMatrix;
use crate::poly::Ring;
use crate::rational::{self, int, Rational};

/// Couplings `(λ_1, ..., λ_k)` of the boundary-well family, with the
/// alternating sign convention `λ_1 = +λ, λ_2 = -μ, λ_3 = +ν, ...`
/// already applied by the caller.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CouplingVector(pub Vec<Rational>);

impl CouplingVector {
    pub fn new(lambdas: Vec<Rational>) -> Self {
        CouplingVector(lambdas)
    }

    pub fn parse(items: &[&str]) -> Result<Self> {
        items
            .iter()
            .map(|s| rational::parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(CouplingVector)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// The two coupling blocks of an `n x n` matrix must not overlap.
    pub fn check_fits(&self, n: usize) -> Result<()> {
        check_fits(self.k(), n)
    }

    /// Every `|λ_j| < 1`: the domain where the metrics exist.
    pub fn check_unitarity_domain(&self) -> Result<()> {
        for (j, l) in self.0.iter().enumerate() {
            if l.abs() >= Rational::one() {
                return Err(Error::OutsideDomain(format!(
                    "|lambda_{}| = |{}| is not below 1",
                    j + 1,
                    l
                )));
            }
        }
        Ok(())
    }

    pub fn negated(&self) -> Self {
        CouplingVector(self.0.iter().map(|l| -l.clone()).collect())
    }
}

pub(crate) fn check_fits(k: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Constraint(format!("dimension N = {n} must be at least 2")));
    }
    if 2 * k > n - 1 {
        return Err(Error::Constraint(format!(
            "k = {k} couplings do not fit in N = {n}: need 2k <= N - 1"
        )));
    }
    Ok(())
}

/// Boundary-well matrix over any coefficient ring: `shift` on the diagonal,
/// `-1 ∓ λ_j` on the outer upper/lower entries, mirrored at the far end,
/// and `-1` everywhere else off the diagonal.
pub fn boundary_well<R: Ring>(n: usize, lambdas: &[R], shift: R) -> Result<TriMatrix<R>> {
    check_fits(lambdas.len(), n)?;
    let minus_one = -R::one();
    let mut upper = vec![minus_one.clone(); n - 1];
    let mut lower = vec![minus_one.clone(); n - 1];
    for (j, l) in lambdas.iter().enumerate() {
        upper[j] = minus_one.clone() - l.clone();
        lower[j] = minus_one.clone() + l.clone();
        upper[n - 2 - j] = minus_one.clone() + l.clone();
        lower[n - 2 - j] = minus_one.clone() - l.clone();
    }
    TriMatrix::new(vec![shift; n], upper, lower)
}

pub fn build_boundary_well(n: usize, couplings: &CouplingVector, shift: &Rational) -> Result<TriMatrix<Rational>> {
    boundary_well(n, couplings.as_slice(), shift.clone())
}

/// ATM chain: diagonal `1-N, 3-N, ..., N-1`, upper `+g`, lower `-g`, with
/// the couplings extended palindromically (`g_{N-j} = g_j`).
pub fn build_atm(n: usize, g: &[Rational]) -> Result<TriMatrix<Rational>> {
    if n < 2 {
        return Err(Error::Constraint(format!("dimension N = {n} must be at least 2")));
    }
    let free = atm_free_couplings(n);
    if g.len() != free {
        return Err(Error::Constraint(format!(
            "ATM with N = {n} takes {free} couplings, got {}",
            g.len()
        )));
    }
    let full: Vec<Rational> = (0..n - 1).map(|j| g[j.min(n - 2 - j)].clone()).collect();
    let diag = (1..=n).map(|j| int(2 * j as i64 - 1 - n as i64)).collect();
    let lower = full.iter().map(|x| -x.clone()).collect();
    TriMatrix::new(diag, full, lower)
}

/// Number of independent ATM couplings: `ceil((N-1)/2)`, so that the
/// palindrome `g_j = g_{N-j}` determines all `N - 1` entries.
pub fn atm_free_couplings(n: usize) -> usize {
    n / 2
}

/// Gegenbauer-related chain: zero diagonal,
/// `upper_j = 1/(2a + 2j - 2)`, `lower_j = (2a + j - 1)/(2a + 2j)` for
/// `j = 1..N-1`.
pub fn build_gegenbauer(n: usize, a: &Rational) -> Result<TriMatrix<Rational>> {
    if n < 2 {
        return Err(Error::Constraint(format!("dimension N = {n} must be at least 2")));
    }
    let two_a = a * int(2);
    let mut upper = Vec::with_capacity(n - 1);
    let mut lower = Vec::with_capacity(n - 1);
    for j in 1..n as i64 {
        let up_den = &two_a + int(2 * j - 2);
        let low_den = &two_a + int(2 * j);
        if up_den.is_zero() || low_den.is_zero() {
            return Err(Error::SingularParameter(format!("a = {a} makes a denominator vanish at j = {j}")));
        }
        upper.push(up_den.recip());
        lower.push((&two_a + int(j - 1)) / low_den);
    }
    if !a.is_positive() {
        return Err(Error::Constraint(format!("Gegenbauer parameter a = {a} must be positive")));
    }
    TriMatrix::new(vec![Rational::zero(); n], upper, lower)
}

/// Declarative description of a model instance, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    BoundaryWell {
        #[serde(rename = "N")]
        n: usize,
        #[serde(with = "crate::rational::serde_str", default = "Rational::zero")]
        shift: Rational,
        #[serde(with = "crate::rational::serde_str_vec", default)]
        couplings: Vec<Rational>,
    },
    Atm {
        #[serde(rename = "N")]
        n: usize,
        #[serde(with = "crate::rational::serde_str_vec")]
        g: Vec<Rational>,
    },
    Gegenbauer {
        #[serde(rename = "N")]
        n: usize,
        #[serde(with = "crate::rational::serde_str")]
        a: Rational,
    },
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::BoundaryWell { n, .. } | ModelSpec::Atm { n, .. } | ModelSpec::Gegenbauer { n, .. } => *n,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::BoundaryWell { .. } => "boundary_well",
            ModelSpec::Atm { .. } => "atm",
            ModelSpec::Gegenbauer { .. } => "gegenbauer",
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.build().map(|_| ())
    }

    pub fn build(&self) -> Result<TriMatrix<Rational>> {
        match self {
            ModelSpec::BoundaryWell { n, shift, couplings } => {
                build_boundary_well(*n, &CouplingVector(couplings.clone()), shift)
            }
            ModelSpec::Atm { n, g } => build_atm(*n, g),
            ModelSpec::Gegenbauer { n, a } => build_gegenbauer(*n, a),
        }
    }

    pub fn couplings(&self) -> Option<CouplingVector> {
        match self {
            ModelSpec::BoundaryWell { couplings, .. } => Some(CouplingVector(couplings.clone())),
            _ => None,
        }
    }

    pub fn with_shift(mut self, new_shift: Rational) -> Result<Self> {
        match &mut self {
            ModelSpec::BoundaryWell { shift, .. } => *shift = new_shift,
            _ => return Err(Error::Constraint("only the boundary-well family has a diagonal shift".into())),
        }
        Ok(self)
    }
}
