//! Dense polynomials over exact coefficient rings.
//!
//! One generic type covers the three shapes the toolkit needs:
//! [`UniPoly`] (rational coefficients), [`BiPoly`] (a polynomial in the
//! spectral variable whose coefficients are [`UniPoly`]s in the path
//! parameter) and [`BigIntPoly`] (exact integer coefficients).
//! Coefficients are stored lowest degree first with no trailing zeros.

mod ops;
pub mod resultant;
pub mod sqfree;
pub mod sturm;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use resultant::{discriminant, discriminant_in_s, resultant, Discriminant};
pub use sqfree::{multiplicity_profile, square_free_decomposition, MultiplicityProfile, ProfileEntry, RootCluster};
pub use sturm::{RootLocation, SturmChain};

/// Commutative ring with exact arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + fmt::Debug + Zero + One + std::ops::Neg<Output = T> + std::ops::Sub<Output = T>
{
}

/// Integral domain with a division that succeeds exactly when the quotient
/// exists in the ring.
pub trait ExactDiv: Ring {
    fn div_exact(&self, divisor: &Self) -> Option<Self>;
}

impl ExactDiv for Rational {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        (!divisor.is_zero()).then(|| self / divisor)
    }
}

impl ExactDiv for BigInt {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

pub type UniPoly = Poly<Rational>;
pub type BiPoly = Poly<UniPoly>;
pub type BigIntPoly = Poly<BigInt>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^degree`
    pub fn monomial(c: R, degree: usize) -> Self {
        let mut coeffs = vec![R::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = R::zero();
        for c in self.coeffs.iter() {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + R::one();
        }
        Self::new(out)
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Multiplies by `x^shift`.
    pub fn shift_up(&self, shift: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Pseudo-remainder `lc(divisor)^(deg self - deg divisor + 1) * self mod divisor`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("pseudo-remainder by zero polynomial");
        let Some(ds) = self.degree() else {
            return self.clone();
        };
        if ds < dd {
            return self.clone();
        }
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut steps = 0u32;
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let lead = rem.leading().unwrap().clone();
            rem = &rem.scale(&lc) - &divisor.scale(&lead).shift_up(dr - dd);
            steps += 1;
        }
        let missing = (ds - dd + 1) as u32 - steps;
        let mut factor = R::one();
        for _ in 0..missing {
            factor = factor * lc.clone();
        }
        rem.scale(&factor)
    }
}

impl<R: ExactDiv> Poly<R> {
    /// Exact quotient, if `divisor` divides `self` in `R[x]`.
    pub fn div_exact_poly(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let lc = divisor.leading().unwrap();
        let Some(ds) = self.degree() else {
            return Some(Self::zero());
        };
        if ds < dd {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = vec![R::zero(); ds - dd + 1];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                return None;
            }
            let q = rem.leading().unwrap().div_exact(lc)?;
            rem = &rem - &divisor.scale(&q).shift_up(dr - dd);
            quot[dr - dd] = q;
        }
        Some(Self::new(quot))
    }

    pub fn div_scalar_exact(&self, c: &R) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|a| a.div_exact(c))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

impl<R: ExactDiv> ExactDiv for Poly<R> {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.div_exact_poly(divisor)
    }
}

impl UniPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let q = rem.leading().unwrap() / &lc;
            rem = &rem - &divisor.scale(&q).shift_up(dr - dd);
            quot[dr - dd] = q;
        }
        (Self::new(quot), rem)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor; computed over the integers with a
    /// primitive remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (a, _) = self.primitive_integer();
        let (b, _) = other.primitive_integer();
        a.gcd(&b).to_rational().monic()
    }

    /// Splits `self = content * primitive` with an integer primitive part
    /// whose leading coefficient is positive.
    pub fn primitive_integer(&self) -> (BigIntPoly, Rational) {
        if self.is_zero() {
            return (BigIntPoly::zero(), Rational::zero());
        }
        let lcm = rational::denominator_lcm(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let scaled = BigIntPoly::new(ints);
        let (prim, content) = scaled.primitive_part();
        (prim, Rational::new(content, lcm))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64().iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// True when only even powers occur.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| i % 2 == 0 || c.is_zero())
    }

    pub fn to_json(&self, var: &str) -> UniPolyJson {
        UniPolyJson {
            var: var.to_string(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(json: &UniPolyJson) -> Result<Self> {
        json.coeffs
            .iter()
            .map(|c| rational::parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn display(&self, var: &str) -> String {
        format_poly(self.coeffs(), var, |c| c.to_string(), |c| c.is_negative())
    }
}

impl BigIntPoly {
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient, and the signed content.
    pub fn primitive_part(&self) -> (Self, BigInt) {
        if self.is_zero() {
            return (self.clone(), BigInt::zero());
        }
        let mut content = self.content();
        if self.leading().unwrap().is_negative() {
            content = -content;
        }
        let prim = self.div_scalar_exact(&content).expect("content divides every coefficient");
        (prim, content)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, _) = self.primitive_part();
        let (mut b, _) = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part().0;
        }
        a.primitive_part().0
    }

    pub fn to_rational(&self) -> UniPoly {
        self.map(|c| Rational::from_integer(c.clone()))
    }

    /// Sign of `q^deg * p(num/q)` for `q > 0`, i.e. the sign of `p` at a
    /// rational point, evaluated without fractions.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let Some(deg) = self.degree() else { return 0 };
        let num = x.numer();
        let den = x.denom();
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &den_pow;
            if i > 0 {
                den_pow *= den;
            }
        }
        let _ = deg;
        sign_of(&acc)
    }

    pub fn display(&self, var: &str) -> String {
        format_poly(self.coeffs(), var, |c| c.to_string(), |c| c.is_negative())
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

impl BiPoly {
    /// Evaluates every inner coefficient at `t`.
    pub fn eval_inner(&self, t: &Rational) -> UniPoly {
        self.map(|c| c.eval(t))
    }

    pub fn eval_inner_f64(&self, t: f64) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.eval_f64(t)).collect()
    }

    pub fn to_json(&self) -> BiPolyJson {
        BiPolyJson {
            var: "s".into(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.coeffs().iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &BiPolyJson) -> Result<Self> {
        json.coeffs
            .iter()
            .map(|inner| {
                inner
                    .iter()
                    .map(|c| rational::parse_rational(c))
                    .collect::<Result<Vec<_>>>()
                    .map(UniPoly::new)
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// Pretty form such as `s^11 - (10 - 8*t^2)*s^9 + ...`.
    pub fn display(&self, outer: &str, inner: &str) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => outer.to_string(),
                _ => format!("{outer}^{i}"),
            };
            let (negative, body) = if c.is_constant() {
                let v = c.coeff(0);
                (v.is_negative(), v.abs().to_string())
            } else {
                // Pull a leading minus out when the lowest-order term is negative.
                let low = c.coeffs().iter().find(|x| !x.is_zero()).unwrap();
                if low.is_negative() {
                    (true, format!("({})", (-c.clone()).display_ascending(inner)))
                } else {
                    (false, format!("({})", c.display_ascending(inner)))
                }
            };
            let term = match (body.as_str(), mono.is_empty()) {
                ("1", false) => mono,
                (_, true) => body,
                _ => format!("{body}*{mono}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl UniPoly {
    fn display_ascending(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = monomial_text(&c.abs().to_string(), var, i);
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

fn monomial_text(abs_coeff: &str, var: &str, power: usize) -> String {
    match (power, abs_coeff) {
        (0, c) => c.to_string(),
        (1, "1") => var.to_string(),
        (1, c) => format!("{c}*{var}"),
        (p, "1") => format!("{var}^{p}"),
        (p, c) => format!("{c}*{var}^{p}"),
    }
}

fn format_poly<C>(
    coeffs: &[C],
    var: &str,
    text: impl Fn(&C) -> String,
    negative: impl Fn(&C) -> bool,
) -> String
where
    C: Zero,
{
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = negative(c);
        let raw = text(c);
        let abs = raw.trim_start_matches('-');
        let term = monomial_text(abs, var, i);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// `{"var": "t", "coeffs": ["1", "0", "-1"]}`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniPolyJson {
    pub var: String,
    pub coeffs: Vec<String>,
}

/// `{"var": "s", "coeffs": [["-6", "0", "24", ...], ...]}`: outer list over
/// powers of `s`, inner lists over powers of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiPolyJson {
    pub var: String,
    pub coeffs: Vec<Vec<String>>,
}

/// Newline-separated decimal coefficients, lowest degree first.
pub fn parse_bigint_lines(text: &str) -> Result<BigIntPoly> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer coefficient {l:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(BigIntPoly::new)
}

/// Exact Horner evaluation of an integer polynomial.
pub fn eval_bigint(p: &BigIntPoly, x: &BigInt) -> BigInt {
    p.eval(x)
}
