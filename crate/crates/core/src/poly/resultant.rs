//! Resultants and discriminants by the subresultant remainder sequence.
//!
//! Works over any exact integral domain, so the same code computes
//! integer resultants and the `t`-polynomial discriminant of a secular
//! polynomial in `Q[t][s]` without passing through fractions in `t`.

use num_traits::Zero;
use serde::Serialize;

use super::{BiPoly, BigIntPoly, ExactDiv, Poly, UniPoly};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

fn pow<R: ExactDiv>(base: &R, exp: usize) -> R {
    (0..exp).fold(R::one(), |acc, _| acc * base.clone())
}

fn exact<R: ExactDiv>(num: &R, den: &R) -> R {
    num.div_exact(den)
        .expect("subresultant sequence division must be exact")
}

/// `Res(a, b)` over an integral domain.
pub fn resultant<R: ExactDiv>(a: &Poly<R>, b: &Poly<R>) -> R {
    if a.is_zero() || b.is_zero() {
        return R::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            negate = true;
        }
    }
    let deg_b = b.degree().unwrap();
    if deg_b == 0 {
        let r = pow(b.leading().unwrap(), a.degree().unwrap());
        return if negate { -r } else { r };
    }

    let mut g = R::one();
    let mut h = R::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = g.clone() * pow(&h, delta);
        b = r.div_scalar_exact(&divisor)
            .expect("subresultant sequence division must be exact");
        g = a.leading().unwrap().clone();
        if delta > 0 {
            h = exact(&pow(&g, delta), &pow(&h, delta - 1));
        }
        match b.degree() {
            None => return R::zero(),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let da = a.degree().unwrap();
    let res = exact(&pow(b.leading().unwrap(), da), &pow(&h, da - 1));
    if negate {
        -res
    } else {
        res
    }
}

/// `(-1)^(n(n-1)/2) Res(p, p') / lc(p)` for `deg p = n >= 1`.
pub fn discriminant<R: ExactDiv>(p: &Poly<R>) -> Result<R> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::Constraint("discriminant of a constant".into()));
    }
    let res = resultant(p, &p.derivative());
    let disc = res
        .div_exact(p.leading().unwrap())
        .ok_or_else(|| Error::Numerical("leading coefficient does not divide the resultant".into()))?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -disc } else { disc })
}

/// Discriminant of a secular polynomial with respect to the spectral
/// variable, as an exact polynomial in the path parameter.
#[derive(Debug, Clone, Serialize)]
pub struct Discriminant {
    /// Exact discriminant in `Q[t]`.
    #[serde(skip)]
    pub exact: UniPoly,
    /// Primitive integer polynomial with positive leading coefficient.
    #[serde(rename = "primitive_coeffs", serialize_with = "serialize_int_coeffs")]
    pub primitive: BigIntPoly,
    /// `exact = scale * primitive`; the sign of `scale` is the recorded sign.
    #[serde(with = "crate::rational::serde_str")]
    pub scale: Rational,
}

fn serialize_int_coeffs<S: serde::Serializer>(p: &BigIntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

impl Discriminant {
    pub fn sign(&self) -> i32 {
        use num_traits::Signed;
        if self.scale.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.exact.is_zero()
    }
}

pub fn discriminant_in_s(p: &BiPoly) -> Result<Discriminant> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(d) if d < 2 => {
            return Err(Error::Constraint(format!("discriminant needs degree >= 2 in s, got {d}")))
        }
        _ => {}
    }
    // Clearing denominators first keeps the whole remainder sequence in
    // Z[t], which is far cheaper than Q[t]: disc(c p) = c^(2n-2) disc(p).
    let n = p.degree().unwrap();
    let c = rational::denominator_lcm(p.coeffs().iter().flat_map(|q| q.coeffs().iter()));
    let cr = Rational::from_integer(c.clone());
    let integral: Poly<BigIntPoly> = p.map(|q| q.map(|x| (x * &cr).to_integer()));
    let scaled = discriminant(&integral)?;
    let denom = Rational::from_integer(num_traits::pow(c, 2 * n - 2));
    let exact = scaled.map(|x| Rational::from_integer(x.clone()) / &denom);
    let (primitive, scale) = if exact.is_zero() {
        (BigIntPoly::zero(), Rational::zero())
    } else {
        exact.primitive_integer()
    };
    Ok(Discriminant { exact, primitive, scale })
}

impl UniPoly {
    pub fn resultant(&self, other: &Self) -> Rational {
        resultant(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use num_traits::One;

    /// Sylvester matrix determinant by plain Gaussian elimination over Q.
    fn sylvester_resultant(a: &UniPoly, b: &UniPoly) -> Rational {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return Rational::one();
        }
        let mut rows = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                rows[i][i + j] = a.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                rows[n + i][i + j] = b.coeff(n - j);
            }
        }
        let mut det = Rational::one();
        for col in 0..size {
            let Some(pivot) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                rows.swap(pivot, col);
                det = -det;
            }
            det *= rows[col][col].clone();
            for r in col + 1..size {
                let factor = &rows[r][col] / &rows[col][col];
                for c in col..size {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
        det
    }

    #[test]
    fn quadratic_in_s_discriminant() {
        // s^2 - (1 - t^2): discriminant 4(1 - t^2)
        let p = BiPoly::new(vec![UniPoly::from_ints(&[-1, 0, 1]), UniPoly::zero(), UniPoly::one()]);
        let d = discriminant_in_s(&p).unwrap();
        assert_eq!(d.exact, UniPoly::from_ints(&[4, 0, -4]));
        assert_eq!(d.primitive.coeffs(), &[BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        assert_eq!(d.scale, int(-4));
        assert!(d.exact.eval(&int(1)).is_zero());
        assert!(d.exact.eval(&int(-1)).is_zero());
    }

    #[test]
    fn constant_in_t_has_constant_discriminant() {
        let p = BiPoly::new(vec![UniPoly::one(), UniPoly::zero(), UniPoly::one()]);
        let d = discriminant_in_s(&p).unwrap();
        assert_eq!(d.exact, UniPoly::constant(int(-4)));
    }

    #[test]
    fn rejects_zero_and_low_degree() {
        assert!(matches!(discriminant_in_s(&BiPoly::zero()), Err(Error::ZeroPolynomial)));
        let linear = BiPoly::new(vec![UniPoly::one(), UniPoly::one()]);
        assert!(matches!(discriminant_in_s(&linear), Err(Error::Constraint(_))));
    }

    #[test]
    fn cubic_discriminant_formula() {
        // x^3 + p x + q: -4p^3 - 27q^2
        let f = UniPoly::new(vec![rat(2, 3), int(-5), int(0), int(1)]);
        let expected = int(-4) * int(-125) - int(27) * rat(4, 9);
        assert_eq!(discriminant(&f).unwrap(), expected);
    }

    #[test]
    fn common_root_gives_zero_resultant() {
        let a = UniPoly::from_ints(&[-2, -1, 1]); // (x-2)(x+1)
        let b = UniPoly::from_ints(&[-6, 1, 1]); // (x-2)(x+3)
        assert!(a.resultant(&b).is_zero());
    }

    fn small_poly() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(-9i64..=9, 1..7).prop_map(|mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            UniPoly::from_ints(&c)
        })
    }

    proptest! {
        #[test]
        fn subresultant_matches_sylvester(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b));
        }

        #[test]
        fn integer_and_rational_resultants_agree(a in small_poly(), b in small_poly()) {
            let ai = a.map(|c| c.to_integer());
            let bi = b.map(|c| c.to_integer());
            prop_assert_eq!(Rational::from_integer(resultant(&ai, &bi)), resultant(&a, &b));
        }
    }
}
