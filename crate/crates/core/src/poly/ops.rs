use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Poly, Ring};

impl<R: Ring> Add<&Poly<R>> for &Poly<R> {
    type Output = Poly<R>;

    fn add(self, rhs: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<R: Ring> Sub<&Poly<R>> for &Poly<R> {
    type Output = Poly<R>;

    fn sub(self, rhs: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<R: Ring> Mul<&Poly<R>> for &Poly<R> {
    type Output = Poly<R>;

    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let slot = std::mem::replace(&mut out[i + j], R::zero());
                out[i + j] = slot + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;

    fn neg(self) -> Poly<R> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: Poly<R>) -> Poly<R> {
                (&self).$method(&rhs)
            }
        }
        impl<R: Ring> $tr<&Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &Poly<R>) -> Poly<R> {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;

    fn neg(self) -> Poly<R> {
        -&self
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly { coeffs: vec![R::one()] }
    }
}
