//! Sturm chains over the integers: certified real-root counting and
//! isolation by bisection on exact rational endpoints.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{sign_of, sqfree, BigIntPoly, UniPoly};
use crate::rational::{self, Rational};

/// An endpoint for root counting.
#[derive(Debug, Clone)]
pub enum Bound {
    NegInf,
    At(Rational),
    PosInf,
}

/// Sturm chain of a square-free integer polynomial. Remainders are taken
/// as sign-corrected pseudo-remainders reduced to primitive parts, which
/// keeps coefficients integral without changing any sign.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<BigIntPoly>,
}

impl SturmChain {
    /// Builds the chain of the square-free part of `p`.
    pub fn new(p: &BigIntPoly) -> Self {
        let f = square_free_part_int(p);
        let mut chain = vec![f.clone()];
        let df = f.derivative();
        if df.is_zero() {
            return SturmChain { chain };
        }
        chain.push(primitive_keep_sign(&df));
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            let mut r = a.pseudo_rem(b);
            // prem = lc(b)^(da-db+1) * rem; undo a negative multiplier.
            if b.leading().unwrap().is_negative() && (da - db + 1) % 2 == 1 {
                r = -r;
            }
            if r.is_zero() {
                break;
            }
            chain.push(primitive_keep_sign(&-r));
        }
        SturmChain { chain }
    }

    pub fn from_rational(p: &UniPoly) -> Self {
        Self::new(&p.primitive_integer().0)
    }

    /// The square-free polynomial whose roots the chain counts.
    pub fn base(&self) -> &BigIntPoly {
        &self.chain[0]
    }

    fn variations(&self, at: &Bound) -> usize {
        let signs = self.chain.iter().map(|p| match at {
            Bound::At(x) => p.sign_at(x),
            Bound::PosInf => p.leading().map_or(0, sign_of),
            Bound::NegInf => {
                let s = p.leading().map_or(0, sign_of);
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        });
        let mut count = 0;
        let mut last = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    /// `lo` must not itself be a root.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn count_all(&self) -> usize {
        self.count(&Bound::NegInf, &Bound::PosInf)
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.chain[0].sign_at(x)
    }

    /// Isolates every real root; isolating intervals are refined until
    /// narrower than `width`. Roots hit exactly by a bisection point, or
    /// equal to the simplest rational inside their final interval, are
    /// returned as exact.
    pub fn isolate(&self, width: &Rational) -> Vec<RootLocation> {
        let f = self.base();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let bound = cauchy_bound(f);
        let lo = -bound.clone();
        let hi = bound;
        let total = self.count(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
        let mut out = Vec::new();
        self.split(lo, hi, total, width, &mut out);
        out
    }

    fn split(&self, lo: Rational, hi: Rational, count: usize, width: &Rational, out: &mut Vec<RootLocation>) {
        if count == 0 {
            return;
        }
        if count == 1 {
            out.push(self.refine(lo, hi, width));
            return;
        }
        let mid = self.non_root_split(&lo, &hi);
        let left = self.count(&Bound::At(lo.clone()), &Bound::At(mid.clone()));
        self.split(lo, mid.clone(), left, width, out);
        self.split(mid, hi, count - left, width, out);
    }

    fn non_root_split(&self, lo: &Rational, hi: &Rational) -> Rational {
        let span = hi - lo;
        for (n, d) in [(1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7), (4, 7)] {
            let mid = lo + &span * rational::rat(n, d);
            if self.sign_at(&mid) != 0 {
                return mid;
            }
        }
        // A square-free polynomial has finitely many roots.
        let mut k = 11i64;
        loop {
            let mid = lo + &span * rational::rat(5, k);
            if self.sign_at(&mid) != 0 {
                return mid;
            }
            k += 2;
        }
    }

    fn refine(&self, mut lo: Rational, mut hi: Rational, width: &Rational) -> RootLocation {
        let two = Rational::from_integer(BigInt::from(2));
        let lo_sign = self.sign_at(&lo);
        if self.sign_at(&hi) == 0 {
            return RootLocation::Exact(hi);
        }
        while &hi - &lo > *width {
            let mid = (&lo + &hi) / &two;
            let s = self.sign_at(&mid);
            if s == 0 {
                return RootLocation::Exact(mid);
            }
            if s == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let simplest = rational::simplest_between(&lo, &hi);
        if self.sign_at(&simplest) == 0 {
            return RootLocation::Exact(simplest);
        }
        RootLocation::Interval(lo, hi)
    }
}

fn primitive_keep_sign(p: &BigIntPoly) -> BigIntPoly {
    let c = p.content();
    if c.is_zero() {
        return p.clone();
    }
    p.div_scalar_exact(&c).unwrap()
}

fn square_free_part_int(p: &BigIntPoly) -> BigIntPoly {
    let (prim, _) = p.primitive_part();
    let g = prim.gcd(&prim.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return prim;
    }
    prim.div_exact_poly(&g).expect("gcd divides").primitive_part().0
}

/// `1 + max |a_i / a_n|`, rounded up to an integer.
fn cauchy_bound(p: &BigIntPoly) -> Rational {
    let lead = p.leading().unwrap().abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    Rational::from_integer((max + &lead - BigInt::one()) / lead + BigInt::from(1))
}

/// A real root: exact rational, or an isolating open interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RootLocation {
    #[serde(with = "crate::rational::serde_str")]
    Exact(Rational),
    Interval(
        #[serde(with = "crate::rational::serde_str")] Rational,
        #[serde(with = "crate::rational::serde_str")] Rational,
    ),
}

impl RootLocation {
    pub fn midpoint(&self) -> Rational {
        match self {
            RootLocation::Exact(x) => x.clone(),
            RootLocation::Interval(lo, hi) => (lo + hi) / Rational::from_integer(BigInt::from(2)),
        }
    }

    pub fn approx(&self) -> f64 {
        rational::to_f64(&self.midpoint())
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RootLocation::Exact(x) => Some(x),
            RootLocation::Interval(..) => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            RootLocation::Exact(r) => rational::to_f64(r) == x,
            RootLocation::Interval(lo, hi) => rational::to_f64(lo) <= x && x <= rational::to_f64(hi),
        }
    }
}

/// Distinct real roots of a rational polynomial.
pub fn distinct_real_roots(p: &UniPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmChain::from_rational(p).count_all()
}

/// Real roots counted with multiplicity, via the square-free decomposition.
pub fn real_roots_with_multiplicity(p: &UniPoly) -> usize {
    let (_, factors) = sqfree::square_free_decomposition(p);
    factors
        .iter()
        .map(|(f, m)| distinct_real_roots(f) * m)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn ints(c: &[i64]) -> BigIntPoly {
        BigIntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn counts_roots_of_x2_minus_2() {
        let chain = SturmChain::new(&ints(&[-2, 0, 1]));
        assert_eq!(chain.count_all(), 2);
        assert_eq!(chain.count(&Bound::At(int(0)), &Bound::PosInf), 1);
        assert_eq!(chain.count(&Bound::At(int(-1)), &Bound::At(int(1))), 0);
    }

    #[test]
    fn multiple_roots_count_once() {
        // (x-1)^3 (x+2)
        let p = UniPoly::from_ints(&[-1, 3, -3, 1]) * UniPoly::from_ints(&[2, 1]);
        assert_eq!(distinct_real_roots(&p), 2);
        assert_eq!(real_roots_with_multiplicity(&p), 4);
    }

    #[test]
    fn isolation_certifies_rational_roots() {
        // (x - 1)(x + 1)(3x - 1)(x^2 - 2)
        let p = UniPoly::from_ints(&[-1, 0, 1]) * UniPoly::from_ints(&[-1, 3]) * UniPoly::from_ints(&[-2, 0, 1]);
        let roots = SturmChain::from_rational(&p).isolate(&rat(1, 1_000_000_000_000));
        assert_eq!(roots.len(), 5);
        let exact: Vec<_> = roots.iter().filter_map(|r| r.exact().cloned()).collect();
        assert_eq!(exact, vec![int(-1), rat(1, 3), int(1)]);
        let sqrt2 = roots.iter().filter(|r| r.exact().is_none()).map(|r| r.approx()).collect::<Vec<_>>();
        assert!((sqrt2[0] + 2f64.sqrt()).abs() < 1e-11);
        assert!((sqrt2[1] - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn no_real_roots() {
        assert_eq!(distinct_real_roots(&UniPoly::from_ints(&[1, 0, 1])), 0);
        assert!(SturmChain::new(&ints(&[5])).isolate(&rat(1, 10)).is_empty());
    }

    proptest! {
        #[test]
        fn count_matches_product_of_linear_factors(
            roots in prop::collection::btree_set(-20i64..20, 1..7),
            extra in 1i64..5,
        ) {
            // Distinct integer roots times an always-positive quadratic.
            let mut p = UniPoly::from_ints(&[extra, 0, 1]);
            for r in &roots {
                p = &p * &UniPoly::from_ints(&[-r, 1]);
            }
            let chain = SturmChain::from_rational(&p);
            prop_assert_eq!(chain.count_all(), roots.len());
            let iso = chain.isolate(&rat(1, 1000));
            prop_assert_eq!(iso.len(), roots.len());
            for (loc, r) in iso.iter().zip(roots.iter()) {
                prop_assert!(loc.contains(*r as f64) || loc.exact() == Some(&int(*r)));
            }
        }
    }
}
