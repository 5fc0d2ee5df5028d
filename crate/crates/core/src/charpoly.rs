//! Characteristic polynomials `det(M - sI)`.

use num_traits::{One, Zero};

use crate::matrix::{DenseMatrix, TriMatrix};
use crate::poly::{Poly, Ring, UniPoly};
use crate::rational::Rational;

/// Three-term recurrence for `det(M - sI)` of a tridiagonal matrix over
/// any commutative ring; the result is a polynomial in `s` over that ring.
pub fn charpoly_tridiag<R: Ring>(m: &TriMatrix<R>) -> Poly<R> {
    let minus_s = Poly::monomial(-R::one(), 1);
    let mut prev = Poly::<R>::one();
    let mut cur = &Poly::constant(m.diag[0].clone()) + &minus_s;
    for j in 1..m.dim() {
        let lin = &Poly::constant(m.diag[j].clone()) + &minus_s;
        let prod = m.upper[j - 1].clone() * m.lower[j - 1].clone();
        let next = &(&lin * &cur) - &prev.scale(&prod);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fraction-free (Bareiss) elimination on `M - sI` with entries in `Q[s]`.
/// Independent of [`charpoly_tridiag`]; used as its oracle.
pub fn charpoly_bareiss(m: &DenseMatrix<Rational>) -> UniPoly {
    assert!(m.is_square(), "charpoly of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return UniPoly::one();
    }
    let mut a: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = UniPoly::constant(m.get(i, j).clone());
                    if i == j {
                        &c - &UniPoly::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = Rational::one();
    let mut prev_pivot = UniPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact_poly(&prev_pivot).expect("Bareiss division is exact");
            }
        }
        prev_pivot = a[k][k].clone();
    }
    a[n - 1][n - 1].scale(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_boundary_well, CouplingVector};
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn two_by_two_coupled() {
        let l = rat(2, 7);
        let m = build_boundary_well(2, &CouplingVector(vec![]), &int(0)).unwrap();
        assert_eq!(charpoly_tridiag(&m), UniPoly::from_ints(&[-1, 0, 1]));
        // k = 1 needs N >= 3; the 2x2 coupled block is built by hand.
        let m = TriMatrix::new(vec![int(0), int(0)], vec![int(-1) - &l], vec![int(-1) + &l]).unwrap();
        assert_eq!(charpoly_tridiag(&m), UniPoly::new(vec![-(int(1) - &l * &l), int(0), int(1)]));
    }

    #[test]
    fn free_chain_of_eleven() {
        let m = build_boundary_well(11, &CouplingVector::default(), &int(0)).unwrap();
        let p = charpoly_tridiag(&m);
        // det(M - sI) for odd N has leading coefficient -1.
        assert_eq!(-p, UniPoly::from_ints(&[0, -6, 0, 35, 0, -56, 0, 36, 0, -10, 0, 1]));
    }

    #[test]
    fn one_by_one() {
        let m = TriMatrix::new(vec![int(5)], vec![], vec![]).unwrap();
        assert_eq!(charpoly_tridiag(&m), UniPoly::from_ints(&[5, -1]));
    }

    #[test]
    fn bareiss_small_cases() {
        let id = DenseMatrix::<Rational>::identity(3);
        assert_eq!(charpoly_bareiss(&id), UniPoly::from_ints(&[1, -1]).pow(3));
        let m = DenseMatrix::from_rows(vec![vec![int(0), int(2)], vec![int(3), int(0)]]).unwrap();
        assert_eq!(charpoly_bareiss(&m), UniPoly::from_ints(&[-6, 0, 1]));
    }

    #[test]
    fn bareiss_hand_determinant() {
        // det(M - sI) = u^3 - 2u with u = 1 - s.
        let m = DenseMatrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(1), int(1), int(1)],
            vec![int(0), int(1), int(1)],
        ])
        .unwrap();
        let oracle = UniPoly::from_ints(&[-1, -1, 3, -1]);
        assert_eq!(charpoly_bareiss(&m), oracle);
    }

    #[test]
    fn polynomial_ring_entries() {
        // Entries in Q[t]: [[t, 1], [1, -t]] -> s^2 - t^2 - 1.
        let t = UniPoly::x();
        let m = TriMatrix::new(vec![t.clone(), -t], vec![UniPoly::one()], vec![UniPoly::one()]).unwrap();
        let p = charpoly_tridiag(&m);
        assert_eq!(p.coeff(2), UniPoly::one());
        assert!(p.coeff(1).is_zero());
        assert_eq!(p.coeff(0), UniPoly::from_ints(&[-1, 0, -1]));
    }

    fn entry() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn recurrence_matches_bareiss(n in 1usize..=6, seed in prop::collection::vec(entry(), 18)) {
            let d = seed[..n].to_vec();
            let u = seed[6..6 + n - 1].to_vec();
            let l = seed[12..12 + n - 1].to_vec();
            let m = TriMatrix::new(d, u, l).unwrap();
            prop_assert_eq!(charpoly_tridiag(&m), charpoly_bareiss(&m.to_dense()));
        }

        #[test]
        fn bareiss_trace_and_det(rows in prop::collection::vec(prop::collection::vec(entry(), 3), 3)) {
            let m = DenseMatrix::from_rows(rows.clone()).unwrap();
            let p = charpoly_bareiss(&m);
            let trace = rows[0][0].clone() + &rows[1][1] + &rows[2][2];
            prop_assert_eq!(p.coeff(2), trace);
            let det = &rows[0][0] * (&rows[1][1] * &rows[2][2] - &rows[1][2] * &rows[2][1])
                - &rows[0][1] * (&rows[1][0] * &rows[2][2] - &rows[1][2] * &rows[2][0])
                + &rows[0][2] * (&rows[1][0] * &rows[2][1] - &rows[1][1] * &rows[2][0]);
            prop_assert_eq!(p.coeff(0), det);
        }
    }
}
