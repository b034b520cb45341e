//! Exact arithmetic in Q(q,t) and univariate series expansion over it.

mod laurent;
mod ratfunc;
mod series;

pub use laurent::{LaurentPoly, Mono};
pub use ratfunc::{eval_point, set_eval_point, PointEval, RatFunc, Scalar};
pub use series::{
    g_poly, g_poly_swapped, poly_mul, series_divide, series_exp, truncated_mul, AuxRatFunc,
    ExpandAt, ZLaurent,
};

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QtError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("expansion point is a pole of uncancellable order {order}")]
    UncancellablePole { order: u32 },
    #[error("evaluation point already fixed to a different value")]
    EvalPointAlreadySet,
}

/// sigma_1 = q + t + (qt)^-1.
pub fn sigma1<F: Scalar>() -> F {
    F::q().add(&F::t()).add(&F::qt_mono(-1, -1))
}

/// sigma_2 = qt + q^-1 + t^-1.
pub fn sigma2<F: Scalar>() -> F {
    F::qt_mono(1, 1).add(&F::qt_mono(-1, 0)).add(&F::qt_mono(0, -1))
}

#[cfg(test)]
mod proptests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(((-3i64..4), (-3i64..4), (-5i64..6)), 0..5).prop_map(|v| {
            let mut p = LaurentPoly::zero();
            for (a, b, c) in v {
                p += &LaurentPoly::monomial(a, b, BigRational::from_integer(c.into()));
            }
            p
        })
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn add_associative(a in small_ratfunc(), b in small_ratfunc(), c in small_ratfunc()) {
            let l = (&(&a + &b)) + &c;
            let r = &a + &(&b + &c);
            prop_assert_eq!(l, r);
        }

        #[test]
        fn mul_distributes(a in small_ratfunc(), b in small_ratfunc(), c in small_ratfunc()) {
            let l = &a * &(&b + &c);
            let r = &(&a * &b) + &(&a * &c);
            prop_assert_eq!(l, r);
        }

        #[test]
        fn mul_inverse(a in small_ratfunc()) {
            if !a.is_zero() {
                let p = &a * &a.inv().unwrap();
                prop_assert!(p.is_one());
            }
        }

        #[test]
        fn canonical_equality_iff_cross_mul(a in small_ratfunc(), b in small_ratfunc()) {
            let cross = &(a.num() * b.den()) - &(b.num() * a.den());
            prop_assert_eq!(a == b, cross.is_zero());
        }

        #[test]
        fn normalize_idempotent(a in small_ratfunc()) {
            let again = RatFunc::new(a.num().clone(), a.den().clone()).unwrap();
            prop_assert_eq!(a, again);
        }

        #[test]
        fn eval_is_ring_hom(a in small_ratfunc(), b in small_ratfunc()) {
            let q0 = BigRational::new(7.into(), 3.into());
            let t0 = BigRational::new(11.into(), 5.into());
            if let (Ok(ea), Ok(eb)) = (a.eval(&q0, &t0), b.eval(&q0, &t0)) {
                let prod = &a * &b;
                let sum = &a + &b;
                prop_assert_eq!(prod.eval(&q0, &t0).unwrap(), &ea * &eb);
                prop_assert_eq!(sum.eval(&q0, &t0).unwrap(), &ea + &eb);
            }
        }
    }
}
