//! Exact polynomial substrate: rationals, rational-endpoint intervals and
//! sparse multivariate polynomials with differentiation, substitution and
//! interval evaluation.

pub mod interval;
pub mod multipoly;
mod parse;
pub mod rational;

pub use interval::{IBox, Interval};
pub use multipoly::{Exponents, F64Poly, MultiPoly};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("empty variable set")]
    EmptyVariableSet,
    #[error("cannot parse rational '{0}' (use integers or fractions like 1/16)")]
    BadRational(String),
    #[error("polynomial parse error: {0}")]
    Parse(String),
}

#[cfg(test)]
mod properties {
    use super::rational::frac;
    use super::*;
    use proptest::prelude::*;

    const VARS: [&str; 3] = ["x", "y", "t"];

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..4, 0u32..4, 0u32..3), -9i64..9, 1i64..4), 0..5).prop_map(
            |terms| {
                MultiPoly::from_terms(
                    &VARS,
                    terms
                        .into_iter()
                        .map(|((a, b, c), n, d)| (vec![a, b, c], frac(n, d))),
                )
            },
        )
    }

    fn arb_point() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-12i64..12, 1i64..5).prop_map(|(n, d)| frac(n, d)), 3)
    }

    /// A box and a rational point inside it.
    fn arb_box_and_point() -> impl Strategy<Value = (Vec<Interval>, Vec<Rational>)> {
        prop::collection::vec(
            (-8i64..8, 0i64..8, 0i64..=16).prop_map(|(lo, w, s)| {
                let lo = frac(lo, 4);
                let hi = &lo + frac(w, 4);
                let p = &lo + (&hi - &lo) * frac(s, 16);
                (Interval::new(lo, hi), p)
            }),
            3,
        )
        .prop_map(|v| v.into_iter().unzip())
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(p in arb_poly(), q in arb_poly(), x in arb_point()) {
            let (pv, qv) = (p.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
            prop_assert_eq!((&p + &q).evaluate(&x).unwrap(), &pv + &qv);
            prop_assert_eq!((&p * &q).evaluate(&x).unwrap(), pv * qv);
        }

        #[test]
        fn mixed_partials_commute(p in arb_poly()) {
            let h = p.hessian(&VARS).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(&h[i][j], &h[j][i]);
                }
            }
        }

        #[test]
        fn interval_evaluation_encloses_point_values(p in arb_poly(), (bx, x) in arb_box_and_point()) {
            let v = p.evaluate(&x).unwrap();
            prop_assert!(p.eval_interval(&bx).unwrap().contains(&v));
            prop_assert!(p.eval_interval_refined(&bx, 3).unwrap().contains(&v));
        }

        #[test]
        fn substitution_commutes_with_evaluation(p in arb_poly(), x in arb_point()) {
            let q = p.substitute("t", &x[2]).unwrap();
            prop_assert_eq!(q.evaluate(&x[..2]).unwrap(), p.evaluate(&x).unwrap());
        }
    }
}
