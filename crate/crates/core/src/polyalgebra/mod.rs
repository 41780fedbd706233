//! Exact multivariate polynomial arithmetic over ℚ and the linear algebra
//! that every dimension count in the crate is built on.

mod linalg;
mod monomial;
mod parse;
mod poly;

pub use linalg::{Echelon, ExactMatrix, SparseRow};
pub use monomial::{binomial, graded_monomials, Monomial};
pub use parse::{parse_poly, ParseError};
pub use poly::{ArityMismatch, IntPoly, Poly};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Right kernel of `m`; convenience wrapper over [`ExactMatrix::nullspace`].
pub fn nullspace(m: &ExactMatrix) -> Vec<Vec<Rat>> {
    m.nullspace()
}

#[cfg(test)]
mod props {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn small_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_deg, nvars), -5i64..=5, 1i64..=3),
            0..5,
        )
        .prop_map(move |terms| {
            Poly::from_terms(
                nvars,
                terms.into_iter().map(|(e, n, d)| {
                    (Monomial::new(e), Rat::new(BigInt::from(n), BigInt::from(d)))
                }),
            )
        })
    }

    fn homogeneous_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        (1u32..=3).prop_flat_map(move |deg| {
            let monos = graded_monomials(nvars, deg);
            prop::collection::vec((0..monos.len(), -4i64..=4), 1..4).prop_map(move |picks| {
                Poly::from_terms(
                    nvars,
                    picks
                        .into_iter()
                        .map(|(i, c)| (monos[i].clone(), Rat::from_integer(c.into()))),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(
            f in small_poly(3, 3),
            g in small_poly(3, 3),
            pt in prop::collection::vec(-6i64..=6, 3),
        ) {
            let pt: Vec<BigInt> = pt.into_iter().map(BigInt::from).collect();
            let ef = f.eval(&pt).unwrap();
            let eg = g.eval(&pt).unwrap();
            prop_assert_eq!((&f + &g).eval(&pt).unwrap(), &ef + &eg);
            prop_assert_eq!((&f * &g).eval(&pt).unwrap(), &ef * &eg);
        }

        #[test]
        fn homogeneous_products(f in homogeneous_poly(3), g in homogeneous_poly(3)) {
            let h = &f * &g;
            match (f.degree(), g.degree()) {
                (Some(a), Some(b)) => {
                    prop_assert!(!h.is_zero());
                    prop_assert!(h.is_homogeneous_of_degree(a + b));
                }
                _ => prop_assert!(h.is_zero()),
            }
        }

        #[test]
        fn display_parse_roundtrip(f in small_poly(4, 3)) {
            let text = f.to_string();
            let back = parse_poly(&text, 4).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
