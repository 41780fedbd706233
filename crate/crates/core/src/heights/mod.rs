//! Weil heights of rational points of ℙⁿ and generalized GCD heights with
//! respect to a subscheme given by generators of its ideal.
//!
//! The GCD height is the sum of local heights attached to the generators
//! `f_1..f_k` of degrees `d_1..d_k`:
//!
//! * finite part: `Σ_p min_i v_p(f_i(x)) · log p`, i.e. the log of the gcd
//!   of the nonzero values (computed by factoring that gcd);
//! * archimedean part: `max(0, min_i (d_i · log‖x‖∞ − log|f_i(x)|))`.
//!
//! Vanishing generators count as valuation `+∞` and are skipped by the
//! minimum. When every generator vanishes the point lies on `Y` and the GCD
//! parts are reported as `+∞`.
//!
//! Generators with rational coefficients are first multiplied by the lcm of
//! their denominators. This changes the height by a bounded amount only.

mod factor;

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::ideals::Ideal;
use crate::polyalgebra::{IntPoly, Rat};

pub use factor::{factorize, is_prime, is_prime_u64, ln_big};

/// A rational point of ℙⁿ with coprime integer coordinates whose first
/// nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("point has {got} coordinates, expected {expected}")]
    Arity { expected: usize, got: usize },
}

impl ProjPoint {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// Normalizes integer coordinates.
    pub fn from_integers<T: Into<BigInt> + Clone>(raw: &[T]) -> Result<Self, PointError> {
        let coords: Vec<BigInt> = raw.iter().cloned().map(Into::into).collect();
        normalize_integers(coords)
    }

    /// Coordinates as machine integers, if they all fit.
    pub fn coords_i64(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(ToPrimitive::to_i64).collect()
    }

    /// `max_i |x_i|`.
    pub fn max_abs(&self) -> BigUint {
        self.coords.iter().map(|c| c.magnitude().clone()).max().unwrap_or_default()
    }

    /// Builds a point from coordinates that are already canonical.
    pub(crate) fn from_canonical(coords: Vec<BigInt>) -> Self {
        debug_assert!(is_canonical(&coords));
        ProjPoint { coords }
    }
}

impl fmt::Display for ProjPoint {
    /// Colon-separated coordinates, e.g. `5:3:1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn is_canonical(coords: &[BigInt]) -> bool {
    let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    g.is_one() && coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
}

fn normalize_integers(mut coords: Vec<BigInt>) -> Result<ProjPoint, PointError> {
    let first = coords.iter().find(|c| !c.is_zero()).ok_or(PointError::ZeroVector)?;
    let mut g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if first.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for c in coords.iter_mut() {
            *c = &*c / &g;
        }
    }
    Ok(ProjPoint { coords })
}

/// Clears denominators, divides by the gcd and makes the first nonzero
/// coordinate positive. Idempotent.
pub fn normalize_point(raw: &[Rat]) -> Result<ProjPoint, PointError> {
    let den = raw.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let coords = raw.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    normalize_integers(coords)
}

/// `log max_i |x_i|` for a normalized point.
pub fn weil_height(x: &ProjPoint) -> f64 {
    ln_big(&x.max_abs())
}

/// Both GCD-height parts and the Weil height of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightBreakdown {
    pub weil: f64,
    pub gcd_finite: f64,
    pub gcd_arch: f64,
    pub gcd_total: f64,
    /// `gcd_i |f_i(x)|` over the nonvanishing generators; zero when all vanish.
    pub common_divisor: BigUint,
    /// True iff every generator vanishes at the point, i.e. `x ∈ Y`.
    pub vanishing: bool,
}

/// Generator data prepared once per ideal for repeated height evaluation.
#[derive(Debug, Clone)]
pub struct GcdHeight {
    nvars: usize,
    generators: Vec<(IntPoly, u32)>,
}

impl GcdHeight {
    pub fn new(ideal: &Ideal) -> Self {
        GcdHeight {
            nvars: ideal.nvars(),
            generators: ideal
                .generators()
                .iter()
                .map(|g| (g.integer_form(), g.degree().expect("nonzero generator")))
                .collect(),
        }
    }

    /// Values `f_i(x)` of the integer-scaled generators.
    pub fn values(&self, x: &ProjPoint) -> Result<Vec<BigInt>, PointError> {
        if x.nvars() != self.nvars {
            return Err(PointError::Arity { expected: self.nvars, got: x.nvars() });
        }
        if let Some(small) = x.coords_i64() {
            let fast: Option<Vec<BigInt>> = self
                .generators
                .iter()
                .map(|(g, _)| g.eval_i64(&small).map(BigInt::from))
                .collect();
            if let Some(v) = fast {
                return Ok(v);
            }
        }
        Ok(self
            .generators
            .iter()
            .map(|(g, _)| g.eval(x.coords()).expect("arity checked"))
            .collect())
    }

    pub fn evaluate(&self, x: &ProjPoint) -> Result<HeightBreakdown, PointError> {
        let values = self.values(x)?;
        let max_abs = x.max_abs();
        let weil = ln_big(&max_abs);
        let mut g = BigUint::zero();
        let mut arch_min = f64::INFINITY;
        for ((_, deg), v) in self.generators.iter().zip(&values) {
            if v.sign() == Sign::NoSign {
                continue;
            }
            g = g.gcd(v.magnitude());
            let local = f64::from(*deg) * weil - ln_big(v.magnitude());
            arch_min = arch_min.min(local);
        }
        if g.is_zero() {
            return Ok(HeightBreakdown {
                weil,
                gcd_finite: f64::INFINITY,
                gcd_arch: f64::INFINITY,
                gcd_total: f64::INFINITY,
                common_divisor: g,
                vanishing: true,
            });
        }
        let gcd_finite: f64 = factorize(&g)
            .iter()
            .map(|(p, e)| f64::from(*e) * ln_big(p))
            .fold(0.0, |acc, t| acc + t);
        let gcd_arch = arch_min.max(0.0);
        Ok(HeightBreakdown {
            weil,
            gcd_finite,
            gcd_arch,
            gcd_total: gcd_finite + gcd_arch,
            common_divisor: g,
            vanishing: false,
        })
    }
}

/// Height breakdown of `x` with respect to the subscheme cut out by `ideal`.
pub fn gcd_height(x: &ProjPoint, ideal: &Ideal) -> Result<HeightBreakdown, PointError> {
    GcdHeight::new(ideal).evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> ProjPoint {
        ProjPoint::from_integers(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn diagonal_point() -> Ideal {
        Ideal::parse(3, &["x0 - x1", "x1 - x2"]).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(pt(&[4, 2, 6]), pt(&[2, 1, 3]));
        assert_eq!(pt(&[4, 2, 6]).to_string(), "2:1:3");
        assert_eq!(pt(&[-1, 0]).to_string(), "1:0");
        assert_eq!(pt(&[0, -3, 6]).to_string(), "0:1:-2");
        let p = normalize_point(&[rat(1, 2), rat(1, 3)]).unwrap();
        assert_eq!(p.to_string(), "3:2");
        let again = normalize_point(&p.coords().iter().map(|c| Rat::from_integer(c.clone())).collect::<Vec<_>>()).unwrap();
        assert_eq!(again, p);
        assert_eq!(normalize_point(&[rat(0, 1), rat(0, 1)]), Err(PointError::ZeroVector));
    }

    #[test]
    fn weil_examples() {
        assert!((weil_height(&pt(&[2, 1, 3])) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(weil_height(&pt(&[1, 0, 0])), 0.0);
        assert!((weil_height(&pt(&[5, 3])) - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gcd_examples() {
        let y = diagonal_point();
        let h = gcd_height(&pt(&[5, 3, 1]), &y).unwrap();
        assert!((h.gcd_finite - 2f64.ln()).abs() < 1e-15);
        assert_eq!(h.common_divisor, BigUint::from(2u32));
        // both local archimedean terms equal log 5 - log 2
        assert!((h.gcd_arch - (5f64.ln() - 2f64.ln())).abs() < 1e-12);
        assert!(!h.vanishing);

        let h = gcd_height(&pt(&[1, 1, 2]), &y).unwrap();
        assert_eq!(h.gcd_finite.to_bits(), 0.0f64.to_bits());
        assert!(!h.vanishing);

        let h = gcd_height(&pt(&[1, 1, 1]), &y).unwrap();
        assert!(h.vanishing);
        assert!(h.gcd_total.is_infinite());
    }

    #[test]
    fn arity_error() {
        assert!(gcd_height(&pt(&[1, 2]), &diagonal_point()).is_err());
    }

    #[test]
    fn rational_generators_are_scaled() {
        let y = Ideal::parse(3, &["x0/2 - x1/2", "x1 - x2"]).unwrap();
        let h = gcd_height(&pt(&[5, 3, 1]), &y).unwrap();
        // x0/2 - x1/2 is scaled to x0 - x1
        assert!((h.gcd_finite - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn large_coordinates_take_big_path() {
        let y = diagonal_point();
        let big = BigInt::from(10u32).pow(30);
        let x = ProjPoint::from_integers(&[&big + 7, big.clone() + 1, BigInt::from(1)]).unwrap();
        let h = gcd_height(&x, &y).unwrap();
        // values 6 and 10^30, gcd 2
        assert_eq!(h.common_divisor, BigUint::from(2u32));
    }
}
