use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::Rat;

/// Sparse polynomial over the rationals in `nvars` variables.
///
/// Terms are kept in a map ordered by grevlex, so the leading term is the
/// last entry. No stored coefficient is ever zero; the zero polynomial is the
/// empty map and has no degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected {expected} coordinates, got {got}")]
pub struct ArityMismatch {
    pub expected: usize,
    pub got: usize,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, index), Rat::one())
    }

    pub fn monomial(nvars: usize, mono: Monomial, c: Rat) -> Self {
        debug_assert_eq!(mono.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Rat> {
        self.terms.get(m)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True when every term has the same total degree. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    /// `self - c * mono * other`, in place.
    pub(crate) fn sub_mul_term(&mut self, other: &Poly, mono: &Monomial, c: &Rat) {
        for (m, a) in &other.terms {
            self.add_term(m.mul(mono), -(a * c));
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Rat::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact value at integer coordinates.
    pub fn eval(&self, coords: &[BigInt]) -> Result<Rat, ArityMismatch> {
        if coords.len() != self.nvars {
            return Err(ArityMismatch { expected: self.nvars, got: coords.len() });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = BigInt::one();
            for (x, &e) in coords.iter().zip(m.exponents()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += c * Rat::from_integer(v);
        }
        Ok(acc)
    }

    /// The polynomial times the least common multiple of its coefficient
    /// denominators, so every coefficient becomes an integer. Integer
    /// polynomials come back unchanged.
    pub fn integer_form(&self) -> IntPoly {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.numer() * (&den / c.denom())))
                .collect(),
        }
    }

    /// Scalar multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer_form(&self) -> IntPoly {
        let mut ip = self.integer_form();
        let content = ip.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        if content.is_zero() {
            return ip;
        }
        let sign_neg = ip.terms.last().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let div = if sign_neg { -content } else { content };
        for (_, c) in ip.terms.iter_mut() {
            *c = &*c / &div;
        }
        ip
    }
}

/// Integer-coefficient polynomial used for fast exact evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    /// Ascending grevlex.
    terms: Vec<(Monomial, BigInt)>,
}

impl IntPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn eval(&self, coords: &[BigInt]) -> Result<BigInt, ArityMismatch> {
        if coords.len() != self.nvars {
            return Err(ArityMismatch { expected: self.nvars, got: coords.len() });
        }
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in coords.iter().zip(m.exponents()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Evaluation with machine integers; `None` on overflow or when a
    /// coefficient does not fit.
    pub fn eval_i64(&self, coords: &[i64]) -> Option<i128> {
        if coords.len() != self.nvars {
            return None;
        }
        let mut acc: i128 = 0;
        for (m, c) in &self.terms {
            let mut v: i128 = i128::try_from(c).ok()?;
            for (&x, &e) in coords.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v = v.checked_mul(i128::from(x))?;
                }
            }
            acc = acc.checked_add(v)?;
        }
        Some(acc)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), Rat::from_integer(c.clone()))),
        )
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Prints in the same syntax `parse_poly` reads, leading term first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalgebra::parse_poly;

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, n).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("x0*x2 - x1^2", 3).eval(&ints(&[1, 2, 4])).unwrap(), Rat::zero());
        assert_eq!(p("x0 - x1", 2).eval(&ints(&[5, 3])).unwrap(), Rat::from_integer(2.into()));
        assert_eq!(p("x0^3", 2).eval(&ints(&[-2, 7])).unwrap(), Rat::from_integer((-8).into()));
    }

    #[test]
    fn eval_length_mismatch() {
        let err = p("x0 - x1", 2).eval(&ints(&[1, 2, 3])).unwrap_err();
        assert_eq!(err, ArityMismatch { expected: 2, got: 3 });
    }

    #[test]
    fn display_is_leading_first() {
        assert_eq!(p("x0*x2 - x1^2", 3).to_string(), "-x1^2 + x0*x2");
        assert_eq!(p("(x0+x1)^2", 2).to_string(), "x0^2 + 2*x0*x1 + x1^2");
        assert_eq!(p("3/2*x0 - 5", 2).to_string(), "3/2*x0 - 5");
        assert_eq!(Poly::zero(3).to_string(), "0");
    }

    #[test]
    fn integer_forms() {
        let f = p("x0/2 + x1/3", 2);
        let ip = f.integer_form();
        assert_eq!(ip.to_poly(), p("3*x0 + 2*x1", 2));
        let g = p("-4*x0 + 6*x1", 2);
        assert_eq!(g.integer_form().to_poly(), g);
        // leading term is x0 (grevlex), made positive
        assert_eq!(g.primitive_integer_form().to_poly(), p("2*x0 - 3*x1", 2));
        assert_eq!(ip.eval_i64(&[2, 3]), Some(12));
    }

    #[test]
    fn eval_i64_overflow_is_none() {
        let f = p("x0^5", 1);
        assert_eq!(f.integer_form().eval_i64(&[i64::MAX]), None);
    }

    #[test]
    fn homogeneity() {
        assert!(p("x0*x2 - x1^2", 3).is_homogeneous());
        assert!(!p("x0 - x1^2", 3).is_homogeneous());
        assert!(Poly::zero(3).is_homogeneous());
        assert_eq!(Poly::zero(3).degree(), None);
        assert_eq!(p("x0*x1*x2 + x1^3", 3).degree(), Some(3));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let f = p("x0 - 2*x1 + x2", 3);
        let mut acc = Poly::constant(3, Rat::one());
        for e in 0..5 {
            assert_eq!(f.pow(e), acc);
            acc = &acc * &f;
        }
    }
}
