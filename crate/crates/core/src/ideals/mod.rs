//! Homogeneous ideals of ℚ[x0..xn], their powers, graded pieces and
//! Gröbner-basis membership.

mod file;
mod groebner;
mod hilbert;

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::polyalgebra::{binomial, graded_monomials, Echelon, Monomial, Poly, Rat, SparseRow};

pub use file::{parse_ideal_file, IdealFileError};
pub use groebner::{buchberger, normal_form, standard_monomial_count};
pub use hilbert::{hilbert_profile, hilbert_profile_with, GeomProfile, HilbertPolynomial, ProfileError, ProfileOptions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("generator {index} is zero")]
    ZeroGenerator { index: usize },
    #[error("generator {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("generator {index} has {got} variables, ideal has {expected}")]
    VariableCount { index: usize, expected: usize, got: usize },
    #[error("an ideal needs at least one variable")]
    NoVariables,
}

/// Homogeneous ideal given by a list of generators.
///
/// The reduced Gröbner basis is computed on first use and cached.
#[derive(Debug)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Poly>,
    groebner: OnceLock<Vec<Poly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let groebner = OnceLock::new();
        if let Some(gb) = self.groebner.get() {
            let _ = groebner.set(gb.clone());
        }
        Ideal { nvars: self.nvars, generators: self.generators.clone(), groebner }
    }
}

impl PartialEq for Ideal {
    /// Equality of presentations (same generator list), not of ideals.
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.generators == other.generators
    }
}

impl Eq for Ideal {}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<Poly>) -> Result<Self, IdealError> {
        if nvars == 0 {
            return Err(IdealError::NoVariables);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.nvars() != nvars {
                return Err(IdealError::VariableCount { index, expected: nvars, got: g.nvars() });
            }
            if g.is_zero() {
                return Err(IdealError::ZeroGenerator { index });
            }
            if !g.is_homogeneous() {
                return Err(IdealError::NotHomogeneous { index });
            }
        }
        Ok(Ideal { nvars, generators, groebner: OnceLock::new() })
    }

    /// The zero ideal.
    pub fn zero(nvars: usize) -> Self {
        Ideal { nvars, generators: Vec::new(), groebner: OnceLock::new() }
    }

    /// Parses each generator with [`crate::polyalgebra::parse_poly`].
    pub fn parse(nvars: usize, generators: &[&str]) -> Result<Self, IdealFileError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (i, s) in generators.iter().enumerate() {
            let p = crate::polyalgebra::parse_poly(s, nvars)
                .map_err(|source| IdealFileError::Poly { line: i + 1, source })?;
            gens.push(p);
        }
        Ideal::new(nvars, gens).map_err(IdealFileError::from)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn min_generator_degree(&self) -> Option<u32> {
        self.generators.iter().filter_map(Poly::degree).min()
    }

    /// `I^r`, generated by all products of `r` generators taken with
    /// repetition, duplicates removed. `r = 0` gives the unit ideal.
    pub fn power(&self, r: u32) -> Ideal {
        if r == 0 {
            return Ideal::new(self.nvars, vec![Poly::constant(self.nvars, Rat::from_integer(1.into()))])
                .expect("unit ideal");
        }
        if r == 1 {
            return self.clone();
        }
        let k = self.generators.len();
        let mut out: Vec<Poly> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        // non-decreasing index tuples = multisets of size r
        let mut idx = vec![0usize; r as usize];
        if k == 0 {
            return Ideal::zero(self.nvars);
        }
        loop {
            let mut p = self.generators[idx[0]].clone();
            for &i in &idx[1..] {
                p = &p * &self.generators[i];
            }
            if seen.insert(p.clone()) {
                out.push(p);
            }
            // advance
            let mut pos = idx.len();
            while pos > 0 && idx[pos - 1] == k - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            let v = idx[pos - 1];
            for slot in idx[pos..].iter_mut() {
                *slot = v;
            }
        }
        Ideal { nvars: self.nvars, generators: out, groebner: OnceLock::new() }
    }

    fn slice_echelon(&self, m: u32) -> (Echelon, Vec<Monomial>) {
        let monos = graded_monomials(self.nvars, m);
        let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
        let full = monos.len();
        let mut ech = Echelon::new();
        'gens: for g in &self.generators {
            let Some(dg) = g.degree() else { continue };
            if dg > m {
                continue;
            }
            let ig = g.primitive_integer_form();
            for mu in graded_monomials(self.nvars, m - dg) {
                let row = SparseRow::new(
                    ig.terms()
                        .iter()
                        .map(|(mo, c)| (index[&mo.mul(&mu)], c.clone()))
                        .collect(),
                );
                ech.insert(row);
                if ech.rank() == full {
                    break 'gens;
                }
            }
        }
        (ech, monos)
    }

    /// Degree-`m` slice of the ideal: its dimension and a reduced basis.
    pub fn graded_slice(&self, m: u32) -> GradedSlice {
        let (ech, monos) = self.slice_echelon(m);
        let basis = ech
            .reduced()
            .into_iter()
            .map(|row| {
                Poly::from_terms(
                    self.nvars,
                    row.entries()
                        .iter()
                        .map(|(c, v)| (monos[*c].clone(), Rat::from_integer(v.clone()))),
                )
            })
            .collect();
        GradedSlice { degree: m, ambient: monos.len(), basis }
    }

    /// Dimension of the degree-`m` slice as a ℚ-vector space.
    pub fn graded_piece_dim(&self, m: u32) -> usize {
        if self.min_generator_degree().is_none_or(|d| d > m) {
            return 0;
        }
        self.slice_echelon(m).0.rank()
    }

    /// `binomial(n+m, n) - graded_piece_dim(m)`.
    pub fn quotient_dim(&self, m: u32) -> usize {
        let n = self.ambient_dim() as u64;
        binomial(n + u64::from(m), n) as usize - self.graded_piece_dim(m)
    }

    /// Reduced Gröbner basis (cached). Empty for the zero ideal.
    pub fn groebner(&self) -> &[Poly] {
        self.groebner.get_or_init(|| buchberger(&self.generators, None))
    }

    /// Leading monomials of the Gröbner basis.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.groebner()
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        normal_form(f, self.groebner())
    }

    /// Ideal membership via the Gröbner normal form. A polynomial in a
    /// different number of variables is never a member.
    pub fn contains(&self, f: &Poly) -> bool {
        f.nvars() == self.nvars && self.normal_form(f).is_zero()
    }

    /// `quotient_dim` computed from standard monomials of the Gröbner basis
    /// instead of linear algebra.
    pub fn quotient_dim_by_standard_monomials(&self, m: u32) -> usize {
        standard_monomial_count(&self.leading_monomials(), self.nvars, m)
    }

    /// Generators as `parse_poly` text.
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(Poly::to_string).collect()
    }
}

/// Free-function form of [`Ideal::power`].
pub fn ideal_power(ideal: &Ideal, r: u32) -> Ideal {
    ideal.power(r)
}

/// Free-function form of [`Ideal::contains`].
pub fn membership(f: &Poly, ideal: &Ideal) -> bool {
    ideal.contains(f)
}

/// A graded piece of an ideal with a reduced echelon basis.
#[derive(Debug, Clone)]
pub struct GradedSlice {
    pub degree: u32,
    /// Dimension of the full space of degree-`degree` forms.
    pub ambient: usize,
    /// Primitive integer forms with distinct leading monomials, largest
    /// leading monomial first; each is zero at the others' leading monomials.
    pub basis: Vec<Poly>,
}

impl GradedSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalgebra::parse_poly;

    pub(crate) fn twisted_cubic() -> Ideal {
        Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap()
    }

    /// Dimension of the span of all degree-`m` multiples of the generators,
    /// by listing every product as a dense rational vector and running
    /// textbook elimination. Shares nothing with `graded_slice`.
    fn brute_piece_dim(ideal: &Ideal, m: u32) -> usize {
        let monos = graded_monomials(ideal.nvars(), m);
        let mut vectors: Vec<Vec<Rat>> = Vec::new();
        for g in ideal.generators() {
            let dg = g.degree().unwrap();
            if dg > m {
                continue;
            }
            for mu in graded_monomials(ideal.nvars(), m - dg) {
                let prod = g.mul_term(&mu, &Rat::from_integer(1.into()));
                vectors.push(
                    monos
                        .iter()
                        .map(|mo| prod.coefficient(mo).cloned().unwrap_or_else(|| Rat::from_integer(0.into())))
                        .collect(),
                );
            }
        }
        let mut rank = 0;
        let cols = monos.len();
        for col in 0..cols {
            let Some(p) = (rank..vectors.len()).find(|&r| vectors[r][col] != Rat::from_integer(0.into())) else {
                continue;
            };
            vectors.swap(rank, p);
            for r in rank + 1..vectors.len() {
                let f = &vectors[r][col] / &vectors[rank][col];
                let pr = vectors[rank].clone();
                for (x, y) in vectors[r].iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn validation() {
        assert!(matches!(Ideal::parse(3, &["x0 + x1^2"]), Err(IdealFileError::Ideal(IdealError::NotHomogeneous { index: 0 }))));
        assert!(matches!(Ideal::parse(3, &["x0 - x0"]), Err(IdealFileError::Ideal(IdealError::ZeroGenerator { index: 0 }))));
        assert!(Ideal::new(3, vec![parse_poly("x0", 2).unwrap()]).is_err());
    }

    #[test]
    fn power_of_coordinate_ideal() {
        let i = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let sq = i.power(2);
        let expected: Vec<Poly> = ["x0^2", "x0*x1", "x1^2"].iter().map(|s| parse_poly(s, 3).unwrap()).collect();
        assert_eq!(sq.generators(), &expected[..]);
        assert_eq!(i.power(1), i);
    }

    #[test]
    fn power_of_twisted_cubic() {
        // multisets of size 2 from 3 generators
        let count = (0..3).flat_map(|a| (a..3).map(move |b| (a, b))).count();
        assert_eq!(count, 6);
        let sq = twisted_cubic().power(2);
        assert_eq!(sq.generators().len(), count);
        assert!(sq.generators().iter().all(|g| g.is_homogeneous_of_degree(4)));
    }

    #[test]
    fn power_deduplicates() {
        let i = Ideal::parse(2, &["x0", "x0"]).unwrap();
        assert_eq!(i.power(3).generators().len(), 1);
    }

    #[test]
    fn graded_piece_examples() {
        let i = Ideal::parse(3, &["x0"]).unwrap();
        assert_eq!(brute_piece_dim(&i, 2), 3);
        assert_eq!(i.graded_piece_dim(2), 3);
        let conic = Ideal::parse(3, &["x0*x2 - x1^2"]).unwrap();
        assert_eq!(brute_piece_dim(&conic, 3), 3);
        assert_eq!(conic.graded_piece_dim(3), 3);
        assert_eq!(conic.graded_piece_dim(1), 0);
        assert_eq!(twisted_cubic().graded_piece_dim(1), 0);
    }

    #[test]
    fn quotient_dim_examples() {
        let sq = Ideal::parse(3, &["x0", "x1"]).unwrap().power(2);
        assert_eq!(brute_piece_dim(&sq, 5), 21 - 3);
        assert_eq!(sq.quotient_dim(5), 3);
        assert_eq!(Ideal::zero(3).quotient_dim(5), 21);
        let conic = Ideal::parse(3, &["x0*x2 - x1^2"]).unwrap();
        assert_eq!(conic.quotient_dim(3), 7);
    }

    #[test]
    fn graded_piece_matches_brute_force_on_powers() {
        let tc = twisted_cubic();
        for r in 1..=2 {
            let p = tc.power(r);
            for m in 0..=6 {
                assert_eq!(p.graded_piece_dim(m), brute_piece_dim(&p, m), "r={r} m={m}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let pt2 = Ideal::parse(3, &["x0", "x1"]).unwrap().power(2);
        assert!(pt2.contains(&parse_poly("x0^2*x1", 3).unwrap()));
        let conic = Ideal::parse(3, &["x0*x2 - x1^2"]).unwrap();
        assert!(!conic.contains(&parse_poly("x0*x2", 3).unwrap()));
        assert_eq!(conic.normal_form(&parse_poly("x0*x2", 3).unwrap()), parse_poly("x0*x2", 3).unwrap());
        let tc2 = twisted_cubic().power(2);
        assert!(tc2.contains(&parse_poly("(x0*x2 - x1^2)^2", 4).unwrap()));
        assert!(!tc2.contains(&parse_poly("x0*x2 - x1^2", 4).unwrap()));
        assert!(Ideal::zero(2).contains(&Poly::zero(2)));
        assert!(!Ideal::zero(2).contains(&parse_poly("x0", 2).unwrap()));
    }

    #[test]
    fn slice_basis_spans_slice() {
        let s = Ideal::parse(3, &["x0", "x1"]).unwrap().power(2).graded_slice(2);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.basis.first().unwrap(), &parse_poly("x0^2", 3).unwrap());
    }
}
