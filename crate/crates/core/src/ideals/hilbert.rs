//! Hilbert polynomial extraction and the numeric profile `(n, d, c, deg Y)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Ideal;
use crate::polyalgebra::Rat;

/// Univariate polynomial in `m` with rational coefficients, lowest degree
/// first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertPolynomial {
    coeffs: Vec<Rat>,
}

impl HilbertPolynomial {
    pub fn coefficients(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, m: i64) -> Rat {
        let x = Rat::from_integer(m.into());
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * &x + c)
    }

    /// Interpolates the unique polynomial of degree `< values.len()` with
    /// `P(start + i) = values[i]`, via Newton forward differences.
    pub fn interpolate(start: i64, values: &[i64]) -> Self {
        let mut diffs: Vec<Rat> = values.iter().map(|&v| Rat::from_integer(v.into())).collect();
        let mut newton = Vec::with_capacity(values.len());
        while !diffs.is_empty() {
            newton.push(diffs[0].clone());
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        // sum_k newton[k] * binom(m - start, k)
        let mut coeffs = vec![Rat::zero(); values.len()];
        let mut basis = vec![Rat::one()]; // binom(m - start, k) as a polynomial in m
        for (k, a) in newton.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                coeffs[i] += a * b;
            }
            // basis *= (m - start - k) / (k + 1)
            let shift = Rat::from_integer(BigInt::from(start + k as i64));
            let denom = Rat::from_integer(BigInt::from(k as i64 + 1));
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b / &denom;
                next[i] -= b * &shift / &denom;
            }
            basis = next;
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        HilbertPolynomial { coeffs }
    }
}

impl std::fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "m")?;
                    } else {
                        write!(f, "m^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Numeric invariants of `Y ⊂ ℙⁿ` entering the bound coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeomProfile {
    /// Dimension of the ambient projective space.
    pub n: usize,
    /// Dimension of `Y`.
    pub d: usize,
    /// Codimension `n - d`.
    pub c: usize,
    /// Degree of `Y`.
    pub deg_y: u64,
    /// Multiplicity of the ambient space along `Y`; always 1 on ℙⁿ.
    pub e_y: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("the ideal defines the empty subscheme (quotient dimension vanishes on the sampled window)")]
    EmptySubscheme,
    #[error("Hilbert polynomial not stable: window at m={start} gives {first}, window at m={} gives {second}", start + 1)]
    WindowInstability { start: u32, first: String, second: String },
    #[error("leading coefficient {leading} of the Hilbert polynomial does not give an integral degree")]
    NonIntegralDegree { leading: String },
    #[error("invalid profile: {0}")]
    Invalid(String),
}

impl GeomProfile {
    pub fn new(n: usize, d: usize, deg_y: u64) -> Result<Self, ProfileError> {
        if d > n {
            return Err(ProfileError::Invalid(format!("d={d} exceeds n={n}")));
        }
        if deg_y == 0 {
            return Err(ProfileError::Invalid("degree must be at least 1".into()));
        }
        Ok(GeomProfile { n, d, c: n - d, deg_y, e_y: 1 })
    }

    /// Checks the hypotheses of the GCD bound: codimension at least 2,
    /// positive degree, multiplicity one.
    pub fn validate_for_bound(&self) -> Result<(), ProfileError> {
        if self.c != self.n.saturating_sub(self.d) || self.d > self.n {
            return Err(ProfileError::Invalid("c must equal n - d".into()));
        }
        if self.c < 2 {
            return Err(ProfileError::Invalid(format!("codimension {} < 2", self.c)));
        }
        if self.deg_y < 1 {
            return Err(ProfileError::Invalid("degree must be at least 1".into()));
        }
        if self.e_y != 1 {
            return Err(ProfileError::Invalid("multiplicity must be 1 on projective space".into()));
        }
        Ok(())
    }
}

/// Tuning for [`hilbert_profile_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileOptions {
    /// First degree of the interpolation window. Defaults to
    /// `max_generator_degree * r_context + n + 1`.
    pub window_start: Option<u32>,
    pub r_context: u32,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { window_start: None, r_context: 1 }
    }
}

/// Profile with default options.
pub fn hilbert_profile(ideal: &Ideal) -> Result<GeomProfile, ProfileError> {
    hilbert_profile_with(ideal, ProfileOptions::default()).map(|(p, _)| p)
}

/// Interpolates the Hilbert polynomial on `[m0, m0 + n]` and accepts it only
/// if the window starting at `m0 + 1` gives the same polynomial.
pub fn hilbert_profile_with(
    ideal: &Ideal,
    opts: ProfileOptions,
) -> Result<(GeomProfile, HilbertPolynomial), ProfileError> {
    let n = ideal.ambient_dim();
    let m0 = opts
        .window_start
        .unwrap_or(ideal.max_generator_degree() * opts.r_context + n as u32 + 1);
    let values: Vec<i64> = (m0..=m0 + n as u32 + 1)
        .map(|m| ideal.quotient_dim(m) as i64)
        .collect();
    if values.iter().all(|&v| v == 0) {
        return Err(ProfileError::EmptySubscheme);
    }
    let first = HilbertPolynomial::interpolate(i64::from(m0), &values[..=n]);
    let second = HilbertPolynomial::interpolate(i64::from(m0) + 1, &values[1..]);
    if first != second {
        return Err(ProfileError::WindowInstability {
            start: m0,
            first: first.to_string(),
            second: second.to_string(),
        });
    }
    let d = first.degree().ok_or(ProfileError::EmptySubscheme)?;
    let lc = first.leading_coefficient().expect("nonzero polynomial");
    let factorial: BigInt = (1..=d as u64).map(BigInt::from).product();
    let deg = lc * Rat::from_integer(factorial);
    if !deg.is_integer() || !deg.is_positive() {
        return Err(ProfileError::NonIntegralDegree { leading: lc.to_string() });
    }
    let deg_y = deg
        .to_integer()
        .to_u64()
        .ok_or_else(|| ProfileError::NonIntegralDegree { leading: lc.to_string() })?;
    Ok((GeomProfile { n, d, c: n - d, deg_y, e_y: 1 }, first))
}
