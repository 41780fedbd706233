//! Exact checks of the Riemann–Roch type growth statements on ℙⁿ.
//!
//! Everything here works on exact integer sequences of quotient dimensions
//! and extracts leading coefficients by finite differences, so there is no
//! fitting noise.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::ideals::{hilbert_profile, GeomProfile, Ideal, ProfileError};
use crate::polyalgebra::{binomial, Rat};

/// One row of a fit table.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    /// The growth variable (`r` or `m`).
    pub var: u32,
    pub computed: u64,
    /// `predicted · var^exponent`.
    pub predicted_term: Rat,
    /// `computed − predicted_term`.
    pub residual: Rat,
}

/// Result of extracting a leading term from an exact sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub exponent: u32,
    pub leading: Rat,
    pub predicted: Rat,
    /// `max |residual| / predicted_term` over the rows with a positive
    /// predicted term.
    pub max_residual_ratio: f64,
    /// Constant `K` with `computed ≤ predicted·v^e + K·v^(e−1)` on the
    /// calibration rows.
    pub calibrated_k: Rat,
    pub violation: bool,
    pub rows: Vec<FitRow>,
}

impl AsymptoticFit {
    pub fn leading_f64(&self) -> f64 {
        self.leading.to_f64().unwrap_or(f64::NAN)
    }

    pub fn predicted_f64(&self) -> f64 {
        self.predicted.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("inconsistent profile: fitted exponent {fitted} but expected {expected}")]
    InconsistentProfile { fitted: u32, expected: u32 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Number of monomials of degree `< r` in `c` variables: `binomial(r−1+c, c)`.
pub fn colength_linear(c: u32, r: u32) -> u128 {
    assert!(r >= 1, "r must be positive");
    binomial(u64::from(r - 1 + c), u64::from(c))
}

/// Both sides of `binomial(n+e, n) ≤ eⁿ + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaCheck {
    pub n: u32,
    pub e: u32,
    pub lhs: u128,
    pub rhs: u128,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Sections of `𝒪(e)` on ℙⁿ against the self-intersection bound.
pub fn lemma_h0(n: u32, e: u32) -> LemmaCheck {
    assert!(n >= 1 && e >= 1, "n and e must be positive");
    let lhs = binomial(u64::from(n + e), u64::from(n));
    let rhs = u128::from(e).pow(n) + u128::from(n);
    LemmaCheck { n, e, lhs, rhs }
}

pub fn check_lemma_h0(n: u32, e: u32) -> bool {
    lemma_h0(n, e).holds()
}

/// Forward differences of every order; `table[k][i] = Δ^k s[i]`.
fn difference_table(values: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut table = vec![values.to_vec()];
    while table.last().is_some_and(|t| t.len() > 1) {
        let last = table.last().unwrap();
        let next = last.windows(2).map(|w| &w[1] - &w[0]).collect();
        table.push(next);
    }
    table
}

/// Highest order whose difference row is not identically zero.
fn highest_nonzero_order(table: &[Vec<BigInt>]) -> Option<usize> {
    table.iter().rposition(|row| row.iter().any(|v| !v.is_zero()))
}

fn factorial(k: u32) -> BigInt {
    (1..=u64::from(k)).map(BigInt::from).product()
}

fn rat(v: impl Into<BigInt>) -> Rat {
    Rat::from_integer(v.into())
}

fn rat_pow(base: u32, e: u32) -> Rat {
    rat(BigInt::from(base).pow(e))
}

fn residual_ratio(rows: &[FitRow]) -> f64 {
    rows.iter()
        .filter(|row| row.predicted_term > Rat::zero())
        .map(|row| (&row.residual / &row.predicted_term).to_f64().unwrap_or(f64::INFINITY).abs())
        .fold(0.0, f64::max)
}

/// Leading coefficient in `r` of `h⁰(𝒪(m) ⊗ 𝒪/I^r)`.
///
/// With `d = dim Y`, the `d`-th difference in `m` of `quotient_dim(I^r, ·)`
/// over `[m−d, m]` is the multiplicity of `𝒪/I^r` once `m` is past the
/// regularity; on ℙⁿ this is `colength(r) · deg Y`. Its `c`-th difference in
/// `r` divided by `c!`, times `m^d`, is the fitted leading coefficient of
/// `r^c m^d`. It is compared with `m^d · deg Y / c!`.
///
/// The table rows hold the raw `quotient_dim(I^r, m)` against
/// `predicted · r^c`. `K` is calibrated on the first half of the rows and
/// the check flags a row of the second half that exceeds
/// `predicted·r^c + K·r^(c−1)`, or a fitted leading term above the
/// prediction.
pub fn check_rr_inequality(
    ideal: &Ideal,
    profile: &GeomProfile,
    m: u32,
    r_max: u32,
) -> Result<AsymptoticFit, FitError> {
    let c = profile.c as u32;
    let d = profile.d as u32;
    if r_max < 2 || r_max < c + 1 {
        return Err(FitError::InsufficientData(format!(
            "r_max={r_max} gives no {c}-th difference in r (need r_max >= {})",
            (c + 1).max(2)
        )));
    }
    if m < d {
        return Err(FitError::InsufficientData(format!("m={m} is below dim Y={d}")));
    }
    let powers: Vec<Ideal> = (1..=r_max).map(|r| ideal.power(r)).collect();
    let dims: Vec<Vec<u64>> = {
        use rayon::prelude::*;
        powers
            .par_iter()
            .map(|p| (m - d..=m).map(|k| p.quotient_dim(k) as u64).collect())
            .collect()
    };
    // multiplicity sequence in r
    let mult: Vec<BigInt> = dims
        .iter()
        .map(|col| {
            let seq: Vec<BigInt> = col.iter().map(|&v| BigInt::from(v)).collect();
            difference_table(&seq)[d as usize][0].clone()
        })
        .collect();
    let table = difference_table(&mult);
    let fitted_order = highest_nonzero_order(&table).unwrap_or(0) as u32;
    // with r_max == c + 1 the order-(c+1) row is missing and an order above c
    // would go unseen; the check below still catches a lower order
    if fitted_order != c {
        return Err(FitError::InconsistentProfile { fitted: fitted_order, expected: c });
    }
    let m_d = rat_pow(m, d);
    let leading = rat(table[c as usize][0].clone()) / rat(factorial(c)) * &m_d;
    let predicted = &m_d * rat(profile.deg_y) * rat(profile.e_y) / rat(factorial(c));

    let rows: Vec<FitRow> = (1..=r_max)
        .zip(&dims)
        .map(|(r, col)| {
            let computed = *col.last().unwrap();
            let predicted_term = &predicted * rat_pow(r, c);
            let residual = rat(computed) - &predicted_term;
            FitRow { var: r, computed, predicted_term, residual }
        })
        .collect();

    let split = rows.len().div_ceil(2);
    let scale = |r: u32| rat_pow(r, c.saturating_sub(1));
    let calibrated_k = rows[..split]
        .iter()
        .map(|row| &row.residual / scale(row.var))
        .max()
        .unwrap_or_else(Rat::zero);
    let exceeds = rows[split..]
        .iter()
        .any(|row| rat(row.computed) > &row.predicted_term + &calibrated_k * scale(row.var));
    let violation = leading > predicted || exceeds;

    Ok(AsymptoticFit {
        exponent: fitted_order,
        leading,
        max_residual_ratio: residual_ratio(&rows),
        predicted,
        calibrated_k,
        violation,
        rows,
    })
}

/// Growth in `m` of `quotient_dim(I^r, m)` for `m = 1..=m_max`.
///
/// Exponent and leading coefficient come from the difference table of the
/// last `n + 2` values. The prediction is `1/n!` for the zero ideal and
/// `deg Y · colength(r) / d!` otherwise.
pub fn rr_growth_in_m(ideal: &Ideal, r: u32, m_max: u32) -> Result<AsymptoticFit, FitError> {
    let n = ideal.ambient_dim() as u32;
    let (d, predicted) = if ideal.is_zero() {
        (n, Rat::new(1.into(), factorial(n)))
    } else {
        let profile = hilbert_profile(ideal)?;
        let d = profile.d as u32;
        let col = colength_linear(profile.c as u32, r.max(1));
        (d, rat(profile.deg_y) * rat(col) / rat(factorial(d)))
    };
    if r == 0 {
        return Err(FitError::InsufficientData("r must be at least 1".into()));
    }
    if m_max < d + 3 {
        return Err(FitError::InsufficientData(format!("m_max={m_max} < dim Y + 3 = {}", d + 3)));
    }
    let power = ideal.power(r);
    let computed: Vec<u64> = {
        use rayon::prelude::*;
        (1..=m_max).into_par_iter().map(|m| power.quotient_dim(m) as u64).collect()
    };
    let window_len = (n as usize + 2).min(computed.len());
    let tail: Vec<BigInt> = computed[computed.len() - window_len..].iter().map(|&v| v.into()).collect();
    let table = difference_table(&tail);
    let exponent = highest_nonzero_order(&table).unwrap_or(0) as u32;
    let top = table[exponent as usize].last().unwrap().clone();
    let leading = rat(top) / rat(factorial(exponent));
    if exponent != d {
        return Err(FitError::InconsistentProfile { fitted: exponent, expected: d });
    }
    let rows: Vec<FitRow> = (1..=m_max)
        .zip(&computed)
        .map(|(m, &v)| {
            let predicted_term = &predicted * rat_pow(m, exponent);
            FitRow { var: m, computed: v, residual: rat(v) - &predicted_term, predicted_term }
        })
        .collect();
    let window_rows = &rows[rows.len() - window_len..];
    let calibrated_k = window_rows
        .iter()
        .map(|row| row.residual.clone() / rat_pow(row.var, exponent.saturating_sub(1)))
        .max()
        .unwrap_or_else(Rat::zero);
    Ok(AsymptoticFit {
        exponent,
        violation: leading != predicted,
        leading,
        predicted,
        max_residual_ratio: residual_ratio(window_rows),
        calibrated_k,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn colength_examples() {
        assert_eq!(colength_linear(2, 3), 6);
        assert_eq!(colength_linear(1, 5), 5);
        assert_eq!(colength_linear(3, 1), 1);
    }

    #[test]
    fn colength_counts_monomials() {
        for c in 1..=4u32 {
            for rr in 1..=8u32 {
                let brute: usize = (0..rr).map(|k| crate::polyalgebra::graded_monomials(c as usize, k).len()).sum();
                assert_eq!(colength_linear(c, rr), brute as u128);
            }
        }
    }

    #[test]
    fn lemma_examples() {
        let a = lemma_h0(1, 7);
        assert!(a.holds() && a.equality() && a.lhs == 8);
        let b = lemma_h0(2, 1);
        assert!(b.equality() && b.lhs == 3);
        let c = lemma_h0(3, 2);
        assert!(c.holds() && !c.equality());
        assert_eq!((c.lhs, c.rhs), (10, 11));
    }

    #[test]
    fn point_in_plane_rr() {
        let i = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let p = hilbert_profile(&i).unwrap();
        let fit = check_rr_inequality(&i, &p, 10, 6).unwrap();
        let dims: Vec<u64> = fit.rows.iter().map(|row| row.computed).collect();
        assert_eq!(dims, vec![1, 3, 6, 10, 15, 21]);
        assert_eq!(fit.leading, r(1, 2));
        assert_eq!(fit.predicted, r(1, 2));
        assert_eq!(fit.exponent, 2);
        assert!(!fit.violation);
    }

    #[test]
    fn line_in_space_rr() {
        let i = Ideal::parse(4, &["x0", "x1"]).unwrap();
        let p = hilbert_profile(&i).unwrap();
        let fit = check_rr_inequality(&i, &p, 8, 4).unwrap();
        assert_eq!(fit.leading, r(4, 1));
        assert_eq!(fit.predicted, r(4, 1));
        assert!(!fit.violation);
    }

    #[test]
    fn insufficient_r() {
        let i = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let p = hilbert_profile(&i).unwrap();
        assert!(matches!(check_rr_inequality(&i, &p, 10, 1), Err(FitError::InsufficientData(_))));
    }

    #[test]
    fn wrong_codimension_is_inconsistent() {
        let i = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let mut p = hilbert_profile(&i).unwrap();
        p.c = 1;
        p.d = 1;
        assert!(matches!(
            check_rr_inequality(&i, &p, 10, 5),
            Err(FitError::InconsistentProfile { .. })
        ));
    }

    #[test]
    fn growth_examples() {
        let fit = rr_growth_in_m(&Ideal::zero(3), 1, 8).unwrap();
        assert_eq!((fit.exponent, fit.leading.clone()), (2, r(1, 2)));
        assert!(!fit.violation);

        let cubic = Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
        let fit = rr_growth_in_m(&cubic, 1, 9).unwrap();
        assert_eq!((fit.exponent, fit.leading.clone()), (1, r(3, 1)));

        let point = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let fit = rr_growth_in_m(&point, 2, 9).unwrap();
        assert_eq!((fit.exponent, fit.leading.clone()), (0, r(3, 1)));
        assert_eq!(fit.predicted, r(3, 1));
    }
}
