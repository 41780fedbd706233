//! Auxiliary divisors: forms of degree `m` vanishing to order `r` along `Y`,
//! packaged as checkable certificates of the slope `m/r`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::ideals::{buchberger, hilbert_profile, normal_form, GeomProfile, Ideal, ProfileError};
use crate::polyalgebra::{binomial, parse_poly, Poly, Rat};

pub const TOOLKIT_NAME: &str = "gcdheight";
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `(deg Y · n! / c!)^(1/c)`; requires codimension at least 2.
pub fn bound_coefficient(profile: &GeomProfile) -> Result<f64, ProfileError> {
    profile.validate_for_bound()?;
    let radicand: BigInt = BigInt::from(profile.deg_y)
        * ((profile.c as u64 + 1)..=(profile.n as u64)).map(BigInt::from).product::<BigInt>();
    let value = radicand.to_f64().expect("finite radicand");
    let root = value.powf(1.0 / profile.c as f64);
    // snap exact integer roots
    let rounded = root.round();
    if BigInt::from(rounded as u64).pow(profile.c as u32) == radicand {
        return Ok(rounded);
    }
    Ok(root)
}

/// Whether the degree-`m` forms outnumber the conditions for vanishing to
/// order `r` along `Y`.
pub fn dimension_criterion(ideal: &Ideal, m: u32, r: u32) -> bool {
    let n = ideal.ambient_dim() as u64;
    let total = binomial(n + u64::from(m), n);
    total > ideal.power(r).quotient_dim(m) as u128
}

/// First basis element of the degree-`m` slice of `I^r`, if any.
pub fn find_section(ideal: &Ideal, m: u32, r: u32) -> Option<Poly> {
    ideal.power(r).graded_slice(m).basis.into_iter().next()
}

/// Degree-`m` form in `I^r` witnessing the slope `m/r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub ideal: Ideal,
    pub m: u32,
    pub r: u32,
    pub f: Poly,
    /// `(m, r)`; the slope is `m/r`.
    pub slope: (u32, u32),
    /// Bound coefficient of `Y`; absent when the codimension is below 2.
    pub coefficient: Option<f64>,
}

impl Certificate {
    pub fn new(ideal: Ideal, m: u32, r: u32, f: Poly, coefficient: Option<f64>) -> Self {
        // stored at the precision it is written with
        let coefficient = coefficient.map(|c| format_real(c).parse().unwrap_or(c));
        Certificate { ideal, m, r, f, slope: (m, r), coefficient }
    }

    pub fn n(&self) -> usize {
        self.ideal.ambient_dim()
    }

    pub fn slope_rational(&self) -> Rat {
        Rat::new(self.slope.0.into(), self.slope.1.max(1).into())
    }

    pub fn slope_f64(&self) -> f64 {
        f64::from(self.slope.0) / f64::from(self.slope.1)
    }

    pub fn to_json(&self) -> String {
        let file = CertificateFile {
            nvars: self.ideal.nvars(),
            generators: self.ideal.generator_strings(),
            m: self.m,
            r: self.r,
            f: self.f.to_string(),
            slope: [self.slope.0, self.slope.1],
            coefficient: self.coefficient.map(format_real),
            created_by: TOOLKIT_NAME.to_string(),
            toolkit_version: TOOLKIT_VERSION.to_string(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let file: CertificateFile = serde_json::from_str(text)?;
        let gens: Vec<&str> = file.generators.iter().map(String::as_str).collect();
        let ideal = Ideal::parse(file.nvars, &gens).map_err(|e| CertificateError::Content(e.to_string()))?;
        let f = parse_poly(&file.f, file.nvars).map_err(|e| CertificateError::Content(format!("F: {e}")))?;
        let coefficient = match file.coefficient {
            None => None,
            Some(s) => Some(
                s.parse::<f64>()
                    .map_err(|_| CertificateError::Content(format!("coefficient {s:?} is not a decimal")))?,
            ),
        };
        Ok(Certificate {
            ideal,
            m: file.m,
            r: file.r,
            f,
            slope: (file.slope[0], file.slope[1]),
            coefficient,
        })
    }
}

/// Twelve significant digits, trailing zeros dropped but at least one
/// fractional digit kept (`3.0`, `0.69314718056`).
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        let t = s.trim_end_matches('0');
        if t.ends_with('.') { format!("{t}0") } else { t.to_string() }
    } else {
        format!("{s}.0")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    nvars: usize,
    generators: Vec<String>,
    m: u32,
    r: u32,
    #[serde(rename = "F")]
    f: String,
    slope: [u32; 2],
    coefficient: Option<String>,
    created_by: String,
    toolkit_version: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed certificate: {0}")]
    Content(String),
}

/// Outcome of [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub diagnostics: Vec<String>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Rechecks a certificate from scratch: `F ≠ 0`, `F` homogeneous of degree
/// `m`, `slope = (m, r)` and `F ∈ I^r` by a Gröbner normal form.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let mut diagnostics = Vec::new();
    let nvars = cert.ideal.nvars();
    if cert.r == 0 {
        diagnostics.push("r must be at least 1".to_string());
    }
    if cert.slope != (cert.m, cert.r) {
        diagnostics.push(format!(
            "slope mismatch: recorded {}/{} but (m, r) = ({}, {})",
            cert.slope.0, cert.slope.1, cert.m, cert.r
        ));
    }
    if cert.f.nvars() != nvars {
        diagnostics.push(format!("variable count mismatch: F has {} but the ideal {}", cert.f.nvars(), nvars));
        return Verification { diagnostics };
    }
    if cert.f.is_zero() {
        diagnostics.push("F is zero".to_string());
        return Verification { diagnostics };
    }
    if !cert.f.is_homogeneous() {
        diagnostics.push("F is not homogeneous".to_string());
    } else if cert.f.degree() != Some(cert.m) {
        diagnostics.push(format!(
            "degree mismatch: F has degree {} but m = {}",
            cert.f.degree().unwrap_or(0),
            cert.m
        ));
    }
    if cert.r >= 1 {
        let power = cert.ideal.power(cert.r);
        // homogeneous input: a basis truncated at deg F decides membership
        let bound = cert.f.degree().unwrap_or(0);
        let basis = buchberger(power.generators(), Some(bound));
        if !normal_form(&cert.f, &basis).is_zero() {
            diagnostics.push(format!("membership fails: F is not in the ideal power r={}", cert.r));
        }
    }
    Verification { diagnostics }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("search budget exhausted{}", best.map(|(m, r)| format!("; best slope found {m}/{r}")).unwrap_or_default())]
    BudgetExhausted { best: Option<(u32, u32)> },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Search result with the comparison against the bound coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub certificate: Certificate,
    pub profile: GeomProfile,
    /// `slope ≤ coefficient + ε`; false when there is no coefficient.
    pub within_epsilon: bool,
    /// Minimal `m` per `r`, `None` if no `m ≤ m_budget` works.
    pub minimal_m: Vec<(u32, Option<u32>)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Report a slope above `coefficient + ε` as budget exhaustion.
    pub strict: bool,
}

pub fn search_certificate(
    ideal: &Ideal,
    epsilon: f64,
    r_budget: u32,
    m_budget: u32,
) -> Result<SearchOutcome, SearchError> {
    search_certificate_with(ideal, epsilon, r_budget, m_budget, SearchOptions::default())
}

/// Scans `r = 1..=r_budget` and for each the least `m ≤ m_budget` meeting
/// the dimension criterion, keeping the least slope `m/r`; ties go to the
/// smaller `r`.
pub fn search_certificate_with(
    ideal: &Ideal,
    epsilon: f64,
    r_budget: u32,
    m_budget: u32,
    opts: SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(SearchError::BadEpsilon(epsilon));
    }
    let profile = hilbert_profile(ideal)?;
    let coefficient = bound_coefficient(&profile).ok();
    let min_deg = ideal.min_generator_degree().unwrap_or(u32::MAX);

    use rayon::prelude::*;
    let minimal_m: Vec<(u32, Option<u32>)> = (1..=r_budget)
        .into_par_iter()
        .map(|r| {
            let power = ideal.power(r);
            let start = min_deg.saturating_mul(r).max(1);
            let m = (start..=m_budget).find(|&m| power.graded_piece_dim(m) > 0);
            (r, m)
        })
        .collect();

    let best = minimal_m
        .iter()
        .filter_map(|&(r, m)| m.map(|m| (m, r)))
        .min_by(|a, b| slope_cmp(*a, *b).then(a.1.cmp(&b.1)));
    let Some((m, r)) = best else {
        return Err(SearchError::BudgetExhausted { best: None });
    };
    let within_epsilon = coefficient.is_some_and(|c| f64::from(m) / f64::from(r) <= c + epsilon);
    if opts.strict && !within_epsilon {
        return Err(SearchError::BudgetExhausted { best: Some((m, r)) });
    }
    let f = find_section(ideal, m, r).expect("criterion holds at the minimal m");
    Ok(SearchOutcome {
        certificate: Certificate::new(ideal.clone(), m, r, f, coefficient),
        profile,
        within_epsilon,
        minimal_m,
    })
}

fn slope_cmp(a: (u32, u32), b: (u32, u32)) -> Ordering {
    (u64::from(a.0) * u64::from(b.1)).cmp(&(u64::from(b.0) * u64::from(a.1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> Ideal {
        Ideal::parse(3, &["x0", "x1"]).unwrap()
    }

    fn cubic() -> Ideal {
        Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap()
    }

    #[test]
    fn coefficients() {
        assert_eq!(bound_coefficient(&GeomProfile::new(2, 0, 1).unwrap()).unwrap(), 1.0);
        assert_eq!(bound_coefficient(&GeomProfile::new(3, 1, 3).unwrap()).unwrap(), 3.0);
        // n!/c! = 1 for points, agreeing with the n-th root of the point count
        assert_eq!(bound_coefficient(&GeomProfile::new(4, 0, 1).unwrap()).unwrap(), 1.0);
        assert_eq!(bound_coefficient(&GeomProfile::new(4, 0, 16).unwrap()).unwrap(), 2.0);
        let c = bound_coefficient(&GeomProfile::new(4, 1, 1).unwrap()).unwrap();
        assert!((c - 4f64.cbrt()).abs() < 1e-12);
        assert!(bound_coefficient(&GeomProfile::new(2, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn criterion_examples() {
        assert!(dimension_criterion(&point(), 2, 2));
        assert!(!dimension_criterion(&point(), 1, 2));
    }

    #[test]
    fn section_examples() {
        assert_eq!(find_section(&point(), 1, 1).unwrap().to_string(), "x0");
        let q = find_section(&point(), 2, 2).unwrap();
        assert!(q.is_homogeneous_of_degree(2));
        assert!(q.terms().all(|(mo, _)| mo.exponents()[2] == 0));
        assert!(find_section(&point(), 1, 2).is_none());
    }

    #[test]
    fn searches() {
        let out = search_certificate(&point(), 0.1, 5, 10).unwrap();
        assert_eq!(out.certificate.slope_rational(), Rat::from_integer(1.into()));
        assert!(out.within_epsilon);
        assert!(verify_certificate(&out.certificate).is_valid());

        let out = search_certificate(&cubic(), 0.1, 2, 8).unwrap();
        assert_eq!(out.certificate.slope, (2, 1));
        assert_eq!(out.minimal_m, vec![(1, Some(2)), (2, Some(4))]);
        assert!(verify_certificate(&out.certificate).is_valid());

        assert_eq!(
            search_certificate(&point(), 0.1, 1, 0),
            Err(SearchError::BudgetExhausted { best: None })
        );
    }

    #[test]
    fn verification_diagnostics() {
        let good = Certificate::new(point(), 1, 1, find_section(&point(), 1, 1).unwrap(), Some(1.0));
        assert!(verify_certificate(&good).is_valid());

        let mut wrong_degree = good.clone();
        wrong_degree.m = 2;
        wrong_degree.slope = (2, 1);
        let v = verify_certificate(&wrong_degree);
        assert!(v.diagnostics.iter().any(|d| d.starts_with("degree mismatch")));

        let other = Ideal::parse(3, &["x1", "x2"]).unwrap();
        let bad = Certificate::new(other, 1, 1, parse_poly("x0", 3).unwrap(), None);
        let v = verify_certificate(&bad);
        assert!(v.diagnostics.iter().any(|d| d.starts_with("membership fails")));
    }

    #[test]
    fn json_round_trip() {
        let out = search_certificate(&cubic(), 0.5, 2, 8).unwrap();
        let text = out.certificate.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, out.certificate);
        assert_eq!(back.to_json(), text);
        assert!(Certificate::from_json("{ not json").is_err());
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(3.0), "3.0");
        assert_eq!(format_real(24f64.powf(0.25)), "2.2133638394");
        assert_eq!(format_real(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(format_real(-1.5), "-1.5");
        assert_eq!(format_real(123456.789), "123456.789");
        assert_eq!(format_real(1.0e13), "10000000000000.0");
        assert_eq!(format_real(0.0), "0.0");
    }
}
