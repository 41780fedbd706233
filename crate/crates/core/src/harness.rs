//! Sampling rational points of ℙⁿ and measuring the GCD height against the
//! slope of a certificate.
//!
//! Exhaustive samples are streamed in canonical (lexicographic) order in
//! fixed chunks, so reports and summaries do not depend on thread count.

use std::collections::BTreeSet;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::auxdiv::{format_real, Certificate};
use crate::heights::{GcdHeight, ProjPoint};
use crate::polyalgebra::IntPoly;

/// Default ceiling on the number of points a sample may contain.
pub const DEFAULT_CAP: u64 = 50_000_000;

/// Largest supported coordinate bound; keeps all arithmetic in `i64`.
pub const MAX_HEIGHT_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    Exhaustive,
    Random,
}

impl std::str::FromStr for SampleMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(SampleMode::Exhaustive),
            "random" => Ok(SampleMode::Random),
            other => Err(format!("unknown sample mode {other:?} (expected exhaustive or random)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Dimension of the projective space.
    pub n: usize,
    pub height_bound: u64,
    pub mode: SampleMode,
    /// Number of distinct points in random mode.
    pub count: u64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn exhaustive(n: usize, height_bound: u64) -> Self {
        SampleSpec { n, height_bound, mode: SampleMode::Exhaustive, count: 0, seed: 0 }
    }

    pub fn random(n: usize, height_bound: u64, count: u64, seed: u64) -> Self {
        SampleSpec { n, height_bound, mode: SampleMode::Random, count, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("height bound must be between 1 and {MAX_HEIGHT_BOUND}, got {0}")]
    BadHeightBound(u64),
    #[error("sample would contain {count} points, above the cap of {cap}")]
    TooManyPoints { count: u128, cap: u64 },
    #[error("requested {requested} distinct points but only {available} exist")]
    NotEnoughPoints { requested: u64, available: u128 },
    #[error("sample dimension n={got} does not match the certificate (n={expected})")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("every sampled point was excluded")]
    AllExcluded,
}

fn mobius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    let mut is_composite = vec![false; limit + 1];
    for p in 2..=limit {
        if is_composite[p] {
            continue;
        }
        for k in (p..=limit).step_by(p) {
            if k > p {
                is_composite[k] = true;
            }
            mu[k] = -mu[k];
        }
        let sq = p * p;
        for k in (sq..=limit).step_by(sq) {
            mu[k] = 0;
        }
    }
    mu
}

/// Number of canonical points of ℙⁿ(ℚ) with all coordinates in `[−H, H]`:
/// `Σ_d μ(d)·((2⌊H/d⌋+1)^(n+1) − 1)/2`.
pub fn exhaustive_count(n: usize, height_bound: u64) -> u128 {
    let h = height_bound as usize;
    let mu = mobius_table(h);
    let mut total: i128 = 0;
    for d in 1..=h {
        if mu[d] == 0 {
            continue;
        }
        let side = 2 * (h / d) as i128 + 1;
        let vectors = side.pow(n as u32 + 1) - 1;
        total += i128::from(mu[d]) * vectors / 2;
    }
    total as u128
}

fn check_bound(spec: &SampleSpec) -> Result<i64, SampleError> {
    if spec.height_bound == 0 || spec.height_bound > MAX_HEIGHT_BOUND {
        return Err(SampleError::BadHeightBound(spec.height_bound));
    }
    Ok(spec.height_bound as i64)
}

/// Fixed-size unit of exhaustive enumeration: every vector sharing a prefix
/// of length `min(2, n+1)`.
#[derive(Debug, Clone)]
struct Chunk {
    prefix: Vec<i64>,
}

fn exhaustive_chunks(n: usize, h: i64) -> Vec<Chunk> {
    let len = (n + 1).min(2);
    let mut out = Vec::new();
    let mut prefix = vec![-h; len];
    loop {
        // only prefixes that can start a canonical vector
        let first_nonzero = prefix.iter().find(|&&v| v != 0);
        let feasible = match first_nonzero {
            Some(&v) => v > 0,
            None => len < n + 1,
        };
        if feasible {
            out.push(Chunk { prefix: prefix.clone() });
        }
        if !advance(&mut prefix, h) {
            return out;
        }
    }
}

/// Lexicographic successor in `[−h, h]^k`; false after the last vector.
fn advance(v: &mut [i64], h: i64) -> bool {
    for slot in v.iter_mut().rev() {
        if *slot < h {
            *slot += 1;
            return true;
        }
        *slot = -h;
    }
    false
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn chunk_points(chunk: &Chunk, n: usize, h: i64) -> Vec<Vec<i64>> {
    let rest_len = n + 1 - chunk.prefix.len();
    let prefix_nonzero = chunk.prefix.iter().any(|&v| v != 0);
    let prefix_gcd = gcd_all(&chunk.prefix);
    let mut out = Vec::new();
    let mut rest = vec![-h; rest_len];
    loop {
        let canonical = if prefix_nonzero {
            true
        } else {
            rest.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
        };
        if canonical && rest.iter().fold(prefix_gcd, |g, &x| g.gcd(&x)) == 1 {
            let mut p = chunk.prefix.clone();
            p.extend_from_slice(&rest);
            out.push(p);
        }
        if !advance(&mut rest, h) {
            return out;
        }
    }
}

fn to_point(v: &[i64]) -> ProjPoint {
    ProjPoint::from_canonical(v.iter().map(|&x| BigInt::from(x)).collect())
}

/// Canonical points of the sample in ascending order, deduplicated.
pub fn sample_points(spec: &SampleSpec) -> Result<Vec<ProjPoint>, SampleError> {
    sample_points_capped(spec, DEFAULT_CAP)
}

pub fn sample_points_capped(spec: &SampleSpec, cap: u64) -> Result<Vec<ProjPoint>, SampleError> {
    let h = check_bound(spec)?;
    match spec.mode {
        SampleMode::Exhaustive => {
            let count = exhaustive_count(spec.n, spec.height_bound);
            if count > u128::from(cap) {
                return Err(SampleError::TooManyPoints { count, cap });
            }
            let chunks = exhaustive_chunks(spec.n, h);
            let parts: Vec<Vec<Vec<i64>>> = chunks.par_iter().map(|c| chunk_points(c, spec.n, h)).collect();
            Ok(parts.into_iter().flatten().map(|v| to_point(&v)).collect())
        }
        SampleMode::Random => random_points(spec, h, cap),
    }
}

fn random_points(spec: &SampleSpec, h: i64, cap: u64) -> Result<Vec<ProjPoint>, SampleError> {
    if spec.count > cap {
        return Err(SampleError::TooManyPoints { count: spec.count.into(), cap });
    }
    let available = exhaustive_count(spec.n, spec.height_bound);
    if u128::from(spec.count) > available {
        return Err(SampleError::NotEnoughPoints { requested: spec.count, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut raw = vec![0i64; spec.n + 1];
    while (seen.len() as u64) < spec.count {
        for slot in raw.iter_mut() {
            *slot = rng.gen_range(-h..=h);
        }
        let g = gcd_all(&raw);
        if g == 0 {
            continue;
        }
        let sign = if raw.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) { -1 } else { 1 };
        seen.insert(raw.iter().map(|&v| sign * v / g).collect());
    }
    Ok(seen.into_iter().map(|v| to_point(&v)).collect())
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub point: ProjPoint,
    pub weil: f64,
    /// Absent for points of `Y`.
    pub gcd_finite: Option<f64>,
    pub gcd_arch: Option<f64>,
    pub gcd_total: Option<f64>,
    /// `slope · weil`.
    pub slope_bound: f64,
    /// `gcd_total − slope · weil`; absent for excluded rows.
    pub excess: Option<f64>,
    /// `F(x) = 0` or `x ∈ Y`.
    pub excluded: bool,
}

/// Certificate data prepared for repeated evaluation.
pub struct BoundEvaluator {
    heights: GcdHeight,
    f: IntPoly,
    slope: f64,
    nvars: usize,
}

impl BoundEvaluator {
    pub fn new(cert: &Certificate) -> Self {
        BoundEvaluator {
            heights: GcdHeight::new(&cert.ideal),
            f: cert.f.integer_form(),
            slope: cert.slope_f64(),
            nvars: cert.ideal.nvars(),
        }
    }

    fn f_vanishes(&self, x: &ProjPoint) -> bool {
        if let Some(small) = x.coords_i64() {
            if let Some(v) = self.f.eval_i64(&small) {
                return v == 0;
            }
        }
        self.f.eval(x.coords()).expect("arity checked").sign() == num_bigint::Sign::NoSign
    }

    pub fn evaluate(&self, x: &ProjPoint) -> Result<ReportRow, SampleError> {
        if x.nvars() != self.nvars {
            return Err(SampleError::Dimension { expected: self.nvars - 1, got: x.nvars().saturating_sub(1) });
        }
        let h = self.heights.evaluate(x).expect("arity checked");
        let slope_bound = self.slope * h.weil;
        let on_f = self.f_vanishes(x);
        let excluded = on_f || h.vanishing;
        let finite = |v: f64| (!h.vanishing).then_some(v);
        Ok(ReportRow {
            point: x.clone(),
            weil: h.weil,
            gcd_finite: finite(h.gcd_finite),
            gcd_arch: finite(h.gcd_arch),
            gcd_total: finite(h.gcd_total),
            slope_bound,
            excess: (!excluded).then_some(h.gcd_total - slope_bound),
            excluded,
        })
    }
}

/// Evaluates every point; rows come back in canonical point order.
pub fn evaluate_bound(cert: &Certificate, points: &[ProjPoint]) -> Result<Vec<ReportRow>, SampleError> {
    let eval = BoundEvaluator::new(cert);
    let mut sorted: Vec<&ProjPoint> = points.iter().collect();
    sorted.sort();
    sorted.dedup();
    sorted.par_iter().map(|x| eval.evaluate(x)).collect()
}

/// Running statistics; merging in a fixed order gives reproducible sums.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Accumulator {
    pub n_points: u64,
    pub n_excluded: u64,
    pub sum_excess: f64,
    pub max_excess: Option<(f64, ProjPoint)>,
    pub max_ratio: Option<f64>,
    /// Rows with `gcd_total / weil > ratio_threshold`.
    pub n_ratio_above: u64,
    pub ratio_threshold: f64,
}

impl Accumulator {
    pub fn new(ratio_threshold: f64) -> Self {
        Accumulator { ratio_threshold, ..Default::default() }
    }

    pub fn push(&mut self, row: &ReportRow) {
        self.n_points += 1;
        if row.excluded {
            self.n_excluded += 1;
            return;
        }
        let excess = row.excess.expect("non-excluded row has an excess");
        self.sum_excess += excess;
        if self.max_excess.as_ref().is_none_or(|(m, _)| excess > *m) {
            self.max_excess = Some((excess, row.point.clone()));
        }
        let total = row.gcd_total.expect("non-excluded row has heights");
        if row.weil > 0.0 {
            let ratio = total / row.weil;
            self.max_ratio = Some(self.max_ratio.map_or(ratio, |m| m.max(ratio)));
            if ratio > self.ratio_threshold {
                self.n_ratio_above += 1;
            }
        }
    }

    /// Appends statistics of rows that come after this accumulator's rows.
    pub fn merge(&mut self, later: Accumulator) {
        self.n_points += later.n_points;
        self.n_excluded += later.n_excluded;
        self.sum_excess += later.sum_excess;
        if let Some((e, p)) = later.max_excess {
            if self.max_excess.as_ref().is_none_or(|(m, _)| e > *m) {
                self.max_excess = Some((e, p));
            }
        }
        if let Some(r) = later.max_ratio {
            self.max_ratio = Some(self.max_ratio.map_or(r, |m| m.max(r)));
        }
        self.n_ratio_above += later.n_ratio_above;
    }
}

/// Report statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub n_points: u64,
    pub n_excluded: u64,
    pub max_excess: f64,
    pub max_excess_point: ProjPoint,
    pub mean_excess: f64,
    /// Max of `gcd_total / weil` over rows with `weil > 0`.
    pub max_ratio: Option<f64>,
    pub n_ratio_above: u64,
    pub ratio_threshold: f64,
}

impl Summary {
    pub fn from_accumulator(acc: Accumulator) -> Result<Self, HarnessError> {
        let (max_excess, max_excess_point) = acc.max_excess.ok_or(HarnessError::AllExcluded)?;
        let kept = acc.n_points - acc.n_excluded;
        Ok(Summary {
            n_points: acc.n_points,
            n_excluded: acc.n_excluded,
            max_excess,
            max_excess_point,
            mean_excess: acc.sum_excess / kept as f64,
            max_ratio: acc.max_ratio,
            n_ratio_above: acc.n_ratio_above,
            ratio_threshold: acc.ratio_threshold,
        })
    }

    /// Summary JSON with the certificate digest and sample spec.
    pub fn to_json(&self, cert: &Certificate, spec: Option<&SampleSpec>) -> String {
        let real = |x: f64| -> serde_json::Value {
            format_real(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(serde_json::Value::Null, Into::into)
        };
        let value = serde_json::json!({
            "slope": format!("{}/{}", cert.slope.0, cert.slope.1),
            "coefficient": cert.coefficient.map(format_real),
            "n_points": self.n_points,
            "n_excluded": self.n_excluded,
            "max_excess": real(self.max_excess),
            "max_excess_point": self.max_excess_point.to_string(),
            "mean_excess": real(self.mean_excess),
            "max_ratio": self.max_ratio.map(real),
            "ratio_threshold": real(self.ratio_threshold),
            "n_ratio_above": self.n_ratio_above,
            "spec": spec,
            "certificate_digest": certificate_digest(cert),
        });
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    }
}

/// Threshold used for the ratio statistic: `slope + 1/2`.
pub fn default_ratio_threshold(cert: &Certificate) -> f64 {
    cert.slope_f64() + 0.5
}

pub fn summarize(rows: &[ReportRow], ratio_threshold: f64) -> Result<Summary, HarnessError> {
    let mut acc = Accumulator::new(ratio_threshold);
    for row in rows {
        acc.push(row);
    }
    Summary::from_accumulator(acc)
}

/// SHA-256 of the certificate JSON, hex encoded.
pub fn certificate_digest(cert: &Certificate) -> String {
    hex::encode(Sha256::digest(cert.to_json().as_bytes()))
}

const BATCH_CHUNKS: usize = 256;
const RANDOM_BATCH: usize = 1 << 14;

/// Evaluates the whole sample batch by batch, handing rows to `sink` in
/// canonical order. Exhaustive samples are never materialized in full.
pub fn stream_rows(
    cert: &Certificate,
    spec: &SampleSpec,
    cap: u64,
    mut sink: impl FnMut(&[ReportRow]),
) -> Result<(), SampleError> {
    if spec.n + 1 != cert.ideal.nvars() {
        return Err(SampleError::Dimension { expected: cert.n(), got: spec.n });
    }
    let h = check_bound(spec)?;
    let eval = BoundEvaluator::new(cert);
    match spec.mode {
        SampleMode::Exhaustive => {
            let count = exhaustive_count(spec.n, spec.height_bound);
            if count > u128::from(cap) {
                return Err(SampleError::TooManyPoints { count, cap });
            }
            for batch in exhaustive_chunks(spec.n, h).chunks(BATCH_CHUNKS) {
                let rows: Vec<Vec<ReportRow>> = batch
                    .par_iter()
                    .map(|c| {
                        chunk_points(c, spec.n, h)
                            .iter()
                            .map(|v| eval.evaluate(&to_point(v)).expect("dimension checked"))
                            .collect()
                    })
                    .collect();
                for part in rows {
                    sink(&part);
                }
            }
        }
        SampleMode::Random => {
            let points = random_points(spec, h, cap)?;
            for batch in points.chunks(RANDOM_BATCH) {
                let rows: Vec<ReportRow> =
                    batch.par_iter().map(|x| eval.evaluate(x).expect("dimension checked")).collect();
                sink(&rows);
            }
        }
    }
    Ok(())
}

/// Streams the sample into a summary without keeping rows.
pub fn bound_summary(cert: &Certificate, spec: &SampleSpec, cap: u64) -> Result<Summary, HarnessError> {
    let mut acc = Accumulator::new(default_ratio_threshold(cert));
    stream_rows(cert, spec, cap, |rows| {
        // per-batch accumulation keeps the merge order fixed
        let mut part = Accumulator::new(acc.ratio_threshold);
        for row in rows {
            part.push(row);
        }
        acc.merge(part);
    })?;
    Summary::from_accumulator(acc)
}

pub const CSV_HEADER: [&str; 8] =
    ["point", "weil", "gcd_finite", "gcd_arch", "gcd_total", "slope_bound", "excess", "excluded"];

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

/// CSV writer for report rows.
pub struct ReportWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(w: W) -> csv::Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(CSV_HEADER)?;
        Ok(ReportWriter { inner })
    }

    pub fn write_rows(&mut self, rows: &[ReportRow]) -> csv::Result<()> {
        for row in rows {
            self.inner.write_record([
                row.point.to_string(),
                format_real(row.weil),
                opt_real(row.gcd_finite),
                opt_real(row.gcd_arch),
                opt_real(row.gcd_total),
                format_real(row.slope_bound),
                opt_real(row.excess),
                row.excluded.to_string(),
            ])?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| e.into_error())
    }
}

pub fn write_report_csv<W: Write>(rows: &[ReportRow], w: W) -> csv::Result<W> {
    let mut writer = ReportWriter::new(w)?;
    writer.write_rows(rows)?;
    Ok(writer.finish()?)
}
