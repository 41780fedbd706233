//! The `gcdheight` command line.
//!
//! Exit codes: 0 success, 2 bad input (usage, parse errors, unreadable or
//! corrupt files), 3 empty subscheme, 4 search budget exhausted, 5 invalid
//! certificate, 6 every sampled point excluded, 7 inconsistent profile,
//! 8 a growth check flagged a violation, 9 output could not be written.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::auxdiv::{
    bound_coefficient, format_real, search_certificate_with, verify_certificate, Certificate, SearchError,
    SearchOptions,
};
use crate::harness::{
    default_ratio_threshold, sample_points_capped, stream_rows, Accumulator, HarnessError, ReportWriter, SampleError,
    SampleMode, SampleSpec, Summary, DEFAULT_CAP,
};
use crate::ideals::{hilbert_profile_with, parse_ideal_file, GeomProfile, Ideal, ProfileError, ProfileOptions};
use crate::rr_lab::{check_rr_inequality, lemma_h0, rr_growth_in_m, AsymptoticFit, FitError};

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const EMPTY_SUBSCHEME: i32 = 3;
    pub const BUDGET_EXHAUSTED: i32 = 4;
    pub const INVALID_CERTIFICATE: i32 = 5;
    pub const ALL_EXCLUDED: i32 = 6;
    pub const INCONSISTENT_PROFILE: i32 = 7;
    pub const VIOLATION: i32 = 8;
    pub const OUTPUT: i32 = 9;
}

#[derive(Debug, Parser)]
#[command(name = "gcdheight", version, about = "Generalized GCD heights on projective space")]
pub struct Cli {
    /// TOML file with default values; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, codimension, degree and bound coefficient of a subscheme.
    Profile(ProfileArgs),
    /// Search for an auxiliary form of least slope m/r.
    Search(SearchArgs),
    /// Recheck a certificate from scratch.
    Verify(VerifyArgs),
    /// Evaluate the height inequality of a certificate on sampled points.
    Bound(BoundArgs),
    /// Exact growth tables of quotient dimensions.
    Rrlab(RrlabArgs),
    /// Print sampled points.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exhaustive,
    Random,
}

impl From<ModeArg> for SampleMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => SampleMode::Exhaustive,
            ModeArg::Random => SampleMode::Random,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub ideal: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub ideal: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub r_budget: Option<u32>,
    #[arg(long)]
    pub m_budget: Option<u32>,
    /// Certificate output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fail with exit 4 unless the slope is within epsilon of the coefficient.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleOpts {
    #[arg(long)]
    pub height_bound: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Refuse samples larger than this many points.
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[command(flatten)]
    pub sample: SampleOpts,
    /// Output directory for `report.csv` and `summary.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `csv` writes the row report and the summary, `json` only the summary.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct RrlabArgs {
    #[arg(long)]
    pub ideal: Option<PathBuf>,
    /// Degree used for the growth in r.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub r_max: Option<u32>,
    /// Power used for the growth in m.
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Output directory for the fit tables.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub sample: SampleOpts,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Values a config file may provide.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ideal: Option<PathBuf>,
    pub cert: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub r_budget: Option<u32>,
    pub m_budget: Option<u32>,
    pub n: Option<usize>,
    pub height_bound: Option<u64>,
    pub mode: Option<ModeArg>,
    pub count: Option<u64>,
    pub seed: Option<u64>,
    pub cap: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub m: Option<u32>,
    pub r_max: Option<u32>,
    pub r: Option<u32>,
    pub m_max: Option<u32>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure::new(exit::INPUT, message)
    }

    fn output(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::new(exit::OUTPUT, format!("cannot write {}: {e}", path.display()))
    }
}

type CmdResult = Result<i32, Failure>;

impl From<ProfileError> for Failure {
    fn from(e: ProfileError) -> Self {
        let code = match e {
            ProfileError::EmptySubscheme => exit::EMPTY_SUBSCHEME,
            _ => exit::INCONSISTENT_PROFILE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SampleError> for Failure {
    fn from(e: SampleError) -> Self {
        Failure::input(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = match &cli.config {
        Some(path) => {
            let text = read_input(path)?;
            toml::from_str::<RunConfig>(&text)
                .map_err(|e| Failure::input(format!("config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Profile(a) => cmd_profile(a, &config, out),
        Command::Search(a) => cmd_search(a, &config, out, err),
        Command::Verify(a) => cmd_verify(a, &config, out),
        Command::Bound(a) => cmd_bound(a, &config, out),
        Command::Rrlab(a) => cmd_rrlab(a, &config, out),
        Command::Sample(a) => cmd_sample(a, &config, out),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn required<T>(flag: Option<T>, config: Option<T>, name: &str) -> Result<T, Failure> {
    flag.or(config).ok_or_else(|| Failure::input(format!("missing --{name}")))
}

fn load_ideal(path: &Path) -> Result<Ideal, Failure> {
    let text = read_input(path)?;
    parse_ideal_file(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_certificate(path: &Path) -> Result<Certificate, Failure> {
    let text = read_input(path)?;
    Certificate::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(exit::OUTPUT, format!("stdout: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::output(path, e))
}

fn coefficient_text(profile: &GeomProfile) -> String {
    bound_coefficient(profile).map_or_else(|_| "n/a".to_string(), format_real)
}

fn cmd_profile(a: ProfileArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let ideal = load_ideal(&required(a.ideal, cfg.ideal.clone(), "ideal")?)?;
    let (p, hp) = hilbert_profile_with(&ideal, ProfileOptions::default())?;
    let coefficient = coefficient_text(&p);
    let text = match a.format.or(cfg.format) {
        Some(Format::Json) => {
            let v = serde_json::json!({
                "n": p.n, "d": p.d, "c": p.c, "degY": p.deg_y, "eY": p.e_y,
                "coefficient": coefficient,
                "hilbert_polynomial": hp.to_string(),
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        _ => format!("n={} d={} c={} degY={} coefficient={}\nhilbert_polynomial={}\n", p.n, p.d, p.c, p.deg_y, coefficient, hp),
    };
    emit(out, &text)?;
    Ok(exit::OK)
}

fn cmd_search(a: SearchArgs, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let ideal_path = required(a.ideal, cfg.ideal.clone(), "ideal")?;
    let epsilon = required(a.epsilon, cfg.epsilon, "epsilon")?;
    let r_budget = required(a.r_budget, cfg.r_budget, "r-budget")?;
    let m_budget = required(a.m_budget, cfg.m_budget, "m-budget")?;
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Failure::input(format!("--epsilon must be positive, got {epsilon}")));
    }
    let out_path = a.out.or(cfg.out.clone());
    let ideal = load_ideal(&ideal_path)?;
    let outcome = match search_certificate_with(&ideal, epsilon, r_budget, m_budget, SearchOptions { strict: a.strict })
    {
        Ok(o) => o,
        Err(SearchError::Profile(e)) => return Err(e.into()),
        Err(SearchError::BadEpsilon(e)) => return Err(Failure::input(format!("--epsilon must be positive, got {e}"))),
        Err(e @ SearchError::BudgetExhausted { .. }) => {
            return Err(Failure::new(
                exit::BUDGET_EXHAUSTED,
                format!("{e} (r_budget={r_budget}, m_budget={m_budget})"),
            ))
        }
    };
    let cert = &outcome.certificate;
    let summary = format!(
        "slope={} coefficient={} within_epsilon={}\n",
        cert.slope_rational(),
        cert.coefficient.map_or_else(|| "n/a".to_string(), format_real),
        outcome.within_epsilon
    );
    match out_path {
        Some(path) => {
            write_file(&path, &cert.to_json())?;
            emit(out, &summary)?;
        }
        None => {
            emit(out, &cert.to_json())?;
            let _ = err.write_all(summary.as_bytes());
        }
    }
    Ok(exit::OK)
}

fn cmd_verify(a: VerifyArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let cert = load_certificate(&required(a.cert, cfg.cert.clone(), "cert")?)?;
    let v = verify_certificate(&cert);
    if v.is_valid() {
        emit(out, &format!("valid: m={} r={} slope={}\n", cert.m, cert.r, cert.slope_rational()))?;
        Ok(exit::OK)
    } else {
        let mut text = String::from("invalid certificate\n");
        for d in &v.diagnostics {
            text.push_str(&format!("  {d}\n"));
        }
        emit(out, &text)?;
        Ok(exit::INVALID_CERTIFICATE)
    }
}

fn sample_spec(n: usize, s: &SampleOpts, cfg: &RunConfig) -> Result<(SampleSpec, u64), Failure> {
    let height_bound = required(s.height_bound, cfg.height_bound, "height-bound")?;
    let mode: SampleMode = s.mode.or(cfg.mode).unwrap_or(ModeArg::Exhaustive).into();
    let count = s.count.or(cfg.count);
    let count = match mode {
        SampleMode::Random => count.ok_or_else(|| Failure::input("random mode needs --count"))?,
        SampleMode::Exhaustive => count.unwrap_or(0),
    };
    let seed = s.seed.or(cfg.seed).unwrap_or(0);
    let cap = s.cap.or(cfg.cap).unwrap_or(DEFAULT_CAP);
    Ok((SampleSpec { n, height_bound, mode, count, seed }, cap))
}

fn cmd_bound(a: BoundArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let cert_path = required(a.cert, cfg.cert.clone(), "cert")?;
    let dir = required(a.out, cfg.out.clone(), "out")?;
    let format = a.format.or(cfg.format).unwrap_or(Format::Csv);
    let cert = load_certificate(&cert_path)?;
    let (spec, cap) = sample_spec(cert.n(), &a.sample, cfg)?;
    let v = verify_certificate(&cert);
    if !v.is_valid() {
        return Err(Failure::new(exit::INVALID_CERTIFICATE, format!("certificate rejected: {}", v.diagnostics.join("; "))));
    }
    fs::create_dir_all(&dir).map_err(|e| Failure::output(&dir, e))?;

    let csv_path = dir.join("report.csv");
    let mut writer = match format {
        Format::Csv => {
            let file = fs::File::create(&csv_path).map_err(|e| Failure::output(&csv_path, e))?;
            Some(ReportWriter::new(BufWriter::new(file)).map_err(|e| Failure::output(&csv_path, e))?)
        }
        Format::Json => None,
    };
    let mut acc = Accumulator::new(default_ratio_threshold(&cert));
    let mut write_error = None;
    stream_rows(&cert, &spec, cap, |rows| {
        let mut part = Accumulator::new(acc.ratio_threshold);
        for row in rows {
            part.push(row);
        }
        acc.merge(part);
        if let Some(w) = writer.as_mut() {
            if write_error.is_none() {
                write_error = w.write_rows(rows).err();
            }
        }
    })?;
    if let Some(e) = write_error {
        return Err(Failure::output(&csv_path, e));
    }
    if let Some(w) = writer {
        w.finish().map_err(|e| Failure::output(&csv_path, e))?;
    }
    let summary = match Summary::from_accumulator(acc) {
        Ok(s) => s,
        Err(HarnessError::AllExcluded) => {
            return Err(Failure::new(exit::ALL_EXCLUDED, "every sampled point was excluded"))
        }
        Err(HarnessError::Sample(e)) => return Err(e.into()),
    };
    let summary_path = dir.join("summary.json");
    write_file(&summary_path, &summary.to_json(&cert, Some(&spec)))?;
    emit(
        out,
        &format!(
            "points={} excluded={} max_excess={} mean_excess={} max_ratio={}\n",
            summary.n_points,
            summary.n_excluded,
            format_real(summary.max_excess),
            format_real(summary.mean_excess),
            summary.max_ratio.map_or_else(|| "n/a".to_string(), format_real),
        ),
    )?;
    Ok(exit::OK)
}

fn fit_csv(var: &str, fit: &AsymptoticFit) -> String {
    let mut s = format!("{var},computed_dim,predicted_leading_term,residual\n");
    for row in &fit.rows {
        s.push_str(&format!("{},{},{},{}\n", row.var, row.computed, row.predicted_term, row.residual));
    }
    s
}

fn fit_error(e: FitError) -> Failure {
    match e {
        FitError::InsufficientData(m) => Failure::input(format!("insufficient data: {m}")),
        FitError::InconsistentProfile { .. } => Failure::new(exit::INCONSISTENT_PROFILE, e.to_string()),
        FitError::Profile(p) => p.into(),
    }
}

fn cmd_rrlab(a: RrlabArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let ideal = load_ideal(&required(a.ideal, cfg.ideal.clone(), "ideal")?)?;
    let dir = required(a.out, cfg.out.clone(), "out")?;
    let (profile, _) = hilbert_profile_with(&ideal, ProfileOptions::default())?;
    let n = profile.n as u32;
    let r_max = a.r_max.or(cfg.r_max).unwrap_or(5);
    let m = a.m.or(cfg.m).unwrap_or(ideal.max_generator_degree() * r_max + n);
    let r = a.r.or(cfg.r).unwrap_or(1);
    let m_max = a.m_max.or(cfg.m_max).unwrap_or(ideal.max_generator_degree() * r + n + 4);
    fs::create_dir_all(&dir).map_err(|e| Failure::output(&dir, e))?;

    let mut violations = Vec::new();
    let mut report = String::new();

    let lemma: Vec<_> = (1..=6).flat_map(|n| (1..=20).map(move |e| lemma_h0(n, e))).collect();
    let mut lemma_csv = String::from("n,e,binomial,bound,holds,equality\n");
    for l in &lemma {
        lemma_csv.push_str(&format!("{},{},{},{},{},{}\n", l.n, l.e, l.lhs, l.rhs, l.holds(), l.equality()));
    }
    write_file(&dir.join("lemma_h0.csv"), &lemma_csv)?;
    let failed = lemma.iter().filter(|l| !l.holds()).count();
    if failed > 0 {
        violations.push(format!("h0 bound fails at {failed} grid points"));
    }
    report.push_str(&format!("lemma_h0 grid n<=6 e<=20: {} checked, {} failures\n", lemma.len(), failed));

    let fit_r = check_rr_inequality(&ideal, &profile, m, r_max).map_err(fit_error)?;
    write_file(&dir.join("rr_inequality.csv"), &fit_csv("r", &fit_r))?;
    report.push_str(&format!(
        "growth in r at m={m}: exponent={} leading={} predicted={} K={} violation={}\n",
        fit_r.exponent, fit_r.leading, fit_r.predicted, fit_r.calibrated_k, fit_r.violation
    ));
    if fit_r.violation {
        violations.push("growth in r exceeds the predicted leading term".into());
    }

    let fit_m = rr_growth_in_m(&ideal, r, m_max).map_err(fit_error)?;
    write_file(&dir.join("rr_growth.csv"), &fit_csv("m", &fit_m))?;
    report.push_str(&format!(
        "growth in m at r={r}: exponent={} leading={} predicted={} violation={}\n",
        fit_m.exponent, fit_m.leading, fit_m.predicted, fit_m.violation
    ));
    if fit_m.violation {
        violations.push("growth in m disagrees with the predicted leading term".into());
    }
    emit(out, &report)?;
    if violations.is_empty() {
        Ok(exit::OK)
    } else {
        Err(Failure::new(exit::VIOLATION, violations.join("; ")))
    }
}

fn cmd_sample(a: SampleArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let n = required(a.n, cfg.n, "n")?;
    if n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let (spec, cap) = sample_spec(n, &a.sample, cfg)?;
    let points = sample_points_capped(&spec, cap)?;
    let text = match a.format.or(cfg.format).unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("point\n");
            for p in &points {
                s.push_str(&format!("{p}\n"));
            }
            s
        }
        Format::Json => {
            let v = serde_json::json!({ "spec": spec, "points": points });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
    };
    match a.out.or(cfg.out.clone()) {
        Some(path) => write_file(&path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(exit::OK)
}
