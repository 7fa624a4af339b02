//! Command-line front end.
//!
//! Exit codes: 0 success, 1 soundness violations found by `verify`,
//! 2 invalid input or a violated precondition, 3 support not certified.

mod records;

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    certify_compact_support, corollary1_bound, optimize_bound, theorem1_bound, theorem2_bound,
    theorem3_left, theorem3_right, BoundOptions, Method, SearchOptions, TailBound,
};
use crate::cf::{empirical_cf, load_samples, make_catalog_cf, CatalogSpec, CharFn};
use crate::error::{Error, Result};
use crate::oracle::{self, empirical_tail, validate, Fault, TailOracle, ViolationReport};
use crate::trigpoly::{TrigPoly, MAX_SIN_POWER};

pub use records::{round_sig, BoundRecord, CertifyRecord, SweepRecord, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NOT_CERTIFIED: i32 = 3;

const DIST_HELP: &str = "\
Distribution specs are FAMILY:P1,P2 with
  point_mass:c          normal:mu,sigma       cauchy:x0,gamma
  laplace:mu,b          exponential:lambda    uniform:lo,hi
  stable:alpha,scale    (f(t) = exp(-|scale t|^alpha), 0 < alpha <= 2)
  linnik:alpha,scale    (f(t) = 1 / (1 + |scale t|^alpha))
Sample files hold one number per line; blank lines and lines starting
with # are ignored, and a first line `x` is treated as a header.

Exit codes: 0 ok, 1 verify found violations, 2 invalid input,
3 support not certified.";

#[derive(Parser, Debug)]
#[command(name = "cf-tailbound", version, about = "Tail bounds from characteristic functions", after_help = DIST_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute one tail bound.
    Bound(BoundArgs),
    /// Compute bounds over a range of s, A or k.
    Sweep(SweepArgs),
    /// Check bounds against exact tails.
    Verify(VerifyArgs),
    /// Look for numerical evidence that a law has no mass outside [-A, A].
    Certify(CertifyArgs),
    /// Compute a bound for the empirical law of a sample file.
    Ecf(EcfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Theorem1,
    Corollary1,
    Theorem2,
    #[value(name = "theorem3-right")]
    Theorem3Right,
    #[value(name = "theorem3-left")]
    Theorem3Left,
}

impl MethodName {
    fn as_str(self) -> &'static str {
        match self {
            MethodName::Theorem1 => "theorem1",
            MethodName::Corollary1 => "corollary1",
            MethodName::Theorem2 => "theorem2",
            MethodName::Theorem3Right => "theorem3-right",
            MethodName::Theorem3Left => "theorem3-left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    #[value(name = "s")]
    S,
    #[value(name = "A")]
    A,
    #[value(name = "k")]
    K,
}

impl Axis {
    fn as_str(self) -> &'static str {
        match self {
            Axis::S => "s",
            Axis::A => "A",
            Axis::K => "k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultName {
    #[value(name = "halve-bounds")]
    HalveBounds,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog distribution, e.g. cauchy:0,1.
    #[arg(long, value_name = "FAMILY:PARAMS")]
    pub dist: Option<CatalogSpec>,
    /// File of samples; bounds apply to their empirical law.
    #[arg(long, value_name = "FILE")]
    pub samples: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MethodArgs {
    #[arg(long, value_enum)]
    pub method: MethodName,
    /// Cosine coefficients a0,a1,... of the theorem1 polynomial.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub cos: Option<String>,
    /// Sine coefficients b1,b2,... of the theorem1 polynomial (may be
    /// empty). Write --sin=-1,2 when the list starts with a minus sign.
    #[arg(long, value_name = "LIST", allow_negative_numbers = true, num_args = 0..=1, default_missing_value = "")]
    pub sin: Option<String>,
    /// Threshold. Trigonometric methods use A = 2 pi / s.
    #[arg(long = "A", value_name = "A")]
    pub a: Option<f64>,
    /// Free parameter; optimised when omitted.
    #[arg(long)]
    pub s: Option<f64>,
    /// Kernel power for corollary1 (sin^{2k}).
    #[arg(long)]
    pub k: Option<u32>,
    /// Largest k scanned when corollary1 runs without --k.
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    /// P(X <= 0) for theorem3-right; defaults to catalog metadata, else 1.
    #[arg(long)]
    pub f0_plus: Option<f64>,
    /// P(X < 0) for theorem3-left; defaults to catalog metadata, else 0.
    #[arg(long)]
    pub f0_minus: Option<f64>,
    /// Skip the non-negativity check on the theorem1 polynomial.
    #[arg(long)]
    pub allow_unchecked_poly: bool,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TolArgs {
    /// Quadrature relative tolerance (also CF_TAILBOUND_QUAD_RELTOL).
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Quadrature absolute tolerance.
    #[arg(long)]
    pub abs_tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Also print the exact tail of the sample (sample input only).
    #[arg(long)]
    pub compare_empirical: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct EcfArgs {
    #[arg(long, value_name = "FILE")]
    pub samples: PathBuf,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long)]
    pub compare_empirical: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long, value_enum)]
    pub axis: Axis,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Number of evenly spaced points; ignored for the k axis.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[group(id = "verify_source", multiple = false)]
pub struct VerifySource {
    /// Check a single catalog law instead of the built-in suite.
    #[arg(long, value_name = "FAMILY:PARAMS")]
    pub dist: Option<CatalogSpec>,
    /// Check the empirical law of a sample file.
    #[arg(long, value_name = "FILE")]
    pub samples: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: VerifySource,
    /// Corrupt every bound before checking (tests the checker).
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultName>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long = "A", value_name = "A")]
    pub a: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 200.0)]
    pub s_max: f64,
    #[command(flatten)]
    pub tolerances: TolArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Results go to `out` (or `--output`), diagnostics
/// to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PRECONDITION
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Bound(a) => cmd_bound(&load_source(&a.source)?, &a.method, a.compare_empirical, &a.output, out),
        Command::Ecf(a) => {
            let input = Input::from_samples(&a.samples)?;
            cmd_bound(&input, &a.method, a.compare_empirical, &a.output, out)
        }
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Certify(a) => cmd_certify(a, out),
    }
}

/// A loaded distribution.
struct Input {
    cf: CharFn<f64>,
    label: String,
    samples: Option<Vec<f64>>,
}

impl Input {
    fn from_spec(spec: &CatalogSpec) -> Result<Self> {
        Ok(Input { cf: make_catalog_cf(spec)?, label: spec.to_string(), samples: None })
    }

    fn from_samples(path: &PathBuf) -> Result<Self> {
        let xs = load_samples(path)?;
        let label = format!("samples:{}", path.display());
        let cf = empirical_cf(&xs)?.with_label(label.clone());
        Ok(Input { cf, label, samples: Some(xs) })
    }
}

fn load_source(src: &Source) -> Result<Input> {
    match (&src.dist, &src.samples) {
        (Some(spec), None) => Input::from_spec(spec),
        (None, Some(path)) => Input::from_samples(path),
        _ => Err(Error::ParameterDomain("give exactly one of --dist, --samples".into())),
    }
}

fn bound_options(tol: &TolArgs) -> Result<BoundOptions<f64>> {
    let mut opts = BoundOptions::from_env();
    if let Some(r) = tol.rel_tol {
        positive("--rel-tol", r)?;
        opts.rel_tol = r;
    }
    if let Some(a) = tol.abs_tol {
        positive("--abs-tol", a)?;
        opts.abs_tol = a;
    }
    Ok(opts)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::ParameterDomain(format!("{flag}: cannot parse {t:?} as a number")))
        })
        .collect()
}

/// Method inputs after per-point overrides.
#[derive(Clone, Copy)]
struct Point {
    a: Option<f64>,
    s: Option<f64>,
    k: Option<u32>,
}

/// Trigonometric methods tie `A = 2 pi / s`; exactly one of them is needed.
fn trig_s(p: Point, method: MethodName) -> Result<f64> {
    match (p.s, p.a) {
        (Some(s), None) => Ok(s),
        (None, Some(a)) => {
            positive("A", a)?;
            Ok(TAU / a)
        }
        (Some(_), Some(_)) => Err(Error::ParameterDomain(format!(
            "{} fixes A = 2 pi / s; give only one of --s, --A",
            method.as_str()
        ))),
        (None, None) => Err(Error::ParameterDomain(format!("{} needs --s or --A", method.as_str()))),
    }
}

fn compute(cf: &CharFn<f64>, m: &MethodArgs, p: Point, opts: &BoundOptions<f64>) -> Result<TailBound<f64>> {
    if m.method != MethodName::Theorem1 && (m.cos.is_some() || m.sin.is_some()) {
        return Err(Error::ParameterDomain("--cos/--sin apply only to theorem1".into()));
    }
    let search = SearchOptions::with_bound(*opts);
    let need_a = || {
        p.a.ok_or_else(|| Error::ParameterDomain(format!("{} needs --A", m.method.as_str())))
    };
    match m.method {
        MethodName::Theorem1 => {
            let cos = m
                .cos
                .as_deref()
                .ok_or_else(|| Error::ParameterDomain("theorem1 needs --cos".into()))?;
            let poly = TrigPoly::new(parse_list("--cos", cos)?, parse_list("--sin", m.sin.as_deref().unwrap_or(""))?)?;
            if poly.cos_coeffs().is_empty() {
                return Err(Error::ParameterDomain("--cos needs at least a0".into()));
            }
            let mut opts = *opts;
            opts.allow_unchecked_poly = m.allow_unchecked_poly;
            theorem1_bound(cf, &poly, trig_s(p, m.method)?, &opts)
        }
        MethodName::Corollary1 => match p.k {
            Some(k) => corollary1_bound(cf, k, trig_s(p, m.method)?, opts),
            None => {
                let a = match p.a {
                    Some(a) if p.s.is_none() => a,
                    _ => TAU / trig_s(p, m.method)?,
                };
                optimize_bound(cf, &Method::Corollary1 { k_max: m.k_max }, a, &search)
            }
        },
        MethodName::Theorem2 => {
            let a = need_a()?;
            match p.s {
                Some(s) => theorem2_bound(cf, a, s, opts),
                None => optimize_bound(cf, &Method::Theorem2, a, &search),
            }
        }
        MethodName::Theorem3Right => {
            let a = need_a()?;
            match p.s {
                Some(s) => theorem3_right(cf, a, s, m.f0_plus, opts),
                None => optimize_bound(cf, &Method::Theorem3Right { f0_plus: m.f0_plus }, a, &search),
            }
        }
        MethodName::Theorem3Left => {
            let a = need_a()?;
            match p.s {
                Some(s) => theorem3_left(cf, a, s, m.f0_minus, opts),
                None => optimize_bound(cf, &Method::Theorem3Left { f0_minus: m.f0_minus }, a, &search),
            }
        }
    }
}

fn emit(output: &OutputArgs, out: &mut dyn Write, text: &str) -> Result<()> {
    match &output.output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_bound(input: &Input, m: &MethodArgs, compare: bool, output: &OutputArgs, out: &mut dyn Write) -> Result<i32> {
    let opts = bound_options(&m.tol)?;
    let b = compute(&input.cf, m, Point { a: m.a, s: m.s, k: m.k }, &opts)?;
    let empirical = match (compare, &input.samples) {
        (false, _) => None,
        (true, Some(xs)) => Some(empirical_tail(xs, b.threshold, b.side)?),
        (true, None) => {
            return Err(Error::ParameterDomain("--compare-empirical needs --samples".into()))
        }
    };
    let record = BoundRecord::new(m.method.as_str(), &b, &input.label, empirical);
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => records::to_json(&record)?,
        Format::Csv => record.to_csv()?,
        Format::Table => record.to_table(),
    };
    emit(output, out, &text)?;
    Ok(EXIT_OK)
}

fn sweep_points(a: &SweepArgs) -> Result<Vec<(f64, Point)>> {
    let base = Point { a: a.method.a, s: a.method.s, k: a.method.k };
    if !(a.from.is_finite() && a.to.is_finite()) {
        return Err(Error::ParameterDomain("--from and --to must be finite".into()));
    }
    if a.axis == Axis::K {
        if a.method.method != MethodName::Corollary1 {
            return Err(Error::ParameterDomain("the k axis needs --method corollary1".into()));
        }
        let (lo, hi) = (a.from.round(), a.to.round());
        if !(lo >= 1.0 && hi >= lo && hi <= f64::from(MAX_SIN_POWER)) {
            return Err(Error::ParameterDomain(format!(
                "k range must satisfy 1 <= from <= to <= {MAX_SIN_POWER}"
            )));
        }
        return Ok((lo as u32..=hi as u32)
            .map(|k| (f64::from(k), Point { k: Some(k), ..base }))
            .collect());
    }
    if a.count == 0 {
        return Err(Error::ParameterDomain("--count must be at least 1".into()));
    }
    let values = oracle::lin_grid(a.from, a.to, a.count);
    Ok(values
        .into_iter()
        .map(|v| {
            let p = match a.axis {
                Axis::S => Point { s: Some(v), ..base },
                _ => Point { a: Some(v), ..base },
            };
            (v, p)
        })
        .collect())
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let input = load_source(&a.source)?;
    let opts = bound_options(&a.method.tol)?;
    let mut rows = Vec::new();
    for (value, p) in sweep_points(a)? {
        let row = match compute(&input.cf, &a.method, p, &opts) {
            Ok(b) => SweepRow::ok(a.axis.as_str(), value, &b),
            Err(e) => SweepRow::failed(a.axis.as_str(), value, &e),
        };
        rows.push(row);
    }
    let succeeded = rows.iter().any(|r| r.error.is_none());
    let record = SweepRecord {
        method: a.method.method.as_str().into(),
        distribution: input.label.clone(),
        rows,
    };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => records::to_json(&record)?,
        Format::Csv => record.to_csv()?,
        Format::Table => record.to_table(),
    };
    emit(&a.output, out, &text)?;
    if !succeeded {
        return Err(Error::ParameterDomain("no sweep point could be computed".into()));
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let fault = a.inject_fault.map(|FaultName::HalveBounds| Fault::HalveBounds);
    let opts = bound_options(&a.tol)?;
    let mut report = match (&a.source.dist, &a.source.samples) {
        (None, None) => oracle::run_default_suite(fault, opts)?,
        (Some(spec), _) => {
            let input = Input::from_spec(spec)?;
            let oracle = oracle::oracle_for(spec)?;
            run_plan(&input, &oracle, fault, opts)
        }
        (None, Some(path)) => {
            let input = Input::from_samples(path)?;
            let oracle = TailOracle::empirical(input.samples.as_deref().unwrap_or_default())?;
            run_plan(&input, &oracle, fault, opts)
        }
    };
    report.violations.iter_mut().for_each(records::round_violation);
    if report.checked == 0 {
        return Err(Error::Unsupported("no bound in the plan could be computed".into()));
    }
    let summary = format!(
        "checked {}, violations {}, skipped {}\n",
        report.checked,
        report.violations.len(),
        report.skipped.len()
    );
    let text = match a.output.format.unwrap_or(Format::Table) {
        Format::Json => records::to_json(&report)?,
        Format::Csv => records::violations_csv(&report)?,
        Format::Table if report.passed() => summary.clone(),
        Format::Table => format!("{summary}{}", records::to_json(&report)?),
    };
    emit(&a.output, out, &text)?;
    if a.output.output.is_some() || a.output.format == Some(Format::Json) {
        err.write_all(summary.as_bytes())?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn run_plan(input: &Input, oracle: &TailOracle, fault: Option<Fault>, opts: BoundOptions<f64>) -> ViolationReport {
    let mut plan = oracle::plan_for(&input.cf);
    plan.fault = fault;
    plan.options = opts;
    let mut report = validate(&input.cf, oracle, &plan);
    report.label = input.label.clone();
    report
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let input = load_source(&a.source)?;
    let opts = bound_options(&a.tolerances)?;
    let cert = certify_compact_support(&input.cf, a.a, a.tol, a.s_max, &opts)?;
    let record = CertifyRecord::new(&cert, &input.label);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => records::to_json(&record)?,
        Format::Csv => record.to_csv()?,
        Format::Table => record.to_table(),
    };
    emit(&a.output, out, &text)?;
    Ok(if cert.certified { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}
