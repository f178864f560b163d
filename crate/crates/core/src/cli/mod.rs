//! The `dconormal` command line.
//!
//! Every subcommand writes one JSON [`Report`] to stdout and a short summary
//! to stderr. Exit codes: 0 success, 1 the checked property is false, 2 input
//! error, 3 resource cap or sampling budget exhausted.

mod parse;

use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::conormal::{
    conormal_ideal, fiber_ideal, fiber_ideal_over_gaussian, transversality_check, AffineVariety,
    TransversalityVerdict, DEFAULT_TRANSVERSALITY_SAMPLES,
};
use crate::error::{Error, Result};
use crate::exactpoly::{ideal_dimension, rational_to_f64, Ideal, Rational, ResourceLimits};
use crate::grassmann::{chart_cover, Chart};
use crate::integrality::{characterize, dimension_bound_check, ChartSubvariety, Classification};
use crate::polar::polar_draws;
use crate::sample::PolySystem;
use crate::whitney::{
    condition_a_all_charts, condition_w_probe, delta_bound_property, limit_plane_oracle, WVerdict, WhitneyInstance,
};

pub use parse::{parse_axes, parse_file, parse_point, VarietyFile};

/// Parses the text of a `.var` file into a variety.
pub fn parse_variety(text: &str) -> Result<AffineVariety> {
    let f = parse_file(text)?;
    AffineVariety::from_polynomials(&f.ring, f.polynomials)
}

#[derive(Parser, Debug)]
#[command(name = "dconormal", version, about = "d-conormal spaces of affine varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    json_only: bool,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Debug, Clone)]
struct ChartChoice {
    /// Chart index in the lexicographic chart cover.
    #[arg(long, default_value_t = 0)]
    chart: usize,
    /// Use every chart of the cover.
    #[arg(long)]
    all_charts: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chart ideals of the d-conormal space.
    Conormal {
        file: String,
        #[arg(long = "d")]
        d: usize,
        #[command(flatten)]
        charts: ChartChoice,
        #[command(flatten)]
        common: Common,
    },
    /// Chart ideals of the Nash modification (d = dim X).
    Nash {
        file: String,
        #[command(flatten)]
        charts: ChartChoice,
        /// Also run the sampled transversality test.
        #[arg(long)]
        transversality: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Fiber of the d-conormal space over a point.
    Fiber {
        file: String,
        #[arg(long = "d")]
        d: usize,
        /// Comma separated coordinates, Gaussian rationals allowed (`1,0,i`).
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        charts: ChartChoice,
        #[command(flatten)]
        common: Common,
    },
    /// Integrality test for a chart subvariety of C^n x G(d,n).
    CheckIntegral {
        file: String,
        #[arg(long)]
        n: usize,
        #[arg(long = "d")]
        d: usize,
        #[arg(long, default_value_t = 0)]
        chart: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a chart subvariety is the d-conormal of its image.
    Characterize {
        file: String,
        #[arg(long)]
        n: usize,
        #[arg(long = "d")]
        d: usize,
        #[arg(long, default_value_t = 0)]
        chart: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Whitney condition a) along a coordinate subspace Y.
    WhitneyA {
        file: String,
        /// 1-based coordinate axes spanning Y, or `none`.
        #[arg(long)]
        y_axes: String,
        /// Curves for the limit-plane sampling oracle (0 skips it).
        #[arg(long, default_value_t = 0)]
        curves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Numeric probe of condition w) along a coordinate subspace Y.
    WhitneyW {
        file: String,
        #[arg(long)]
        y_axes: String,
        #[arg(long, default_value_t = 10)]
        curves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized test of the delta inequality.
    Delta {
        #[arg(long)]
        n: usize,
        #[arg(long = "d")]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Polar varieties for random projection kernels D.
    Polar {
        file: String,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Conormal { .. } => "conormal",
            Command::Nash { .. } => "nash",
            Command::Fiber { .. } => "fiber",
            Command::CheckIntegral { .. } => "check-integral",
            Command::Characterize { .. } => "characterize",
            Command::WhitneyA { .. } => "whitney-a",
            Command::WhitneyW { .. } => "whitney-w",
            Command::Delta { .. } => "delta",
            Command::Polar { .. } => "polar",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Conormal { common, .. }
            | Command::Nash { common, .. }
            | Command::Fiber { common, .. }
            | Command::CheckIntegral { common, .. }
            | Command::Characterize { common, .. }
            | Command::WhitneyA { common, .. }
            | Command::WhitneyW { common, .. }
            | Command::Delta { common, .. }
            | Command::Polar { common, .. } => common,
        }
    }

    fn file(&self) -> Option<&str> {
        match self {
            Command::Conormal { file, .. }
            | Command::Nash { file, .. }
            | Command::Fiber { file, .. }
            | Command::CheckIntegral { file, .. }
            | Command::Characterize { file, .. }
            | Command::WhitneyA { file, .. }
            | Command::WhitneyW { file, .. }
            | Command::Polar { file, .. } => Some(file),
            Command::Delta { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    VerdictFalse,
    InputError,
    ResourceLimit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerdictFalse => 1,
            Status::InputError => 2,
            Status::ResourceLimit => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// The JSON document written to stdout.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub input: Option<InputDigest>,
    pub status: Status,
    pub exit_code: i32,
    pub warnings: Vec<String>,
    pub results: Option<Value>,
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// What a run produced: the report, the stderr summary and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Option<Report>,
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::VariableMismatch => "variable-mismatch",
        Error::UnknownVariable(_) => "unknown-variable",
        Error::InvalidVariables(_) => "invalid-variables",
        Error::ResourceLimit { .. } => "resource-limit",
        Error::EmptyVariety => "empty-variety",
        Error::ZeroIdeal => "zero-ideal",
        Error::OutOfRange(_) => "out-of-range",
        Error::RankDeficient => "rank-deficient",
        Error::NoConvergence(_) => "no-convergence",
        Error::NotTransversal => "not-transversal",
        Error::ChartMismatch(_) => "chart-mismatch",
        Error::EmptySmoothLocus => "empty-smooth-locus",
        Error::NotOnVariety => "not-on-variety",
        Error::InsufficientSamples { .. } => "insufficient-samples",
        Error::JacobianRank { .. } => "jacobian-rank",
        Error::Parse { .. } => "parse",
    }
}

fn error_status(e: &Error) -> Status {
    match e {
        Error::ResourceLimit { .. } | Error::NoConvergence(_) | Error::InsufficientSamples { .. } => {
            Status::ResourceLimit
        }
        _ => Status::InputError,
    }
}

/// Result of one subcommand before it is wrapped in a [`Report`].
struct Finding {
    results: Value,
    holds: bool,
    summary: String,
    warnings: Vec<String>,
}

impl Finding {
    fn new(results: impl Serialize, holds: bool, summary: String) -> Self {
        Finding {
            results: serde_json::to_value(results).expect("results serialize"),
            holds,
            summary,
            warnings: Vec::new(),
        }
    }

    fn warn(mut self, w: &str) -> Self {
        self.warnings.push(w.to_string());
        self
    }
}

/// Runs the command line `args` (without the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("dconormal")).chain(args)) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    report: None,
                    stdout: text,
                    stderr: String::new(),
                    exit_code: 0,
                };
            }
            let report = Report {
                tool: "dconormal",
                version: env!("CARGO_PKG_VERSION"),
                command: argv.first().cloned().unwrap_or_default(),
                argv,
                input: None,
                status: Status::InputError,
                exit_code: 2,
                warnings: Vec::new(),
                results: None,
                error: Some(ErrorInfo {
                    kind: "usage".into(),
                    message: text.trim_end().to_string(),
                }),
                timings: None,
            };
            return Outcome {
                stdout: report.to_json(),
                stderr: text,
                exit_code: 2,
                report: Some(report),
            };
        }
    };
    let common = cli.command.common().clone();
    let start = Instant::now();
    let mut input = None;
    let result = install_limits().and_then(|()| {
        let text = match cli.command.file() {
            Some(path) => {
                let bytes = std::fs::read(path).map_err(|e| Error::Parse {
                    line: 0,
                    column: 0,
                    message: format!("cannot read {path}: {e}"),
                })?;
                input = Some(InputDigest {
                    path: path.to_string(),
                    sha256: hex::encode(Sha256::digest(&bytes)),
                });
                Some(String::from_utf8(bytes).map_err(|_| Error::Parse {
                    line: 0,
                    column: 0,
                    message: "input is not UTF-8".into(),
                })?)
            }
            None => None,
        };
        dispatch(&cli.command, text.as_deref())
    });
    let timings = common.timings.then(|| Timings {
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    });
    let name = cli.command.name();
    let (report, summary) = match result {
        Ok(f) => {
            let status = if f.holds { Status::Ok } else { Status::VerdictFalse };
            let summary = format!("{name}: {}", f.summary);
            (
                Report {
                    tool: "dconormal",
                    version: env!("CARGO_PKG_VERSION"),
                    command: name.into(),
                    argv,
                    input,
                    status,
                    exit_code: status.exit_code(),
                    warnings: f.warnings,
                    results: Some(f.results),
                    error: None,
                    timings,
                },
                summary,
            )
        }
        Err(e) => {
            let status = error_status(&e);
            (
                Report {
                    tool: "dconormal",
                    version: env!("CARGO_PKG_VERSION"),
                    command: name.into(),
                    argv,
                    input,
                    status,
                    exit_code: status.exit_code(),
                    warnings: Vec::new(),
                    results: None,
                    error: Some(ErrorInfo {
                        kind: error_kind(&e).into(),
                        message: e.to_string(),
                    }),
                    timings,
                },
                format!("{name}: error: {e}"),
            )
        }
    };
    Outcome {
        stdout: report.to_json(),
        stderr: if common.json_only { String::new() } else { summary + "\n" },
        exit_code: report.exit_code,
        report: Some(report),
    }
}

/// Entry point of the binary: runs the process arguments and prints.
pub fn main() -> i32 {
    let out = run(std::env::args_os().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.exit_code
}

fn env_limit(var: &str, default: usize) -> Result<usize> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::OutOfRange(format!("{var} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(default),
    }
}

fn install_limits() -> Result<()> {
    let d = ResourceLimits::default();
    ResourceLimits {
        max_degree: env_limit("CONORMAL_MAX_DEGREE", d.max_degree)?,
        max_basis: env_limit("CONORMAL_MAX_BASIS", d.max_basis)?,
    }
    .install();
    Ok(())
}

fn dispatch(cmd: &Command, text: Option<&str>) -> Result<Finding> {
    let text = text.unwrap_or("");
    match cmd {
        Command::Conormal { d, charts, .. } => run_conormal(&parse_variety(text)?, Some(*d), charts, false, 0),
        Command::Nash {
            charts,
            transversality,
            seed,
            ..
        } => run_conormal(&parse_variety(text)?, None, charts, *transversality, *seed),
        Command::Fiber { d, point, charts, .. } => run_fiber(&parse_variety(text)?, *d, point, charts),
        Command::CheckIntegral { n, d, chart, .. } => run_check_integral(text, *n, *d, *chart),
        Command::Characterize { n, d, chart, .. } => run_characterize(text, *n, *d, *chart),
        Command::WhitneyA { y_axes, curves, seed, .. } => {
            run_whitney_a(&parse_variety(text)?, &parse_axes(y_axes)?, *curves, *seed)
        }
        Command::WhitneyW { y_axes, curves, seed, .. } => {
            run_whitney_w(&parse_variety(text)?, &parse_axes(y_axes)?, *curves, *seed)
        }
        Command::Delta { n, d, t, trials, seed, .. } => run_delta(*n, *d, *t, *trials, *seed),
        Command::Polar { ell, k, draws, seed, .. } => run_polar(&parse_variety(text)?, *ell, *k, *draws, *seed),
    }
}

#[derive(Serialize)]
struct VarietySummary {
    variables: Vec<String>,
    generators: Vec<String>,
    n: usize,
    dim: usize,
}

fn variety_summary(x: &AffineVariety) -> Result<VarietySummary> {
    Ok(VarietySummary {
        variables: x.ring().names().to_vec(),
        generators: x.ideal().canonical_strings()?,
        n: x.n(),
        dim: x.dim(),
    })
}

#[derive(Serialize)]
struct ChartRef {
    index: usize,
    label: String,
}

fn select_charts(n: usize, d: usize, choice: &ChartChoice) -> Result<Vec<(usize, Chart)>> {
    let cover = chart_cover(n, d)?;
    if choice.all_charts {
        return Ok(cover.into_iter().enumerate().collect());
    }
    let count = cover.len();
    cover
        .into_iter()
        .nth(choice.chart)
        .map(|c| vec![(choice.chart, c)])
        .ok_or_else(|| Error::OutOfRange(format!("chart index {} out of range (0..{count})", choice.chart)))
}

fn nonempty_dim(i: &Ideal) -> Result<Option<usize>> {
    if i.is_unit()? {
        Ok(None)
    } else {
        Ok(Some(ideal_dimension(i)?))
    }
}

#[derive(Serialize)]
struct IdealSummary {
    generators: Vec<String>,
    /// `None` when the ideal is the unit ideal.
    dim: Option<usize>,
}

fn ideal_summary(i: &Ideal) -> Result<IdealSummary> {
    Ok(IdealSummary {
        generators: i.canonical_strings()?,
        dim: nonempty_dim(i)?,
    })
}

#[derive(Serialize)]
struct ConormalChart {
    index: usize,
    label: String,
    a_variables: Vec<String>,
    ideal: IdealSummary,
    expected_dim: usize,
    dimension_formula: Option<bool>,
    fiber_at_origin: Option<IdealSummary>,
    transversality: Option<TransversalityVerdict>,
}

#[derive(Serialize)]
struct ConormalResults {
    variety: VarietySummary,
    d: usize,
    charts: Vec<ConormalChart>,
}

fn origin_on(x: &AffineVariety) -> Option<Vec<Rational>> {
    let origin = vec![Rational::from_integer(0.into()); x.n()];
    x.contains_point(&origin).then_some(origin)
}

fn run_conormal(x: &AffineVariety, d: Option<usize>, choice: &ChartChoice, transversal: bool, seed: u64) -> Result<Finding> {
    let d = d.unwrap_or(x.dim());
    let charts = select_charts(x.n(), d, choice)?;
    let origin = origin_on(x);
    let rows = crate::par::try_map_slice(&charts, |(index, chart)| -> Result<ConormalChart> {
        let c = conormal_ideal(x, d, chart)?;
        let ideal = ideal_summary(c.ideal())?;
        let fiber_at_origin = match &origin {
            Some(o) if ideal.dim.is_some() => Some(ideal_summary(&fiber_ideal(&c, o)?)?),
            _ => None,
        };
        let transversality = if transversal && ideal.dim.is_some() {
            Some(transversality_check(&c, DEFAULT_TRANSVERSALITY_SAMPLES, seed)?)
        } else {
            None
        };
        Ok(ConormalChart {
            index: *index,
            label: chart.label(),
            a_variables: chart.a_names(),
            expected_dim: c.expected_dimension(),
            dimension_formula: ideal.dim.map(|k| k == c.expected_dimension()),
            ideal,
            fiber_at_origin,
            transversality,
        })
    })?;
    let holds = rows
        .iter()
        .all(|r| r.dimension_formula != Some(false) && r.transversality.as_ref().is_none_or(|t| t.transversal));
    let dims: Vec<String> = rows
        .iter()
        .map(|r| format!("{}: {}", r.label, r.ideal.dim.map_or("empty".into(), |k| k.to_string())))
        .collect();
    let summary = format!("d = {d}, expected dim {}, charts [{}]", rows[0].expected_dim, dims.join(", "));
    let results = ConormalResults {
        variety: variety_summary(x)?,
        d,
        charts: rows,
    };
    Ok(Finding::new(results, holds, summary).warn("X is assumed reduced and irreducible"))
}

#[derive(Serialize)]
struct FiberChart {
    index: usize,
    label: String,
    fiber: IdealSummary,
}

#[derive(Serialize)]
struct FiberResults {
    variety: VarietySummary,
    d: usize,
    point: Vec<String>,
    smooth: bool,
    expected_dim_if_smooth: usize,
    charts: Vec<FiberChart>,
    dim: Option<usize>,
    fiber_formula: Option<bool>,
}

fn gaussian_string(re: &Rational, im: &Rational) -> String {
    use num_traits::{Signed, Zero};
    match (re.is_zero(), im.is_zero()) {
        (_, true) => re.to_string(),
        (true, false) => format!("{im}i"),
        (false, false) => format!("{re}{}{}i", if im.is_negative() { "-" } else { "+" }, im.abs()),
    }
}

fn run_fiber(x: &AffineVariety, d: usize, point: &str, choice: &ChartChoice) -> Result<Finding> {
    let (re, im) = parse_point(point)?;
    if re.len() != x.n() {
        return Err(Error::OutOfRange(format!("point has {} coordinates, expected {}", re.len(), x.n())));
    }
    let real = im.iter().all(num_traits::Zero::is_zero);
    let charts = select_charts(x.n(), d, choice)?;
    let rows = crate::par::try_map_slice(&charts, |(index, chart)| -> Result<FiberChart> {
        let c = conormal_ideal(x, d, chart)?;
        let f = if real {
            fiber_ideal(&c, &re)?
        } else {
            fiber_ideal_over_gaussian(&c, &re, &im)?
        };
        Ok(FiberChart {
            index: *index,
            label: chart.label(),
            fiber: ideal_summary(&f)?,
        })
    })?;
    let system = PolySystem::new(x.ring(), x.ideal().generators());
    let p: Vec<Complex64> = re
        .iter()
        .zip(&im)
        .map(|(a, b)| Complex64::new(rational_to_f64(a), rational_to_f64(b)))
        .collect();
    let smooth = system.is_smooth_point(&p, x.codim());
    let expected = (d - x.dim()) * (x.n() - d);
    let dim = rows.iter().filter_map(|r| r.fiber.dim).max();
    let fiber_formula = if smooth { dim.map(|k| k == expected) } else { None };
    let summary = format!(
        "fiber dim {} ({}smooth point, expected {expected} if smooth)",
        dim.map_or("empty".into(), |k| k.to_string()),
        if smooth { "" } else { "non-" }
    );
    let results = FiberResults {
        variety: variety_summary(x)?,
        d,
        point: re.iter().zip(&im).map(|(a, b)| gaussian_string(a, b)).collect(),
        smooth,
        expected_dim_if_smooth: expected,
        charts: rows,
        dim,
        fiber_formula,
    };
    let mut f = Finding::new(results, fiber_formula != Some(false), summary);
    if !real {
        f = f.warn("Gaussian point: fibers are computed over Q(i) with w^2 + 1 = 0");
    }
    Ok(f)
}

fn chart_subvariety(text: &str, n: usize, d: usize, chart: usize) -> Result<ChartSubvariety> {
    let cover = chart_cover(n, d)?;
    let count = cover.len();
    let chart = cover
        .get(chart)
        .ok_or_else(|| Error::OutOfRange(format!("chart index {chart} out of range (0..{count})")))?;
    let f = parse_file(text)?;
    ChartSubvariety::new(chart, Ideal::new(&f.ring, f.polynomials)?)
}

#[derive(Serialize)]
struct BoundSummary {
    t_within_d: bool,
    dim_within_bound: bool,
    equality: bool,
}

#[derive(Serialize)]
struct IntegralResults {
    chart: ChartRef,
    variables: Vec<String>,
    generators: Vec<String>,
    verdict: crate::integrality::IntegralityVerdict,
    dimension_bound: Option<BoundSummary>,
}

const CONTRACT: &str = "Z is assumed reduced, irreducible and equidimensional";

fn run_check_integral(text: &str, n: usize, d: usize, chart: usize) -> Result<Finding> {
    let z = chart_subvariety(text, n, d, chart)?;
    let b = dimension_bound_check(&z)?;
    let holds = b.verdict.is_integral;
    let summary = match &b.verdict.witness {
        Some(w) => format!("not integral, witness form {} minor {}", w.form, w.minor),
        None if holds => format!("integral, dim {} <= bound {}", b.verdict.dim_z, b.verdict.bound),
        None => "not integral".into(),
    };
    let results = IntegralResults {
        chart: ChartRef {
            index: chart,
            label: z.chart().label(),
        },
        variables: z.ideal().ring().names().to_vec(),
        generators: z.ideal().canonical_strings()?,
        dimension_bound: holds.then_some(BoundSummary {
            t_within_d: b.t_within_d,
            dim_within_bound: b.dim_within_bound,
            equality: b.equality,
        }),
        verdict: b.verdict,
    };
    Ok(Finding::new(results, holds, summary).warn(CONTRACT))
}

#[derive(Serialize)]
struct CharacterizeResults {
    chart: ChartRef,
    variables: Vec<String>,
    generators: Vec<String>,
    class: Classification,
    verdict: crate::integrality::IntegralityVerdict,
    cross_validated: Option<bool>,
}

fn run_characterize(text: &str, n: usize, d: usize, chart: usize) -> Result<Finding> {
    let z = chart_subvariety(text, n, d, chart)?;
    let c = characterize(&z)?;
    let holds = c.class == Classification::IsDConormalOfImage && c.cross_validated != Some(false);
    let summary = format!("{:?}", c.class);
    let results = CharacterizeResults {
        chart: ChartRef {
            index: chart,
            label: z.chart().label(),
        },
        variables: z.ideal().ring().names().to_vec(),
        generators: z.ideal().canonical_strings()?,
        class: c.class,
        verdict: c.verdict,
        cross_validated: c.cross_validated,
    };
    Ok(Finding::new(results, holds, summary).warn(CONTRACT))
}

fn one_based(axes: &[usize]) -> Vec<usize> {
    axes.iter().map(|i| i + 1).collect()
}

#[derive(Serialize)]
struct WhitneyAResults {
    variety: VarietySummary,
    y_axes: Vec<usize>,
    t: usize,
    charts: Vec<crate::whitney::ChartVerdict>,
    condition_a: bool,
    inclusion: bool,
    oracle: Option<crate::whitney::LimitPlaneReport>,
    oracle_agrees: Option<bool>,
}

fn run_whitney_a(x: &AffineVariety, y: &[usize], curves: usize, seed: u64) -> Result<Finding> {
    let charts = condition_a_all_charts(x, y)?;
    let condition_a = charts.iter().all(|c| c.holds);
    let inclusion = charts.iter().all(|c| c.inclusion);
    let oracle = if curves > 0 {
        Some(limit_plane_oracle(x, y, curves, seed)?)
    } else {
        None
    };
    let oracle_agrees = oracle.as_ref().map(|o| o.contains_y == condition_a);
    let summary = format!(
        "condition a) {}{}",
        if condition_a { "holds" } else { "fails" },
        match oracle_agrees {
            Some(true) => ", sampling oracle agrees",
            Some(false) => ", sampling oracle disagrees",
            None => "",
        }
    );
    let results = WhitneyAResults {
        variety: variety_summary(x)?,
        y_axes: one_based(y),
        t: y.len(),
        charts,
        condition_a,
        inclusion,
        oracle,
        oracle_agrees,
    };
    Ok(Finding::new(results, condition_a && inclusion, summary))
}

#[derive(Serialize)]
struct WhitneyWResults {
    variety: VarietySummary,
    y_axes: Vec<usize>,
    t: usize,
    chart: String,
    kind: &'static str,
    report: crate::whitney::WRatioReport,
}

fn run_whitney_w(x: &AffineVariety, y: &[usize], curves: usize, seed: u64) -> Result<Finding> {
    let chart = chart_cover(x.n(), x.dim())?
        .into_iter()
        .find(|c| y.iter().all(|i| c.w0().contains(i)))
        .ok_or_else(|| Error::OutOfRange(format!("Y has dimension {} > dim X = {}", y.len(), x.dim())))?;
    let w = WhitneyInstance::new(x.clone(), y, chart)?;
    let report = condition_w_probe(&w, curves, seed)?;
    let holds = report.verdict == WVerdict::Bounded;
    let summary = format!("probe {:?}, max ratio {:.3e}", report.verdict, report.max_ratio);
    let results = WhitneyWResults {
        variety: variety_summary(x)?,
        y_axes: one_based(w.y_axes()),
        t: w.t(),
        chart: w.chart().label(),
        kind: "probe",
        report,
    };
    Ok(Finding::new(results, holds, summary).warn("condition w) is probed numerically; this is not a proof"))
}

#[derive(Serialize)]
struct DeltaResults {
    n: usize,
    d: usize,
    t: usize,
    trials: usize,
    seed: u64,
    slack: f64,
    report: crate::whitney::DeltaBoundReport,
}

fn run_delta(n: usize, d: usize, t: usize, trials: usize, seed: u64) -> Result<Finding> {
    let report = delta_bound_property(n, d, t, trials, seed)?;
    let summary = format!(
        "{} of {} trials pass, worst ratio {:.6}",
        report.trials - report.failures,
        report.trials,
        report.worst_ratio
    );
    let holds = report.passed;
    let results = DeltaResults {
        n,
        d,
        t,
        trials,
        seed,
        slack: crate::whitney::DELTA_SLACK,
        report,
    };
    Ok(Finding::new(results, holds, summary))
}

#[derive(Serialize)]
struct PolarDraw {
    draw: usize,
    ideal: IdealSummary,
    fiber_check: Option<bool>,
}

#[derive(Serialize)]
struct PolarResults {
    variety: VarietySummary,
    ell: usize,
    k: usize,
    m: usize,
    seed: u64,
    expected_dim: usize,
    draws: Vec<PolarDraw>,
    majority: Option<usize>,
    non_generic: Vec<usize>,
    consistent: bool,
}

fn run_polar(x: &AffineVariety, ell: usize, k: usize, draws: usize, seed: u64) -> Result<Finding> {
    if draws == 0 {
        return Err(Error::OutOfRange("at least one draw is needed".into()));
    }
    let p = polar_draws(x, k, ell, draws, seed)?;
    let rows = p
        .ideals
        .iter()
        .enumerate()
        .map(|(i, ideal)| {
            Ok(PolarDraw {
                draw: i,
                ideal: IdealSummary {
                    generators: ideal.canonical_strings()?,
                    dim: p.dims[i],
                },
                fiber_check: p.fiber_checks[i],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dim_ok = p.majority.is_none_or(|m| m == p.expected_dim);
    let fibers_ok = p.fiber_checks.iter().all(|f| *f != Some(false));
    let summary = format!(
        "majority dim {} (expected {} or empty), {} non-generic draw(s)",
        p.majority.map_or("empty".into(), |k| k.to_string()),
        p.expected_dim,
        p.non_generic.len()
    );
    let results = PolarResults {
        variety: variety_summary(x)?,
        ell,
        k,
        m: k + ell - x.dim(),
        seed,
        expected_dim: p.expected_dim,
        draws: rows,
        majority: p.majority,
        non_generic: p.non_generic,
        consistent: dim_ok && fibers_ok,
    };
    Ok(Finding::new(results, dim_ok && fibers_ok, summary))
}
