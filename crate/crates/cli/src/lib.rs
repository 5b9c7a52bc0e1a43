//! Command-line front end for `paircollect`.
//!
//! Every subcommand builds a list of [`ReportRow`]s under a fixed column list
//! and hands it to [`emit_report`]. Nothing here depends on the worker count,
//! so identical arguments always give byte-identical output.

pub mod arule;
pub mod report;

use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use paircollect::distributions::{
    moments_m, moments_s, moments_s_asym, moments_s_f64, moments_y, pmf_x, pmf_y,
    pmf_y_exact_range, tail_x, tail_y, tail_y_exact, CltRegime,
};
use paircollect::limitlaws::{
    cf_limit_fixed_k, dprime_diagnostic, exact_normalization, ks_distance, normalization_for,
    scaled_tail_limit, LimitLaw, Regime,
};
use paircollect::oracle::enumerate_laws;
use paircollect::simulate::{normalize_sample, run_experiment, Backend, SimConfig, Target};
use paircollect::{combinatorics::EXACT_HARMONIC_LIMIT, distributions::max_mean_asym_gap, Error};

pub use arule::ARule;
pub use report::{emit_report, Format, ReportRow, Value};

#[derive(Debug, Parser)]
#[command(
    name = "paircollect",
    version,
    about = "Waiting times for collecting pairs in an urn"
)]
pub struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Jsonl)]
    pub format: OutputFormat,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Simulation worker threads; never changes the output.
    #[arg(long, global = true, env = "PAIRCOLLECT_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Jsonl => Format::JsonLines,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point probabilities P{X = k} or P{Y = k} for k = 2..=kmax.
    Pmf(PmfArgs),
    /// Tail probability P{X > m} or P{Y > m}.
    Tail(TailArgs),
    /// Exact (and optionally asymptotic) mean and variance.
    Moments(MomentsArgs),
    /// Monte Carlo summary of a waiting time.
    Simulate(SimulateArgs),
    /// KS distance to the limit law along a grid of n.
    Converge(ConvergeArgs),
    /// Deterministic convergence diagnostics.
    Diagnose(DiagnoseArgs),
    /// Brute-force enumeration of all draw sequences, compared with closed forms.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    X,
    Y,
}

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[arg(long, value_enum)]
    pub dist: Dist,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long)]
    pub kmax: u64,
    /// Exact rationals instead of floating point.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[arg(long, value_enum)]
    pub dist: Dist,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentTargetArg {
    Y,
    S,
    M,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, value_enum)]
    pub target: MomentTargetArg,
    #[arg(long)]
    pub n: u64,
    #[arg(long, conflicts_with = "a")]
    pub j: Option<u64>,
    #[arg(long)]
    pub a: Option<u64>,
    /// Add the asymptotic main terms.
    #[arg(long)]
    pub asym: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimTargetArg {
    Y,
    S,
    M,
    Kmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Process,
    Inversion,
    /// Process for n <= 50, inversion above.
    Auto,
}

impl BackendArg {
    fn resolve(self, n: u64) -> Backend {
        match self {
            BackendArg::Process => Backend::Process,
            BackendArg::Inversion => Backend::Inversion,
            BackendArg::Auto => Backend::default_for(n),
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub target: SimTargetArg,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Gumbel,
    Kthmax,
    Normal,
    Erlang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Fixedk,
    Sublinear,
    Proportional,
    Nearcomplete,
    Kthmax,
    Fullmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    /// Main-term centering and scaling of the limit theorem.
    Main,
    /// Exact mean and standard deviation.
    Exact,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub law: LawArg,
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long = "n-grid", value_delimiter = ',', required = true)]
    pub n_grid: Vec<u64>,
    #[arg(long)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// How a_n depends on n: k:<int>, floor-frac:<num>/<den>, n-minus:<int>,
    /// floor-sqrt or n-minus-sqrt. Defaults depend on the regime.
    #[arg(long = "a-rule")]
    pub a_rule: Option<ARule>,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value_t = NormalizationArg::Main)]
    pub normalization: NormalizationArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    TailLimit,
    Dprime,
    CfIdentity,
    AsymMoments,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long, value_enum)]
    pub check: CheckArg,
    #[arg(long = "n-grid", value_delimiter = ',')]
    pub n_grid: Vec<u64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
    /// Block count for dprime (default 10); order for cf-identity (default 1..=5).
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub len: usize,
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Param(String),
    SizeGuard(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::SizeGuard(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Param(m) => write!(f, "error: {m}"),
            CliError::SizeGuard(m) => write!(f, "error: {m}"),
            CliError::Io(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeGuard(_) => CliError::SizeGuard(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn param<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Param(msg.into()))
}

/// A finished report: its column list and rows.
pub struct Report {
    pub columns: &'static [&'static str],
    pub rows: Vec<ReportRow>,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let report = build_report(&cli.command, cli.workers)?;
    emit_report(out, report.columns, &report.rows, cli.format.into())?;
    Ok(())
}

pub fn build_report(command: &Command, workers: Option<usize>) -> CliResult<Report> {
    match command {
        Command::Pmf(a) => pmf(a),
        Command::Tail(a) => tail(a),
        Command::Moments(a) => moments(a),
        Command::Simulate(a) => simulate(a, workers),
        Command::Converge(a) => converge(a, workers),
        Command::Diagnose(a) => diagnose(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn dist_j(dist: Dist, j: Option<u64>) -> CliResult<u64> {
    match (dist, j) {
        (Dist::X, None) => Ok(1),
        (Dist::X, Some(_)) => param("--j applies to --dist y only"),
        (Dist::Y, Some(j)) => Ok(j),
        (Dist::Y, None) => param("--dist y requires --j"),
    }
}

fn dist_name(dist: Dist) -> &'static str {
    match dist {
        Dist::X => "x",
        Dist::Y => "y",
    }
}

fn pmf(args: &PmfArgs) -> CliResult<Report> {
    let j = dist_j(args.dist, args.j)?;
    if args.kmax < 2 {
        return param(format!("--kmax = {} must be at least 2", args.kmax));
    }
    let values: Vec<Value> = if args.exact {
        pmf_y_exact_range(args.n, j, args.kmax)?
            .into_iter()
            .map(Value::Rational)
            .collect()
    } else {
        (2..=args.kmax)
            .map(|k| {
                let p = match args.dist {
                    Dist::X => pmf_x(args.n, k),
                    Dist::Y => pmf_y(args.n, j, k),
                };
                p.map(Value::Prob)
            })
            .collect::<Result<_, _>>()?
    };
    let rows = (2..)
        .zip(values)
        .map(|(k, p)| {
            ReportRow::new()
                .with("dist", dist_name(args.dist))
                .with("n", args.n)
                .with("j", (args.dist == Dist::Y).then_some(j))
                .with("k", k as u64)
                .with("pmf", p)
        })
        .collect();
    Ok(Report {
        columns: &["dist", "n", "j", "k", "pmf"],
        rows,
    })
}

fn tail(args: &TailArgs) -> CliResult<Report> {
    let j = dist_j(args.dist, args.j)?;
    let value = if args.exact {
        Value::Rational(tail_y_exact(args.n, j, args.m)?)
    } else {
        Value::Prob(match args.dist {
            Dist::X => tail_x(args.n, args.m)?,
            Dist::Y => tail_y(args.n, j, args.m)?,
        })
    };
    let row = ReportRow::new()
        .with("dist", dist_name(args.dist))
        .with("n", args.n)
        .with("j", (args.dist == Dist::Y).then_some(j))
        .with("m", args.m)
        .with("tail", value);
    Ok(Report {
        columns: &["dist", "n", "j", "m", "tail"],
        rows: vec![row],
    })
}

const MOMENT_COLUMNS: &[&str] = &[
    "target",
    "n",
    "j",
    "a",
    "mean",
    "variance",
    "asym_mean",
    "asym_var",
    "asym_var_sublinear",
    "asym_var_proportional",
    "asym_var_nearcomplete",
];

fn check_harmonic_size(n: u64) -> CliResult<()> {
    if n > EXACT_HARMONIC_LIMIT {
        return Err(CliError::SizeGuard(format!(
            "exact moments need harmonic sums up to n = {n}; limit is {EXACT_HARMONIC_LIMIT}"
        )));
    }
    Ok(())
}

fn moments(args: &MomentsArgs) -> CliResult<Report> {
    let n = args.n;
    let row = match args.target {
        MomentTargetArg::Y => {
            if args.a.is_some() {
                return param("--target y takes --j, not --a");
            }
            let j = args
                .j
                .ok_or_else(|| CliError::Param("--target y requires --j".into()))?;
            let m = moments_y(n, j)?;
            ReportRow::new()
                .with("target", "y")
                .with("j", j)
                .with("mean", m.mean)
                .with("variance", m.variance)
        }
        MomentTargetArg::S => {
            if args.j.is_some() {
                return param("--target s takes --a, not --j");
            }
            let a = args
                .a
                .ok_or_else(|| CliError::Param("--target s requires --a".into()))?;
            check_harmonic_size(n)?;
            let m = moments_s(n, a)?;
            let mut row = ReportRow::new()
                .with("target", "s")
                .with("a", a)
                .with("mean", m.mean)
                .with("variance", m.variance);
            if args.asym {
                // the regime is a property of the sequence a_n, so all three
                // variance main terms are reported
                let sub = moments_s_asym(n, a, CltRegime::Sublinear)?;
                let prop = moments_s_asym(n, a, CltRegime::Proportional)?;
                let near = moments_s_asym(n, a, CltRegime::NearComplete)?;
                row = row
                    .with("asym_mean", sub.main_mean)
                    .with("asym_var_sublinear", sub.main_variance)
                    .with("asym_var_proportional", prop.main_variance)
                    .with("asym_var_nearcomplete", near.main_variance);
            }
            row
        }
        MomentTargetArg::M => {
            if args.j.is_some() || args.a.is_some() {
                return param("--target m takes neither --j nor --a");
            }
            check_harmonic_size(n)?;
            let m = moments_m(n)?;
            let mut row = ReportRow::new()
                .with("target", "m")
                .with("a", n)
                .with("mean", m.exact.mean)
                .with("variance", m.exact.variance);
            if args.asym {
                row = row
                    .with("asym_mean", m.asym_mean)
                    .with("asym_var", m.asym_var);
            }
            row
        }
    };
    Ok(Report {
        columns: MOMENT_COLUMNS,
        rows: vec![row.with("n", n)],
    })
}

fn sim_target(args: &SimulateArgs) -> CliResult<Target> {
    let given = [args.j.is_some(), args.a.is_some(), args.k.is_some()];
    let expect = |name: &str, idx: usize, v: Option<u64>| -> CliResult<u64> {
        if given.iter().enumerate().any(|(i, &g)| g && i != idx) {
            return param(format!("this target takes only --{name}"));
        }
        v.ok_or_else(|| CliError::Param(format!("this target requires --{name}")))
    };
    Ok(match args.target {
        SimTargetArg::Y => Target::Y(expect("j", 0, args.j)?),
        SimTargetArg::S => Target::S(expect("a", 1, args.a)?),
        SimTargetArg::Kmax => Target::KthMax(expect("k", 2, args.k)?),
        SimTargetArg::M => {
            if given.iter().any(|&g| g) {
                return param("--target m takes no --j, --a or --k");
            }
            Target::M
        }
    })
}

fn simulate(args: &SimulateArgs, workers: Option<usize>) -> CliResult<Report> {
    let target = sim_target(args)?;
    let config = SimConfig {
        n: args.n,
        target,
        replications: args.reps,
        master_seed: args.seed,
        backend: args.backend.resolve(args.n),
    };
    config.validate()?;
    let sample = run_experiment(&config, workers)?;
    let exact = match target {
        Target::Y(j) => moments_y(args.n, j)?.to_f64(),
        _ => moments_s_f64(args.n, config.collected())?,
    };
    let values = sample.values();
    let (j, a, k) = match target {
        Target::Y(j) => (Some(j), None, None),
        Target::S(a) => (None, Some(a), None),
        Target::M => (None, Some(args.n), None),
        Target::KthMax(k) => (None, Some(config.collected()), Some(k)),
    };
    let row = ReportRow::new()
        .with("target", target.to_string())
        .with("n", args.n)
        .with("j", j)
        .with("a", a)
        .with("k", k)
        .with("backend", config.backend.to_string())
        .with("reps", args.reps)
        .with("seed", args.seed)
        .with("mean", sample.mean())
        .with("variance", (values.len() > 1).then(|| sample.variance()))
        .with("min", values[0])
        .with("max", values[values.len() - 1])
        .with("exact_mean", exact.mean)
        .with("exact_variance", exact.variance);
    Ok(Report {
        columns: &[
            "target",
            "n",
            "j",
            "a",
            "k",
            "backend",
            "reps",
            "seed",
            "mean",
            "variance",
            "min",
            "max",
            "exact_mean",
            "exact_variance",
        ],
        rows: vec![row],
    })
}

fn default_rule(regime: RegimeArg) -> CliResult<ARule> {
    Ok(match regime {
        RegimeArg::Fixedk | RegimeArg::Kthmax => {
            return param("this regime needs an explicit --a-rule (k:<int> or n-minus:<int>)")
        }
        RegimeArg::Sublinear => ARule::FloorSqrt,
        RegimeArg::Proportional => ARule::FloorFrac(1, 2),
        RegimeArg::Nearcomplete => ARule::NMinusSqrt,
        RegimeArg::Fullmax => ARule::NMinus(0),
    })
}

fn regime_at(regime: RegimeArg, rule: ARule, n: u64, a: u64) -> Regime {
    match regime {
        RegimeArg::Fixedk => Regime::FixedK(a),
        RegimeArg::Sublinear => Regime::Sublinear,
        RegimeArg::Proportional => {
            Regime::Proportional(rule.proportion().unwrap_or(a as f64 / n as f64))
        }
        RegimeArg::Nearcomplete => Regime::NearComplete,
        RegimeArg::Kthmax => Regime::KthMax(n - a + 1),
        RegimeArg::Fullmax => Regime::FullMax,
    }
}

fn law_matches(law: LawArg, limit: LimitLaw) -> bool {
    matches!(
        (law, limit),
        (LawArg::Gumbel, LimitLaw::GumbelKth(1))
            | (LawArg::Kthmax, LimitLaw::GumbelKth(_))
            | (LawArg::Normal, LimitLaw::StdNormal)
            | (LawArg::Erlang, LimitLaw::ErlangK(_))
    )
}

fn converge(args: &ConvergeArgs, workers: Option<usize>) -> CliResult<Report> {
    let rule = match args.a_rule {
        Some(r) => r,
        None => default_rule(args.regime)?,
    };
    let mut rows = Vec::with_capacity(args.n_grid.len());
    for &n in &args.n_grid {
        let a = rule.apply(n).map_err(CliError::Param)?;
        let regime = regime_at(args.regime, rule, n, a);
        regime.check(n, a)?;
        let law = regime.limit_law();
        if !law_matches(args.law, law) {
            return param(format!(
                "regime {regime} has limit law {law}, not the requested one"
            ));
        }
        let normalization = match args.normalization {
            NormalizationArg::Main => normalization_for(n, a, regime)?,
            NormalizationArg::Exact => exact_normalization(n, a, regime)?,
        };
        let config = SimConfig {
            n,
            target: Target::S(a),
            replications: args.reps,
            master_seed: args.seed,
            backend: args.backend.resolve(n),
        };
        let sample = normalize_sample(&run_experiment(&config, workers)?, &normalization);
        let ks = ks_distance(&sample, law)?;
        rows.push(
            ReportRow::new()
                .with("law", law.to_string())
                .with("regime", regime.to_string())
                .with("a_rule", rule.to_string())
                .with("n", n)
                .with("a", a)
                .with("backend", config.backend.to_string())
                .with("reps", args.reps)
                .with("seed", args.seed)
                .with("center", normalization.center)
                .with("scale", normalization.scale)
                .with("ks", Value::Prob(ks.distance)),
        );
    }
    Ok(Report {
        columns: &[
            "law", "regime", "a_rule", "n", "a", "backend", "reps", "seed", "center", "scale", "ks",
        ],
        rows,
    })
}

const CF_GRID_POINTS: usize = 4001;

/// `sup |(1 + t^2)^(-k/2) e^(ik atan t) - (1 - it)^(-k)|` over `t` in `[-20, 20]`.
pub fn cf_identity_error(k: u64) -> f64 {
    let one = num_complex::Complex64::new(1.0, 0.0);
    (0..CF_GRID_POINTS)
        .map(|i| {
            let t = -20.0 + 40.0 * i as f64 / (CF_GRID_POINTS - 1) as f64;
            let erlang = (one - num_complex::Complex64::new(0.0, t)).powi(-(k as i32));
            (cf_limit_fixed_k(k, t) - erlang).norm()
        })
        .fold(0.0, f64::max)
}

fn diagnose(args: &DiagnoseArgs) -> CliResult<Report> {
    let needs_grid = args.check != CheckArg::CfIdentity;
    if needs_grid && args.n_grid.is_empty() {
        return param("--n-grid is required for this check");
    }
    let x = args.x;
    let base = |name: &str| ReportRow::new().with("check", name);
    let mut rows = Vec::new();
    match args.check {
        CheckArg::TailLimit => {
            let limit = (-x).exp();
            for &n in &args.n_grid {
                let v = scaled_tail_limit(n, x)?;
                rows.push(
                    base("tail-limit")
                        .with("n", n)
                        .with("x", x)
                        .with("quantity", "n*P{X>u_n}")
                        .with("value", v)
                        .with("reference", limit)
                        .with("error", (v / limit - 1.0).abs()),
                );
            }
        }
        CheckArg::Dprime => {
            let k = args.k.unwrap_or(10);
            let limit = (-2.0 * x).exp() / k as f64;
            for &n in &args.n_grid {
                let v = dprime_diagnostic(n, k, x)?;
                rows.push(
                    base("dprime")
                        .with("n", n)
                        .with("k", k)
                        .with("x", x)
                        .with("quantity", "dprime_sum")
                        .with("value", v)
                        .with("reference", limit)
                        .with("error", (v / limit - 1.0).abs()),
                );
            }
        }
        CheckArg::CfIdentity => {
            let ks: Vec<u64> = match args.k {
                Some(0) => return param("--k must be at least 1"),
                Some(k) => vec![k],
                None => (1..=5).collect(),
            };
            for k in ks {
                let err = cf_identity_error(k);
                rows.push(
                    base("cf-identity")
                        .with("k", k)
                        .with("quantity", "sup_cf_gap")
                        .with("value", err)
                        .with("reference", 0.0)
                        .with("error", err),
                );
            }
        }
        CheckArg::AsymMoments => {
            for &n in &args.n_grid {
                check_harmonic_size(n)?;
                let nf = n as f64;
                let gap = max_mean_asym_gap(n)?;
                rows.push(
                    base("asym-moments")
                        .with("n", n)
                        .with("quantity", "n2_mean_gap")
                        .with("value", nf * nf * gap.abs()),
                );
                let m = moments_m(n)?;
                let var = m.exact.to_f64().variance;
                rows.push(
                    base("asym-moments")
                        .with("n", n)
                        .with("quantity", "var_gap_over_n2")
                        .with("value", (var - m.asym_var).abs() / (nf * nf))
                        .with("reference", m.asym_var)
                        .with("error", (var / m.asym_var - 1.0).abs()),
                );
            }
        }
    }
    Ok(Report {
        columns: &[
            "check",
            "n",
            "k",
            "x",
            "quantity",
            "value",
            "reference",
            "error",
        ],
        rows,
    })
}

fn mask_label(mask: usize, n: usize) -> String {
    let members: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

fn oracle(args: &OracleArgs) -> CliResult<Report> {
    let laws = enumerate_laws(args.n, args.len)?;
    let (n, len) = (args.n as usize, args.len);
    let mut rows = Vec::new();
    let row = |law: &str,
               set: String,
               k: usize,
               got: &num_rational::BigRational,
               want: &num_rational::BigRational| {
        ReportRow::new()
            .with("law", law)
            .with("n", args.n)
            .with("set", set)
            .with("k", k)
            .with("enumerated", got.clone())
            .with("closed_form", want.clone())
            .with("agrees", got == want)
    };
    if len >= 2 {
        let x_law = pmf_y_exact_range(args.n, 1, len as u64)?;
        for sym in 0..n {
            for k in 2..=len {
                rows.push(row(
                    "x",
                    mask_label(1 << sym, n),
                    k,
                    laws.x_pmf(sym, k),
                    &x_law[k - 2],
                ));
            }
        }
    }
    for mask in 1usize..(1 << n) {
        let j = mask.count_ones() as u64;
        let y_law = if len >= 2 {
            pmf_y_exact_range(args.n, j, len as u64)?
        } else {
            Vec::new()
        };
        for k in 2..=len {
            rows.push(row(
                "y",
                mask_label(mask, n),
                k,
                laws.y_pmf(mask, k),
                &y_law[k - 2],
            ));
        }
        for m in 1..=len {
            // the joint tail of the single-pair times equals the tail of the
            // first completion among the set
            rows.push(row(
                "joint_tail",
                mask_label(mask, n),
                m,
                laws.joint_tail(mask, m),
                &tail_y_exact(args.n, j, m as u64)?,
            ));
        }
    }
    Ok(Report {
        columns: &[
            "law",
            "n",
            "set",
            "k",
            "enumerated",
            "closed_form",
            "agrees",
        ],
        rows,
    })
}
