//! `dctmg`: single solves, reference-table reproduction and convergence
//! diagnostics.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on numerical failure
//! (a solve that does not converge, a table cell outside its band, or a
//! failed setup). Log verbosity follows the `DCTMG_LOG` environment variable.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use dctmg::analysis::{levelwise_delta, measured_contraction, Accounting, MEASURE_CAP_1D, MEASURE_CAP_2D};
use dctmg::tables::{run_cell, table_cells};
use dctmg::{
    build_hierarchy, build_hierarchy_nonsingular, CosPoly, Error, ExperimentSpec, Hierarchy, RhsMode, SetupOptions,
    Symbol, ZeroInfo,
};

use config::Settings;
use output::{order_value, AnalysisRecord, Format, SolveRecord};

pub const LOG_ENV: &str = "DCTMG_LOG";

#[derive(Parser, Debug)]
#[command(name = "dctmg", version, about = "Two-grid and V-cycle solvers for DCT-III algebra systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve `C_m(f) x = b` for each requested size.
    Solve(ProblemArgs),
    /// Rerun a reference table and compare with the reference counts.
    Reproduce(ReproduceArgs),
    /// Per-level smoothing and approximation constants, contraction bound
    /// and (optionally) the measured contraction.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug, Default)]
struct ProblemArgs {
    /// 1 or 2.
    #[arg(long)]
    dim: Option<usize>,
    /// Zero location of the generating function: 0 or pi.
    #[arg(long)]
    zero: Option<String>,
    /// Half the zero order; the generator is `[2 -/+ 2cos x]^q`.
    #[arg(long)]
    q: Option<u32>,
    /// Projector order, a positive integer or `auto`.
    #[arg(long)]
    r: Option<String>,
    /// Fine grid size per dimension; comma separated for several runs.
    #[arg(long)]
    size: Option<String>,
    /// tgm or vcycle.
    #[arg(long)]
    method: Option<String>,
    /// Relative residual tolerance.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long = "max-iters")]
    max_iters: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Right-hand side `b = A u`: ramp, random, ones or zero.
    #[arg(long)]
    rhs: Option<String>,
    /// json, csv or markdown.
    #[arg(long)]
    output: Option<String>,
    /// File of `key=value` lines using the long flag names; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ProblemArgs {
    fn settings(&self) -> Result<Settings, Error> {
        let base = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("dim", self.dim.map(|v| v.to_string())),
            ("zero", self.zero.clone()),
            ("q", self.q.map(|v| v.to_string())),
            ("r", self.r.clone()),
            ("size", self.size.clone()),
            ("method", self.method.clone()),
            ("tol", self.tol.clone()),
            ("max-iters", self.max_iters.clone()),
            ("seed", self.seed.clone()),
            ("rhs", self.rhs.clone()),
            ("output", self.output.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v)?;
            }
        }
        Ok(base.overlay(flags))
    }
}

fn format_of(settings: &Settings, default: Format) -> Result<Format, Error> {
    settings.get("output").map_or(Ok(default), str::parse)
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// 1, 2 or 3.
    #[arg(long)]
    table: u8,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "ramp")]
    rhs: String,
    #[arg(long, default_value = "markdown")]
    output: String,
    /// Skip cells whose size per dimension exceeds this.
    #[arg(long = "max-size")]
    max_size: Option<usize>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Also compute the dense A-norm contraction of one cycle.
    #[arg(long)]
    measure: bool,
    /// Largest number of unknowns for the dense measurement.
    #[arg(long)]
    cap: Option<usize>,
    /// Smoothing steps entering the bound: both or post.
    #[arg(long, default_value = "both")]
    accounting: String,
    /// Comma-separated 1D cosine coefficients replacing the generator; use
    /// with `--zero none` for a symbol without zeros.
    #[arg(long, allow_hyphen_values = true)]
    symbol: Option<String>,
}

/// Error paired with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Usage(_) | Error::DimensionMismatch { .. } | Error::SizeMismatch { .. } | Error::DenseCap { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn cmd_solve(args: &ProblemArgs) -> Result<u8, Failure> {
    let settings = args.settings()?;
    let format = format_of(&settings, Format::Json)?;
    let spec = settings.experiment(ExperimentSpec::default())?;
    let mut records = Vec::with_capacity(spec.sizes.len());
    for &m in &spec.sizes {
        let report = spec.run::<f64>(m)?;
        info!("m = {m}: {} iterations, converged {}", report.iterations, report.converged);
        records.push(SolveRecord::new(&spec, report));
    }
    print!("{}", output::render_solves(&records, format));
    Ok(if records.iter().all(|r| r.report.converged) { 0 } else { 2 })
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<u8, Failure> {
    let format: Format = args.output.parse()?;
    let rhs: RhsMode = args.rhs.parse()?;
    let cells = table_cells(args.table)?;
    let outcomes: Vec<_> = cells
        .iter()
        .filter(|c| args.max_size.is_none_or(|cap| c.m <= cap))
        .map(|c| {
            let o = run_cell::<f64>(c, args.seed, rhs);
            info!("{} {} m = {}: {:?} (expected {:?})", c.method, c.column(), c.m, o.iterations, c.expected);
            o
        })
        .collect();
    print!("{}", output::render_table(&outcomes, format));
    Ok(if outcomes.iter().all(|o| o.pass != Some(false)) { 0 } else { 2 })
}

fn parse_symbol(text: &str) -> Result<Symbol<f64>, Error> {
    let coeffs = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Usage(format!("invalid coefficient {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.is_empty() {
        return Err(Error::Usage("empty symbol".into()));
    }
    Ok(Symbol::from_poly(CosPoly::new(coeffs)))
}

fn analysis_hierarchy(args: &AnalyzeArgs, settings: &Settings) -> Result<(ExperimentSpec, Hierarchy<f64>, bool), Error> {
    let nonsingular = settings
        .get("zero")
        .is_some_and(|z| z.eq_ignore_ascii_case("none"));
    let mut layered = settings.clone();
    if nonsingular {
        layered.set("zero", "0")?;
    }
    let spec = layered.experiment(ExperimentSpec::default())?;
    let m = spec.sizes[0];
    let opts = SetupOptions::new(spec.method).with_order(spec.r);
    let h = match (&args.symbol, nonsingular) {
        (None, true) => return Err(Error::Usage("--zero none needs --symbol".into())),
        (None, false) => spec.hierarchy::<f64>(m)?,
        (Some(text), true) => build_hierarchy_nonsingular(&parse_symbol(text)?, m, &opts)?,
        (Some(text), false) => {
            let zero = ZeroInfo::new(spec.zero, 2 * spec.q)?;
            build_hierarchy(&parse_symbol(text)?, zero, m, 1, &opts)?
        }
    };
    Ok((spec, h, nonsingular))
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let settings = args.problem.settings()?;
    let format = format_of(&settings, Format::Json)?;
    let accounting: Accounting = args.accounting.parse()?;
    let (spec, h, nonsingular) = analysis_hierarchy(args, &settings)?;
    let mut theory = levelwise_delta(&h, accounting)?;
    if args.measure {
        let cap = args
            .cap
            .unwrap_or(if h.dim() == 1 { MEASURE_CAP_1D } else { MEASURE_CAP_2D });
        theory.measured = Some(measured_contraction(&h, cap)?);
    }
    let record = AnalysisRecord {
        dim: h.dim(),
        zero: (!nonsingular).then(|| spec.zero.to_string()),
        q: if nonsingular { 0 } else { spec.q },
        r: order_value(spec.r),
        method: h.method.to_string(),
        sizes: h.sizes(),
        theory,
    };
    print!("{}", output::render_theory(&record, format));
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Reproduce(a) => cmd_reproduce(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == 1 {
                eprintln!("run `dctmg --help` for usage");
            }
            ExitCode::from(f.code)
        }
    }
}
