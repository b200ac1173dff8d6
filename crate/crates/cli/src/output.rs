//! Rendering of solve reports, table reproductions and theory reports.

use serde::Serialize;
use serde_json::Value;

use dctmg::analysis::LevelTheory;
use dctmg::tables::CellOutcome;
use dctmg::{Error, ExperimentSpec, ProjectorOrder, SolveReport, TheoryReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::Usage(format!(
                "unknown output format {other:?}; expected json, csv or markdown"
            ))),
        }
    }
}

/// `r` as a JSON number, or the string `"auto"`.
pub fn order_value(r: ProjectorOrder) -> Value {
    match r {
        ProjectorOrder::Fixed(r) => Value::from(r),
        ProjectorOrder::Auto => Value::from("auto"),
    }
}

/// One solve with the experiment parameters that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct SolveRecord {
    pub q: u32,
    pub r: Value,
    pub zero: String,
    pub rhs: String,
    pub seed: u64,
    pub tol: f64,
    #[serde(flatten)]
    pub report: SolveReport,
}

impl SolveRecord {
    pub fn new(spec: &ExperimentSpec, report: SolveReport) -> Self {
        Self {
            q: spec.q,
            r: order_value(spec.r),
            zero: spec.zero.to_string(),
            rhs: spec.rhs.to_string(),
            seed: spec.seed,
            tol: spec.tol,
            report,
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize to JSON")
}

fn markdown(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn tabular(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => csv(header, rows),
        _ => markdown(header, rows),
    }
}

pub const SOLVE_COLUMNS: [&str; 11] = [
    "method",
    "dim",
    "zero",
    "q",
    "r",
    "m",
    "iterations",
    "converged",
    "final_relative_residual",
    "seed",
    "elapsed_ms",
];

/// A single record renders as a JSON object, several as an array.
pub fn render_solves(records: &[SolveRecord], format: Format) -> String {
    if format == Format::Json {
        return match records {
            [one] => json(one),
            many => json(&many),
        };
    }
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|rec| {
            let rep = &rec.report;
            vec![
                rep.method.to_string(),
                rep.dim.to_string(),
                rec.zero.clone(),
                rec.q.to_string(),
                rec.r.to_string().trim_matches('"').to_string(),
                rep.sizes[0].to_string(),
                rep.iterations.to_string(),
                rep.converged.to_string(),
                format!("{:.6e}", rep.final_relative_residual),
                rec.seed.to_string(),
                format!("{:.3}", rep.elapsed_ms),
            ]
        })
        .collect();
    tabular(format, &SOLVE_COLUMNS, &rows)
}

pub const TABLE_COLUMNS: [&str; 11] = [
    "table",
    "dim",
    "zero",
    "method",
    "q",
    "r",
    "m",
    "expected",
    "iterations",
    "tolerance",
    "status",
];

fn status(o: &CellOutcome) -> &'static str {
    match (o.pass, &o.error) {
        (None, _) => "skip",
        (Some(_), Some(_)) => "error",
        (Some(true), None) => "pass",
        (Some(false), None) if !o.converged => "diverged",
        (Some(false), None) => "fail",
    }
}

pub fn render_table(outcomes: &[CellOutcome], format: Format) -> String {
    if format == Format::Json {
        return json(&outcomes);
    }
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            let c = &o.cell;
            vec![
                c.table.to_string(),
                c.dim.to_string(),
                c.zero.to_string(),
                c.method.to_string(),
                c.q.to_string(),
                c.r.to_string(),
                c.m.to_string(),
                opt(c.expected.map(|e| e.to_string())),
                opt(o.iterations.map(|i| i.to_string())),
                c.tolerance.to_string(),
                status(o).to_string(),
            ]
        })
        .collect();
    tabular(format, &TABLE_COLUMNS, &rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisRecord {
    pub dim: usize,
    pub zero: Option<String>,
    pub q: u32,
    pub r: Value,
    pub method: String,
    pub sizes: Vec<usize>,
    #[serde(flatten)]
    pub theory: TheoryReport,
}

pub const THEORY_COLUMNS: [&str; 14] = [
    "level",
    "m",
    "omega_pre",
    "omega_post",
    "alpha",
    "beta",
    "gamma_star",
    "mu_inf",
    "psi_min",
    "psi_max",
    "delta_pre",
    "delta_post",
    "bound",
    "measured",
];

pub fn render_theory(record: &AnalysisRecord, format: Format) -> String {
    if format == Format::Json {
        return json(record);
    }
    let t = &record.theory;
    let measured = t.measured.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
    let row = |l: &LevelTheory| {
        vec![
            l.level.to_string(),
            l.m.to_string(),
            format!("{:.6e}", l.omega_pre),
            format!("{:.6e}", l.omega_post),
            format!("{:.6e}", l.alpha),
            format!("{:.6e}", l.beta),
            format!("{:.6e}", l.gamma_star),
            format!("{:.6}", l.mu_inf),
            format!("{:.6e}", l.psi_min),
            format!("{:.6e}", l.psi_max),
            format!("{:.6}", t.delta_pre),
            format!("{:.6}", t.delta_post),
            format!("{:.6}", t.bound),
            measured.clone(),
        ]
    };
    let rows: Vec<Vec<String>> = t.levels.iter().map(row).collect();
    tabular(format, &THEORY_COLUMNS, &rows)
}
