//! Command-line front end: parse expressions, run the estimators and the
//! verification suite, and emit deterministic CSV/JSON/table output.
//!
//! Exit codes: 0 success, 1 usage or expression-syntax error, 2 domain
//! error during evaluation, 3 at least one verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pqgrowth::error::{Error, Result};
use pqgrowth::funfam::{EntireExpr, GrowthObject, MaxModulus};
use pqgrowth::growth::{self, EstimatorParams};
use pqgrowth::oracle::{self, OracleParams, Verdict};
use pqgrowth::report::{estimate_cells, estimate_columns, fmt_float, Cell, Report};
use pqgrowth::tower::TowerReal;
use pqgrowth::verify::{self, Outcome, SuiteParams, VerificationReport};

#[derive(Parser)]
#[command(
    name = "pqgrowth",
    version,
    about = "Growth scales of entire functions: tower evaluation, (p,q)-order estimation, and composition checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// First grid abscissa t0 of the geometric measurement grid
    #[arg(long = "grid-t0", default_value_t = 8.0)]
    grid_t0: f64,
    /// Ratio between consecutive grid abscissas
    #[arg(long = "grid-beta", default_value_t = 1.5)]
    grid_beta: f64,
    /// Number of grid points
    #[arg(long = "grid-points", default_value_t = 40)]
    grid_points: u32,
    /// Tail window length for the limit statistics
    #[arg(long, default_value_t = 8)]
    tail: usize,
    /// Convergence tolerance for limit classification
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

impl GridArgs {
    fn params(&self) -> Result<EstimatorParams> {
        if !(self.grid_t0 > 0.0) {
            return Err(Error::InvalidValue("--grid-t0 must be positive".into()));
        }
        if !(self.grid_beta > 1.0) {
            return Err(Error::InvalidValue("--grid-beta must exceed 1".into()));
        }
        if self.grid_points < 8 {
            return Err(Error::InvalidValue("--grid-points must be at least 8".into()));
        }
        if self.tail < 2 {
            return Err(Error::InvalidValue("--tail must be at least 2".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidValue("--tol must be positive".into()));
        }
        let mut params = EstimatorParams::default();
        params.grid.t0 = self.grid_t0;
        params.grid.beta = self.grid_beta;
        params.grid.points = self.grid_points;
        params.window = self.tail;
        params.conv_tol = self.tol;
        Ok(params)
    }
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate the (p,q)-order and lower order of an expression
    Order {
        /// Entire function, e.g. "exp[2](z^3)" or "exp(z^2) o z^3"
        #[arg(long)]
        expr: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Scan for the index pair: the smallest scale cell with a finite
    /// positive order, with consistency checks on neighbouring cells
    IndexPair {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Estimate the relative (p,q)-order of --f with respect to --g
    Relorder {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the maximum modulus at one or more radii
    Maxmod {
        #[arg(long)]
        expr: String,
        /// Radius (repeatable)
        #[arg(long = "r", required = true)]
        radii: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invert the maximum modulus: the radius r with M(r) = value
    Invmaxmod {
        #[arg(long)]
        expr: String,
        /// Target value v; the target is exp^[value-level](v)
        #[arg(long)]
        value: f64,
        /// Iterated-exponential level of the target value
        #[arg(long = "value-level", default_value_t = 0)]
        value_level: u32,
        /// Relative tolerance of the inversion
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check the composition sandwich bounds with the series oracle at one
    /// or more radii
    Sandwich {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Radius (repeatable)
        #[arg(long = "r", required = true)]
        radii: Vec<f64>,
        /// Series truncation order (escalated automatically when a guard
        /// radius is hit)
        #[arg(long, default_value_t = 64)]
        terms: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the composition-statement verification suite
    Verify {
        /// Check only this statement (1-8); all by default
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        theorem: Option<u8>,
        /// Instance suite: "default" (full) or "quick" (first 12)
        #[arg(long, default_value = "default")]
        suite: String,
        /// Instance-generation seed
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Truncate the instance list
        #[arg(long)]
        limit: Option<usize>,
        /// Also corrupt one predicted window and confirm the harness
        /// flags it
        #[arg(long = "self-test", default_value_t = false)]
        self_test: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Merge JSON artifacts written by earlier runs into one report
    Report {
        /// Input JSON file (repeatable)
        #[arg(long = "in", required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Syntax { .. } | Error::NegativeCoefficient { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_obj(src: &str) -> Result<GrowthObject> {
    GrowthObject::from_expr(src.parse::<EntireExpr>()?)
}

fn json_num(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(fmt_float(v)))
}

fn emit(report: &Report, out: &OutArgs) -> Result<()> {
    let content = match out.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json_string(),
        Format::Table => report.to_text(),
    };
    match &out.out {
        Some(path) => write_file(path, &content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| Error::InvalidValue(format!("cannot write {}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Order { expr, p, q, grid, out } => {
            let obj = parse_obj(&expr)?;
            let params = grid.params()?;
            let est = growth::pq_order(&obj, p, q, &params)?;
            let mut report = Report::new(estimate_columns());
            report
                .meta("command", json!("order"))
                .meta("expr", json!(obj.description()))
                .meta("p", json!(p))
                .meta("q", json!(q))
                .meta("rho", json_num(est.limsup))
                .meta("lambda", json_num(est.liminf));
            report.push(estimate_cells(&est));
            emit(&report, &out)?;
            Ok(0)
        }
        Cmd::IndexPair { expr, grid, out } => {
            let obj = parse_obj(&expr)?;
            let params = grid.params()?;
            let found = growth::detect_index_pair(&obj, &params)?;
            let mut columns = vec!["kind", "p", "q", "expected_class"];
            columns.extend(estimate_columns());
            columns.push("ok");
            let mut report = Report::new(columns);
            report
                .meta("command", json!("index-pair"))
                .meta("expr", json!(obj.description()))
                .meta("p", json!(found.p))
                .meta("q", json!(found.q))
                .meta("rho", json_num(found.order.limsup))
                .meta("lambda", json_num(found.order.liminf))
                .meta("regular", json!(found.regular));
            let mut row = vec![
                Cell::from("pair"),
                Cell::from(found.p),
                Cell::from(found.q),
                Cell::Empty,
            ];
            row.extend(estimate_cells(&found.order));
            row.push(Cell::Empty);
            report.push(row);
            for check in &found.checks {
                let mut row = vec![
                    Cell::from("consistency"),
                    Cell::from(check.p),
                    Cell::from(check.q),
                    Cell::from(check.expected.label()),
                ];
                row.extend(estimate_cells(&check.estimate));
                row.push(Cell::from(check.ok));
                report.push(row);
            }
            emit(&report, &out)?;
            Ok(0)
        }
        Cmd::Relorder { f, g, p, q, grid, out } => {
            let fo = parse_obj(&f)?;
            let go = parse_obj(&g)?;
            let params = grid.params()?;
            let est = growth::relative_pq_order(&fo, &go, p, q, &params)?;
            let mut report = Report::new(estimate_columns());
            report
                .meta("command", json!("relorder"))
                .meta("f", json!(fo.description()))
                .meta("g", json!(go.description()))
                .meta("p", json!(p))
                .meta("q", json!(q))
                .meta("rho", json_num(est.limsup))
                .meta("lambda", json_num(est.liminf));
            report.push(estimate_cells(&est));
            emit(&report, &out)?;
            Ok(0)
        }
        Cmd::Maxmod { expr, mut radii, out } => {
            let obj = parse_obj(&expr)?;
            radii.sort_by(f64::total_cmp);
            let mut report = Report::new(["r", "level", "mantissa", "float", "tower"]);
            report
                .meta("command", json!("maxmod"))
                .meta("expr", json!(obj.description()));
            for r in radii {
                let value = obj.max_modulus(&TowerReal::from_f64(r)?)?;
                report.push(vec![
                    Cell::from(r),
                    Cell::from(value.level()),
                    Cell::from(value.mantissa()),
                    Cell::Float(value.float().unwrap_or(f64::INFINITY)),
                    Cell::from(value.to_string()),
                ]);
            }
            emit(&report, &out)?;
            Ok(0)
        }
        Cmd::Invmaxmod { expr, value, value_level, tol, out } => {
            let obj = parse_obj(&expr)?;
            let target = TowerReal::from_f64(value)?.exp_k(value_level);
            let radius = growth::inverse_max_modulus(&obj, &target, tol)?;
            let mut report = Report::new(["value", "value_level", "r", "r_level", "r_mantissa"]);
            report
                .meta("command", json!("invmaxmod"))
                .meta("expr", json!(obj.description()))
                .meta("target", json!(target.to_string()))
                .meta("radius", json!(radius.to_string()));
            report.push(vec![
                Cell::from(value),
                Cell::from(value_level),
                Cell::Float(radius.float().unwrap_or(f64::INFINITY)),
                Cell::from(radius.level()),
                Cell::from(radius.mantissa()),
            ]);
            emit(&report, &out)?;
            Ok(0)
        }
        Cmd::Sandwich { f, g, mut radii, terms, out } => {
            let fe: EntireExpr = f.parse()?;
            let ge: EntireExpr = g.parse()?;
            radii.sort_by(f64::total_cmp);
            let params = OracleParams {
                n_terms: terms,
                ..OracleParams::default()
            };
            let mut report = Report::new([
                "r", "lower_lo", "lower_hi", "mid_lo", "mid_hi", "upper_lo", "upper_hi",
                "verdict",
            ]);
            report
                .meta("command", json!("sandwich"))
                .meta("f", json!(fe.to_string()))
                .meta("g", json!(ge.to_string()))
                .meta("terms", json!(terms));
            let mut worst = Verdict::Pass;
            for r in radii {
                let rec = oracle::check_sandwich(&fe, &ge, r, params)?;
                worst = worst.combine(rec.verdict);
                report.push(vec![
                    Cell::from(rec.r),
                    Cell::from(rec.lower.lo),
                    Cell::from(rec.lower.hi),
                    Cell::from(rec.middle.lo),
                    Cell::from(rec.middle.hi),
                    Cell::from(rec.upper.lo),
                    Cell::from(rec.upper.hi),
                    Cell::from(rec.verdict.label()),
                ]);
            }
            report.meta("verdict", json!(worst.label()));
            emit(&report, &out)?;
            Ok(if worst == Verdict::Fail { 3 } else { 0 })
        }
        Cmd::Verify { theorem, suite, seed, limit, self_test, grid, out } => {
            let limit = match (suite.as_str(), limit) {
                (_, Some(n)) => Some(n),
                ("default", None) => None,
                ("quick", None) => Some(12),
                (other, None) => {
                    return Err(Error::InvalidValue(format!(
                        "unknown suite {other:?}; expected \"default\" or \"quick\""
                    )))
                }
            };
            let params = grid.params()?;
            let suite_params = SuiteParams {
                seed,
                limit,
                corrupt_self_test: self_test,
            };
            let summary = verify::run_suite(&suite_params, &params)?;
            let reports: Vec<&VerificationReport> = summary
                .reports
                .iter()
                .filter(|r| theorem.map_or(true, |t| r.theorem == t))
                .collect();
            let mut pass = 0usize;
            let mut fail = 0usize;
            let mut inconclusive = 0usize;
            let mut violated = 0usize;
            for r in &reports {
                match r.outcome {
                    Outcome::Pass => pass += 1,
                    Outcome::Fail => fail += 1,
                    Outcome::Inconclusive => inconclusive += 1,
                    Outcome::HypothesisViolated => violated += 1,
                }
            }
            let mut report = verify_report(&reports, out.format);
            report
                .meta("command", json!("verify"))
                .meta("suite", json!(suite))
                .meta("seed", json!(seed))
                .meta("theorem", theorem.map_or(Value::Null, |t| json!(t)))
                .meta("reports", json!(reports.len()))
                .meta("pass", json!(pass))
                .meta("fail", json!(fail))
                .meta("inconclusive", json!(inconclusive))
                .meta("hypothesis_violated", json!(violated));
            if let Some(ok) = summary.self_test {
                report.meta("self_test", json!(ok));
            }
            emit(&report, &out)?;
            let self_test_failed = summary.self_test == Some(false);
            Ok(if fail > 0 || self_test_failed { 3 } else { 0 })
        }
        Cmd::Report { inputs, out } => {
            let report = merge_artifacts(&inputs)?;
            emit(&report, &out)?;
            Ok(0)
        }
    }
}

/// One row per inequality verdict. The CSV schema is frozen; the JSON and
/// table forms carry the full row detail.
fn verify_report(reports: &[&VerificationReport], format: Format) -> Report {
    let csv = format == Format::Csv;
    let columns: Vec<&str> = if csv {
        vec![
            "theorem", "case", "instance", "predicted_lo", "predicted_hi", "measured",
            "margin", "verdict",
        ]
    } else {
        vec![
            "theorem", "case", "instance", "inequality", "predicted_lo", "predicted_hi",
            "measured_lo", "measured_hi", "margin", "tolerance", "converged", "verdict",
            "outcome",
        ]
    };
    let mut out = Report::new(columns);
    for rep in reports {
        let base = |out: &mut Report, row_tail: Vec<Cell>| {
            let mut row = vec![
                Cell::from(rep.theorem as u32),
                Cell::from(rep.case.label()),
                Cell::from(rep.instance.clone()),
            ];
            row.extend(row_tail);
            out.push(row);
        };
        if rep.rows.is_empty() {
            // a report with no inequalities still occupies one line so its
            // outcome (hypothesis screening) stays visible
            let verdict = Cell::from(rep.outcome.label());
            if csv {
                base(
                    &mut out,
                    vec![Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, verdict],
                );
            } else {
                let note = rep
                    .hypothesis_violation
                    .clone()
                    .map_or(Cell::Empty, Cell::from);
                base(
                    &mut out,
                    vec![
                        note,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        verdict,
                    ],
                );
            }
            continue;
        }
        for row in &rep.rows {
            if csv {
                base(
                    &mut out,
                    vec![
                        Cell::from(row.lo),
                        Cell::from(row.hi),
                        Cell::from(0.5 * (row.measured_lo + row.measured_hi)),
                        Cell::from(row.margin),
                        Cell::from(row.verdict.label()),
                    ],
                );
            } else {
                base(
                    &mut out,
                    vec![
                        Cell::from(row.name.clone()),
                        Cell::from(row.lo),
                        Cell::from(row.hi),
                        Cell::from(row.measured_lo),
                        Cell::from(row.measured_hi),
                        Cell::from(row.margin),
                        Cell::from(row.tolerance),
                        Cell::from(row.converged),
                        Cell::from(row.verdict.label()),
                        Cell::from(rep.outcome.label()),
                    ],
                );
            }
        }
    }
    out
}

/// Concatenate the rows of previously written `{meta, rows}` JSON
/// artifacts, prefixing each with its source path and command.
fn merge_artifacts(inputs: &[PathBuf]) -> Result<Report> {
    let mut docs = Vec::new();
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidValue(format!("cannot read {}: {e}", path.display())))?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidValue(format!("{} is not JSON: {e}", path.display())))?;
        if !doc.is_object() || !doc["rows"].is_array() {
            return Err(Error::InvalidValue(format!(
                "{} is not a report artifact (expected an object with meta and rows)",
                path.display()
            )));
        }
        docs.push((path, doc));
    }
    // column union in first-seen order (object keys parse in sorted order,
    // so the union is deterministic)
    let mut columns: Vec<String> = vec!["source".into(), "command".into()];
    for (_, doc) in &docs {
        for row in doc["rows"].as_array().expect("checked above") {
            if let Some(obj) = row.as_object() {
                for key in obj.keys() {
                    if !columns.iter().any(|c| c == key) {
                        columns.push(key.clone());
                    }
                }
            }
        }
    }
    let mut report = Report::new(columns.clone());
    report
        .meta("command", json!("report"))
        .meta(
            "sources",
            Value::Array(
                docs.iter()
                    .map(|(path, doc)| {
                        json!({
                            "path": path.display().to_string(),
                            "meta": doc.get("meta").cloned().unwrap_or(Value::Null),
                        })
                    })
                    .collect(),
            ),
        );
    for (path, doc) in &docs {
        let command = doc["meta"]["command"]
            .as_str()
            .unwrap_or_default()
            .to_string();
        for row in doc["rows"].as_array().expect("checked above") {
            let obj = row.as_object();
            let cells: Vec<Cell> = columns
                .iter()
                .enumerate()
                .map(|(i, col)| match i {
                    0 => Cell::from(path.display().to_string()),
                    1 => Cell::from(command.clone()),
                    _ => match obj.and_then(|o| o.get(col)) {
                        Some(Value::Number(n)) => {
                            n.as_f64().map(Cell::Float).unwrap_or(Cell::Empty)
                        }
                        Some(Value::String(s)) => Cell::from(s.clone()),
                        Some(Value::Bool(b)) => Cell::from(*b),
                        Some(Value::Null) | None => Cell::Empty,
                        Some(other) => Cell::from(other.to_string()),
                    },
                })
                .collect();
            report.push(cells);
        }
    }
    Ok(report)
}
