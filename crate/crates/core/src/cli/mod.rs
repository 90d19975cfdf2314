//! The `qmzv` command line: `eval`, `verify` and `table`.
//!
//! Exit codes: 0 success, 1 an identity failed, 2 bad input, 3 divergent
//! series, 4 anything else (budget exhaustion, poles, I/O).

mod output;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::Error;
use crate::indices::compositions;
use crate::qarith::{QParam, DEFAULT_MAX_TERMS};
use crate::series::Evaluator;
use crate::stuffle::{eval_expr_with, StuffleExpr};
use crate::verify::{run_sweep, Identity, SweepConfig, Verifier, VerifyReport, Q_GRID};

use output::{Cell, Table};
use parse::{parse_complex, parse_index_literal, parse_q_list};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIVERGENT: i32 = 3;
pub const EXIT_INFRA: i32 = 4;

/// Largest degree cap the power-series sweeps accept.
pub const MAX_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityArg {
    Sum,
    Gf,
    Abreps,
    Euler,
    Drin,
    Height,
    Diagonal,
    All,
}

impl From<IdentityArg> for Identity {
    fn from(a: IdentityArg) -> Self {
        match a {
            IdentityArg::Sum => Identity::Sum,
            IdentityArg::Gf => Identity::Gf,
            IdentityArg::Abreps => Identity::Abreps,
            IdentityArg::Euler => Identity::Euler,
            IdentityArg::Drin => Identity::Drin,
            IdentityArg::Height => Identity::Height,
            IdentityArg::Diagonal => Identity::Diagonal,
            IdentityArg::All => Identity::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Zeta,
    #[value(name = "G0")]
    G0,
    DrinCoeffs,
}

#[derive(Debug, Parser)]
#[command(
    name = "qmzv",
    version,
    about = "Certified multiple q-zeta values and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comma-separated q values in (0, 1)
    #[arg(long, global = true, value_parser = q_list_arg)]
    q: Option<QList>,

    /// Target tail bound for every series
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Term budget per series
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: u64,

    #[arg(long, global = true)]
    max_weight: Option<u32>,

    #[arg(long, global = true)]
    depth: Option<u32>,

    /// Total-degree cap for power-series checks (at most 10)
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Single point `a+bi` for the generating-function check
    #[arg(long, global = true, value_parser = complex_arg, allow_hyphen_values = true)]
    z: Option<Complex64>,

    #[arg(long, global = true)]
    weight: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate `[3,1,1]`, `zeta*[2,1]`, `[3,1*2]` or a stuffle-expression JSON object
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run an identity sweep; exits 1 if any point fails
    Verify {
        #[arg(value_enum)]
        identity: IdentityArg,
    },
    /// Emit a table of values
    Table {
        #[arg(value_enum)]
        kind: TableKind,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct QList(Vec<f64>);

fn q_list_arg(s: &str) -> Result<QList, String> {
    parse_q_list(s).map(QList).map_err(|e| e.to_string())
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidIndex(_)
        | Error::InvalidQ(_)
        | Error::InvalidTolerance(_)
        | Error::InvalidBudget
        | Error::InvalidArgument(_) => EXIT_PARSE,
        Error::DivergentSeries(_) | Error::NonAdmissibleKey(_) => EXIT_DIVERGENT,
        _ => EXIT_INFRA,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INFRA,
            message: e.to_string(),
        }
    }
}

impl Cli {
    fn q_params(&self, default: &[f64]) -> Result<Vec<QParam>, Error> {
        self.q
            .as_ref()
            .map_or(default, |l| l.0.as_slice())
            .iter()
            .map(|&q| QParam::new(q, self.tol, self.max_terms))
            .collect()
    }

    fn cap(&self, default: usize) -> Result<usize, Error> {
        let cap = self.cap.unwrap_or(default);
        if !(2..=MAX_CAP).contains(&cap) {
            return Err(Error::InvalidArgument(format!(
                "--cap must lie in 2..={MAX_CAP}, got {cap}"
            )));
        }
        Ok(cap)
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Reports go to `out` unless `--out` names a file; diagnostics go to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match threads_from_env() {
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure {
                code: EXIT_INFRA,
                message: e.to_string(),
            }),
        },
        Ok(None) => execute(&cli),
        Err(f) => Err(f),
    };
    let (code, text) = match result {
        Ok(pair) => pair,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => out.write_all(text.as_bytes()).and_then(|()| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INFRA;
    }
    code
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var("QMZV_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure {
                code: EXIT_PARSE,
                message: format!("QMZV_THREADS must be a positive integer, got '{v}'"),
            }),
        },
        Err(_) => Ok(None),
    }
}

fn execute(cli: &Cli) -> Result<(i32, String), Failure> {
    match &cli.command {
        Command::Eval { expr } => cmd_eval(cli, expr).map(|t| (EXIT_OK, t)),
        Command::Verify { identity } => cmd_verify(cli, (*identity).into()),
        Command::Table { kind } => cmd_table(cli, *kind).map(|t| (EXIT_OK, t)),
    }
}

fn cmd_eval(cli: &Cli, expr: &str) -> Result<String, Failure> {
    let qps = cli.q_params(&[0.5])?;
    let ev = Evaluator::new();
    let mut table = Table::new(&["expr", "q", "value", "tail_bound", "terms_used"]);
    if expr.trim_start().starts_with('{') {
        let e = StuffleExpr::from_json(expr)?;
        let label = e.to_string();
        for qp in &qps {
            let v = eval_expr_with(&ev, &e, qp)?;
            table.push(vec![
                Cell::text(&label),
                Cell::Num(qp.q()),
                Cell::Num(v.value),
                Cell::Num(v.tail_bound),
                Cell::Int(v.terms_used as i64),
            ]);
        }
    } else {
        let lit = parse_index_literal(expr)?;
        for qp in &qps {
            let v = if lit.star {
                ev.qmzv_star(&lit.index, qp)?
            } else {
                ev.qmzv(&lit.index, qp)?
            };
            table.push(vec![
                Cell::text(&lit.label()),
                Cell::Num(qp.q()),
                Cell::Num(v.value),
                Cell::Num(v.tail_bound),
                Cell::Int(v.terms_used as i64),
            ]);
        }
    }
    Ok(table.render(cli.format)?)
}

fn sweep_config(cli: &Cli) -> Result<SweepConfig, Error> {
    let mut cfg = SweepConfig {
        q_list: cli
            .q
            .as_ref()
            .map_or_else(|| Q_GRID.to_vec(), |l| l.0.clone()),
        tol: cli.tol,
        max_terms: cli.max_terms,
        ..SweepConfig::default()
    };
    if let Some(w) = cli.max_weight {
        cfg.sum_max_weight = w;
        cfg.diagonal_weight = w;
    }
    if let Some(d) = cli.depth {
        cfg.sum_depth = Some(d);
        cfg.gf_max_depth = d;
    }
    if let Some(z) = cli.z {
        cfg.z_grid = vec![z];
    }
    if cli.cap.is_some() {
        let cap = cli.cap(cfg.drin_cap)?;
        cfg.drin_cap = cap;
        cfg.height_cap = cap;
    }
    Ok(cfg)
}

fn cmd_verify(cli: &Cli, identity: Identity) -> Result<(i32, String), Failure> {
    let cfg = sweep_config(cli)?;
    let reports = run_sweep(identity, &cfg)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let text = output::render_reports(&reports, cli.format)?;
    let code = if failed == 0 { EXIT_OK } else { EXIT_FAIL };
    Ok((code, text))
}

/// `# total=N passed=P failed=F` over a report stream.
pub fn summary_line(reports: &[VerifyReport]) -> String {
    let failed = reports.iter().filter(|r| !r.pass).count();
    format!(
        "# total={} passed={} failed={}",
        reports.len(),
        reports.len() - failed,
        failed
    )
}

fn cmd_table(cli: &Cli, kind: TableKind) -> Result<String, Failure> {
    let qps = cli.q_params(&[0.5])?;
    let v = Verifier::new();
    let table = match kind {
        TableKind::Zeta => {
            let max_weight = cli.max_weight.unwrap_or(5);
            let mut t = Table::new(&[
                "q",
                "index",
                "weight",
                "depth",
                "value",
                "tail_bound",
                "terms_used",
            ]);
            for qp in &qps {
                for w in 2..=max_weight {
                    for r in 1..w {
                        if cli.depth.is_some_and(|d| d != r) {
                            continue;
                        }
                        for idx in compositions(w, r).filter(|i| i.is_admissible()) {
                            let z = v.evaluator().qmzv(&idx, qp)?;
                            t.push(vec![
                                Cell::Num(qp.q()),
                                Cell::text(&idx.to_string()),
                                Cell::Int(w.into()),
                                Cell::Int(r.into()),
                                Cell::Num(z.value),
                                Cell::Num(z.tail_bound),
                                Cell::Int(z.terms_used as i64),
                            ]);
                        }
                    }
                }
            }
            t
        }
        TableKind::G0 => {
            let n = cli.weight.unwrap_or(4);
            if n < 2 {
                return Err(Error::InvalidArgument("--weight must be at least 2".into()).into());
            }
            let mut t = Table::new(&["q", "n", "r", "s", "count", "value", "bound"]);
            for qp in &qps {
                for r in 1..n {
                    for s in 1..=r.min(n - r) {
                        let count = crate::indices::enumerate_i0(n, r, s).count();
                        let g = v.g0(n, r, s, qp)?;
                        t.push(vec![
                            Cell::Num(qp.q()),
                            Cell::Int(n.into()),
                            Cell::Int(r.into()),
                            Cell::Int(s.into()),
                            Cell::Int(count as i64),
                            Cell::Num(g.value),
                            Cell::Num(g.tail_bound),
                        ]);
                    }
                }
            }
            t
        }
        TableKind::DrinCoeffs => {
            let cap = cli.cap(6)?;
            let mut t = Table::new(&["q", "m", "n", "value", "bound"]);
            for qp in &qps {
                let mut rows = v.drin_table(qp, cap)?;
                rows.sort_by_key(|&(m, n, _)| (m, n));
                for (m, n, z) in rows {
                    t.push(vec![
                        Cell::Num(qp.q()),
                        Cell::Int(m.into()),
                        Cell::Int(n.into()),
                        Cell::Num(z.value),
                        Cell::Num(z.error_bound()),
                    ]);
                }
            }
            t
        }
    };
    Ok(table.render(cli.format)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qmzv"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_text() {
        let (code, out, _) = run_args(&["eval", "[2,1]", "--q", "0.5"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("zeta[2,1]"), "{out}");
        assert!(out.contains("2.722032055"), "{out}");
    }

    #[test]
    fn eval_divergent_and_parse_errors() {
        let (code, _, err) = run_args(&["eval", "[1,2]", "--q", "0.5"]);
        assert_eq!(code, EXIT_DIVERGENT);
        assert!(
            err.contains("divergent: leading exponent must exceed 1"),
            "{err}"
        );
        assert_eq!(run_args(&["eval", "[2,x]"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["eval", "[2]", "--q", "1.5"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["eval", "[2]", "--tol", "-1"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["verify", "nonsense"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["verify", "drin", "--cap", "11"]).0, EXIT_PARSE);
    }

    #[test]
    fn star_shift_matches() {
        let (_, a, _) = run_args(&["eval", "zeta*[1]", "--q", "0.5", "--format", "csv"]);
        let (_, b, _) = run_args(&["eval", "[2]", "--q", "0.5", "--format", "csv"]);
        let value = |s: &str| {
            s.lines()
                .nth(1)
                .unwrap()
                .split(',')
                .nth(2)
                .unwrap()
                .to_string()
        };
        assert_eq!(value(&a), value(&b));
    }

    #[test]
    fn budget_exhaustion_is_infra() {
        let (code, _, _) = run_args(&[
            "eval",
            "[2]",
            "--q",
            "0.99",
            "--tol",
            "1e-14",
            "--max-terms",
            "10",
        ]);
        assert_eq!(code, EXIT_INFRA);
    }

    #[test]
    fn failing_sweep_exits_one() {
        // every q-point passes, so a failure has to come from a report
        let r = VerifyReport::new(
            "x",
            Default::default(),
            crate::verify::Side::Table(vec![]),
            crate::verify::Side::Table(vec![]),
            1.0,
            0.0,
        );
        assert_eq!(summary_line(&[r]), "# total=1 passed=0 failed=1");
    }
}
