//! Command-line front end. Every subcommand writes CSV.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence,
//! 3 self-test failure.

mod parse;
mod selftest;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{convergence_study, voronovskaja_residuals, Interval};
use crate::error::{Error, Result};
use crate::exact::{format_rat, to_f64, BigRat};
use crate::moments_paper::{case_exemplars, classify_case, compare_moments, paper_degrees};
use crate::operators::{corpus, empirical_positivity, Evaluator, OperatorKind, SequenceSpec, TestFunction};

pub use parse::{parse_interval, parse_n_list, parse_rational, parse_sequence};
pub use table::num;
use table::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "baskakov", version, about = "Baskakov-type operators, exact moments and convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpName {
    Baskakov,
    Durrmeyer,
    Mod1,
    Mod2,
    SplitA,
    SplitB,
}

#[derive(Debug, Args)]
struct OpArgs {
    #[arg(long, value_enum)]
    op: OpName,
    /// a0(n): INT, INT/INT or ratfn:p0,p1/q0,q1 (first-order kinds only).
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    /// a1(n), same syntax as --a0.
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    /// Accept sequences that break 2 a0 - a1 = 1.
    #[arg(long)]
    unchecked: bool,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Single evaluation point.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["x_min", "x_max", "points"])]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an operator on a function over points.
    Eval {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        f: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Printed moment formulas against the exact oracle.
    Moments(MomentArgs),
    /// Printed central-moment formulas against the exact oracle.
    CentralMoments(MomentArgs),
    /// Sup-norm errors over n with the fitted order.
    Converge {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value = "16,32,64,128,256")]
        n_list: String,
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0:2")]
        interval: String,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Scaled residuals against the asymptotic limit.
    Voronovskaja {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "100,200,400,800")]
        n_list: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimum first-order weight per sequence case.
    Positivity {
        #[arg(long, allow_hyphen_values = true, requires = "a1")]
        a0: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "a0")]
        a1: Option<String>,
        #[arg(long, default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 120)]
        k_max: u64,
        #[arg(long, allow_hyphen_values = true, default_value = "0:2")]
        interval: String,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the built-in consistency checks.
    Selftest {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct MomentArgs {
    #[command(flatten)]
    op: OpArgs,
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Highest degree to report (default: every printed degree).
    #[arg(long)]
    max_degree: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

fn sequence_spec(op: &OpArgs) -> Result<SequenceSpec> {
    let (Some(a0), Some(a1)) = (&op.a0, &op.a1) else {
        return Err(Error::Domain("--a0 and --a1 are required for first-order kinds".into()));
    };
    let (a0, a1) = (parse_sequence(a0)?, parse_sequence(a1)?);
    if op.unchecked {
        Ok(SequenceSpec::unchecked(a0, a1))
    } else {
        SequenceSpec::new(a0, a1)
    }
}

fn operator(op: &OpArgs) -> Result<OperatorKind> {
    let needs_sequences = matches!(op.op, OpName::Mod1 | OpName::SplitA | OpName::SplitB);
    if !needs_sequences && (op.a0.is_some() || op.a1.is_some()) {
        return Err(Error::Domain("--a0/--a1 apply only to mod1, split-a and split-b".into()));
    }
    Ok(match op.op {
        OpName::Baskakov => OperatorKind::Baskakov,
        OpName::Durrmeyer => OperatorKind::BaskakovDurrmeyer,
        OpName::Mod2 => OperatorKind::Mod2,
        OpName::Mod1 => OperatorKind::Mod1(sequence_spec(op)?),
        OpName::SplitA => OperatorKind::SplitA(sequence_spec(op)?),
        OpName::SplitB => OperatorKind::SplitB(sequence_spec(op)?),
    })
}

fn function(name: &str) -> Result<TestFunction> {
    corpus::by_name(name).ok_or_else(|| {
        Error::Domain(format!("unknown function `{name}`; known: {}", corpus::NAMES.join(", ")))
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("--tol must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

fn grid(g: &GridArgs) -> Result<Vec<f64>> {
    if let Some(x) = &g.x {
        let x = to_f64(&parse_rational(x)?);
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("--x must be a finite point in [0, inf), got {x}")));
        }
        return Ok(vec![x]);
    }
    match (g.x_min, g.x_max, g.points) {
        (Some(a), Some(b), Some(points)) => Interval::new(a, b)?.grid(points),
        _ => Err(Error::Domain("give --x or all of --x-min, --x-max, --points".into())),
    }
}

fn describe(table: &mut Table, command: &str, kind: &OperatorKind) {
    table.meta("baskakov", env!("CARGO_PKG_VERSION")).meta("command", command).meta("op", kind.label());
    if let Some(s) = kind.sequences() {
        table.meta("a0", &s.a0).meta("a1", &s.a1);
    }
}

fn eval(op: &OpArgs, n: u64, f: &str, g: &GridArgs, tol: f64) -> Result<Table> {
    let kind = operator(op)?;
    let f = function(f)?;
    check_tol(tol)?;
    let xs = grid(g)?;
    let values = Evaluator::new().apply_many(&kind, n, &f, &xs, tol)?;
    let mut table = Table::new(&["x", "value"]);
    describe(&mut table, "eval", &kind);
    table.meta("n", n).meta("f", &f.id).meta("tol", num(tol));
    for (x, v) in xs.iter().zip(values) {
        table.row(vec![num(*x), num(v)]);
    }
    Ok(table)
}

fn moments(args: &MomentArgs, central: bool) -> Result<Table> {
    let kind = operator(&args.op)?;
    let x: BigRat = parse_rational(&args.x)?;
    let degrees = paper_degrees(&kind, central);
    let Some(&top) = degrees.last() else {
        return Err(Error::Domain(format!("no printed formulas for {}", kind.label())));
    };
    let rows = compare_moments(&kind, args.n, &x, args.max_degree.unwrap_or(top), central)?;
    let mut table = Table::new(&["j", "paper_value", "oracle_value", "match"]);
    describe(&mut table, if central { "central-moments" } else { "moments" }, &kind);
    table.meta("n", args.n).meta("x", format_rat(&x));
    for r in &rows {
        table.row(vec![
            r.j.to_string(),
            format_rat(&r.paper_value),
            format_rat(&r.oracle_value),
            r.matches.to_string(),
        ]);
        if !r.matches {
            table.footer(&format!("discrepancy_j{}", r.j), format_rat(&r.discrepancy));
        }
    }
    if central && matches!(kind, OperatorKind::Mod2) && rows.iter().any(|r| r.j == 6) {
        table.footer("note", "order-6 denominator factor printed blank, evaluated as (n-5)");
    }
    Ok(table)
}

fn converge(op: &OpArgs, n_list: &str, f: &str, interval: &str, points: usize, tol: f64) -> Result<Table> {
    let kind = operator(op)?;
    let f = function(f)?;
    check_tol(tol)?;
    let ns = parse_n_list(n_list)?;
    let interval = parse_interval(interval)?;
    let report = convergence_study(&Evaluator::new(), &kind, &f, interval, points, &ns, tol)?;
    let mut table = Table::new(&["n", "sup_error"]);
    describe(&mut table, "converge", &kind);
    table
        .meta("f", &f.id)
        .meta("interval", format!("{}:{}", num(interval.a), num(interval.b)))
        .meta("points", points)
        .meta("tol", num(tol));
    for (n, e) in report.n_list.iter().zip(&report.sup_errors) {
        table.row(vec![n.to_string(), num(*e)]);
    }
    table.footer("slope", num(report.slope)).footer("r2", num(report.r_squared));
    Ok(table)
}

fn voronovskaja(op: &OpArgs, f: &str, x: &str, n_list: &str, tol: f64) -> Result<Table> {
    let kind = operator(op)?;
    let f = function(f)?;
    check_tol(tol)?;
    let x = to_f64(&parse_rational(x)?);
    let ns = parse_n_list(n_list)?;
    let order = if matches!(kind, OperatorKind::Mod2) { 2 } else { 1 };
    let report = voronovskaja_residuals(&Evaluator::new(), order, &kind, &f, x, &ns, tol)?;
    let mut table = Table::new(&["n", "scaled_residual", "limit", "abs_gap"]);
    describe(&mut table, "voronovskaja", &kind);
    table.meta("f", &f.id).meta("x", num(x)).meta("order", order).meta("tol", num(tol));
    if order == 2 {
        table.meta("limit_source", "derived from exact second-order moment limits");
    }
    for ((n, residual), gap) in ns.iter().zip(&report.scaled_residuals).zip(&report.abs_gaps) {
        table.row(vec![n.to_string(), num(*residual), num(report.limit_value), num(*gap)]);
    }
    Ok(table)
}

fn positivity(
    a0: Option<&str>,
    a1: Option<&str>,
    n: u64,
    k_max: u64,
    interval: &str,
    points: usize,
) -> Result<Table> {
    let xs = parse_interval(interval)?.grid(points)?;
    let specs = match (a0, a1) {
        (Some(a0), Some(a1)) => {
            let spec = SequenceSpec::unchecked(parse_sequence(a0)?, parse_sequence(a1)?);
            vec![(classify_case(&spec, n)?, spec)]
        }
        _ => case_exemplars(),
    };
    let mut table = Table::new(&["case", "min_weight", "argmin_k", "argmin_x"]);
    table
        .meta("baskakov", env!("CARGO_PKG_VERSION"))
        .meta("command", "positivity")
        .meta("n", n)
        .meta("k_max", k_max)
        .meta("grid", format!("{}:{}/{}", num(xs[0]), num(xs[xs.len() - 1]), points));
    for (case, spec) in specs {
        let scan = empirical_positivity(&spec, n, &xs, k_max)?;
        table.meta(&case.to_string(), &spec);
        table.row(vec![case.to_string(), num(scan.min_weight), scan.argmin_k.to_string(), num(scan.argmin_x)]);
    }
    Ok(table)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_INVALID,
    }
}

fn emit(text: &str, out: &OutArgs, stdout: &mut dyn Write) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Domain(format!("cannot write output: {e}"))),
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<i32> {
    let (table, out) = match command {
        Command::Eval { op, n, f, grid, tol, out } => (eval(op, *n, f, grid, *tol)?, out),
        Command::Moments(args) => (moments(args, false)?, &args.out),
        Command::CentralMoments(args) => (moments(args, true)?, &args.out),
        Command::Converge { op, n_list, f, interval, points, tol, out } => {
            (converge(op, n_list, f, interval, *points, *tol)?, out)
        }
        Command::Voronovskaja { op, f, x, n_list, tol, out } => (voronovskaja(op, f, x, n_list, *tol)?, out),
        Command::Positivity { a0, a1, n, k_max, interval, points, out } => {
            (positivity(a0.as_deref(), a1.as_deref(), *n, *k_max, interval, *points)?, out)
        }
        Command::Selftest { out } => {
            let report = selftest::run();
            emit(&report.render(), out, stdout)?;
            return Ok(if report.passed() { EXIT_OK } else { EXIT_SELFTEST });
        }
    };
    emit(&table.render()?, out, stdout)?;
    Ok(EXIT_OK)
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_INVALID
                }
            };
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
