//! Command-line front end. Exit codes: 0 success, 1 invalid input, 2 not
//! periodic, 3 rank too low, 4 solver exhausted, 5 not split over the field,
//! 6 internal inconsistency.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::decompose::{
    check_sqrt2_obstruction, idempotent_torsion, is_periodic, torsion_squarezero,
    verify_certificate, SearchBudget, TnOptions,
};
use crate::error::{Error, Result};
use crate::generate::{generate, GenConfig};
use crate::json;
use crate::matrix::{canonical_form, charpoly, minpoly, Matrix};
use crate::scalar::Field;

#[derive(Parser, Debug)]
#[command(
    name = "periodic",
    version,
    about = "Exact decompositions of periodic matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, periodicity witness and canonical form of a matrix.
    Analyze {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        order_bound: Option<u64>,
    },
    /// Idempotent + torsion (`et`) or torsion + square-zero (`tn`) certificate.
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        order_bound: Option<u64>,
        /// Seed for randomized search steps.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Re-checks a certificate by exact arithmetic.
    Verify {
        /// Certificate file.
        #[arg(long)]
        input: PathBuf,
        /// Matrix to check against; defaults to the one stored in the certificate.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded periodic matrix with its generating data.
    Generate {
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        rank_min: usize,
        #[arg(long, default_value_t = 12)]
        size_cap: usize,
        #[arg(long)]
        torsion_only: bool,
        /// Matrix file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Generating data file; defaults to `<output>.truth.json`.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Built-in demonstrations.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
}

#[derive(Args, Debug)]
pub struct Io {
    /// Matrix JSON `{"field": ..., "rows": ...}`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overrides the field stored in the input: `q`, `fp:<p>` or `qsqrt:<d>`.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    #[arg(long)]
    budget_max_rank: Option<usize>,
    #[arg(long)]
    budget_max_height: Option<i64>,
    #[arg(long)]
    budget_max_sweeps: Option<usize>,
    #[arg(long)]
    budget_draws: Option<usize>,
    #[arg(long)]
    budget_max_targets: Option<usize>,
    #[arg(long)]
    budget_max_solves: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Et,
    Tn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// The 3×3 matrix over ℚ(√2) that has no torsion + square-zero decomposition.
    Remark29,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPeriodic | Error::NotTorsion => 2,
        Error::RankTooLow { .. } => 3,
        Error::SolverExhausted(_) | Error::Derogatory => 4,
        Error::NotSplitOverField => 5,
        Error::InternalInconsistency(_) => 6,
        Error::DivisionByZero
        | Error::FieldMismatch
        | Error::NotMonic
        | Error::TraceMismatch
        | Error::DimensionMismatch(_)
        | Error::InvalidInput(_) => 1,
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    json::parse(&text)
}

fn read_matrix(path: &Path, field: Option<&str>) -> Result<Matrix> {
    let field = field.map(Field::parse).transpose()?;
    json::matrix_from_json(&read_json(path)?, field)
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// A closed reader (`| head`) is not an error.
fn write_stdout(text: &str) -> Result<()> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Error::InvalidInput(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn emit(output: Option<&Path>, v: &Value) -> Result<()> {
    let text = json::to_pretty(v);
    match output {
        Some(p) => write_atomic(p, &text),
        None => write_stdout(&text),
    }
}

fn analyze(io: &Io, order_bound: Option<u64>) -> Result<()> {
    let a = read_matrix(&io.input, io.field.as_deref())?;
    let n = a.n();
    let rank = a.rank();
    let witness = is_periodic(&a, order_bound)?;
    let canonical = match canonical_form(&a) {
        Ok(c) => json::canonical_to_json(&c),
        Err(Error::NotSplitOverField) => Value::Null,
        Err(e) => return Err(e),
    };
    let v = json!({
        "field": json::field_to_json(a.field()),
        "n": n,
        "rank": rank,
        "charpoly": json::poly_to_json(&charpoly(&a)),
        "minpoly": json::poly_to_json(&minpoly(&a)),
        "periodic": witness.as_ref().map(json::witness_to_json),
        "tn_rank_condition": 2 * rank >= n,
        "canonical": canonical,
    });
    emit(io.output.as_deref(), &v)
}

fn budget_from(args: &BudgetArgs, seed: Option<u64>) -> SearchBudget {
    let mut b = SearchBudget::default();
    if args.budget_max_rank.is_some() {
        b.max_rank = args.budget_max_rank;
    }
    if let Some(h) = args.budget_max_height {
        b.max_height = h;
    }
    if let Some(s) = args.budget_max_sweeps {
        b.max_sweeps = s;
    }
    if let Some(d) = args.budget_draws {
        b.draws = d;
    }
    if let Some(t) = args.budget_max_targets {
        b.max_targets = t;
    }
    if let Some(s) = args.budget_max_solves {
        b.max_solves = s;
    }
    if let Some(s) = seed {
        b.seed = s;
    }
    b
}

fn decompose(
    mode: Mode,
    io: &Io,
    order_bound: Option<u64>,
    seed: Option<u64>,
    budget: &BudgetArgs,
) -> Result<()> {
    let a = read_matrix(&io.input, io.field.as_deref())?;
    let cert = match mode {
        Mode::Et => idempotent_torsion(&a)?,
        Mode::Tn => torsion_squarezero(
            &a,
            &TnOptions {
                budget: budget_from(budget, seed),
                order_bound,
            },
        )?,
    };
    let report = verify_certificate(&a, &cert);
    if !report.passed() {
        return Err(Error::InternalInconsistency(format!(
            "certificate failed {:?}",
            report.failed()
        )));
    }
    emit(
        io.output.as_deref(),
        &json::certificate_to_json(&a, &cert, &report),
    )
}

fn verify(input: &Path, matrix: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let (cert, stored) = json::certificate_from_json(&read_json(input)?)?;
    let a = match (matrix, stored) {
        (Some(p), _) => read_matrix(p, None)?,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::InvalidInput("no matrix to verify against".into())),
    };
    let report = verify_certificate(&a, &cert);
    emit(
        output,
        &json!({"passed": report.passed(), "checks": json::checks_to_json(&report)}),
    )?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "certificate failed {:?}",
            report.failed()
        )))
    }
}

fn truth_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}.truth.json"))
}

fn generate_cmd(cfg: &GenConfig, output: Option<&Path>, truth: Option<&Path>) -> Result<()> {
    let g = generate(cfg)?;
    let truth_v = json!({
        "field": json::field_to_json(cfg.field),
        "seed": cfg.seed,
        "size": cfg.size,
        "divisors": g.divisors.iter().map(json::divisor_to_json).collect::<Vec<_>>(),
        "block": json::rows_to_json(&g.block),
        "conjugator": json::rows_to_json(&g.conjugator),
    });
    let mut matrix_v = json::matrix_to_json(&g.matrix);
    let truth_file = truth
        .map(Path::to_path_buf)
        .or_else(|| output.map(truth_path));
    match truth_file {
        Some(p) => write_atomic(&p, &json::to_pretty(&truth_v))?,
        None => {
            matrix_v["truth"] = truth_v;
        }
    }
    emit(output, &matrix_v)
}

fn demo_remark29() -> Result<()> {
    let report = check_sqrt2_obstruction()?;
    write_stdout(&report.to_string())?;
    if report.obstructed {
        Ok(())
    } else {
        Err(Error::InternalInconsistency(
            "obstruction not established".into(),
        ))
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { io, order_bound } => analyze(&io, order_bound),
        Command::Decompose {
            mode,
            io,
            order_bound,
            seed,
            budget,
        } => decompose(mode, &io, order_bound, seed, &budget),
        Command::Verify {
            input,
            matrix,
            output,
        } => verify(&input, matrix.as_deref(), output.as_deref()),
        Command::Generate {
            field,
            size,
            seed,
            rank_min,
            size_cap,
            torsion_only,
            output,
            truth,
        } => {
            let mut cfg = GenConfig::new(Field::parse(&field)?, size, seed);
            cfg.rank_min = rank_min;
            cfg.size_cap = size_cap;
            cfg.torsion_only = torsion_only;
            generate_cmd(&cfg, output.as_deref(), truth.as_deref())
        }
        Command::Demo {
            name: Demo::Remark29,
        } => demo_remark29(),
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main_exit_code() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
