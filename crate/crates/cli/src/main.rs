use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use operad_core::cohomology::{betti_table, default_max_degree, BettiTable};
use operad_core::dynamics::{integrate, CsvWriter, ObserverRegistry, OpFile, SystemFile};
use operad_core::oscillator::{self, OscillatorParams};
use operad_core::verify::{standard_registry, VerifyConfig, VerifyReport};
use operad_core::{AlgebraSpec, OperadError, Rational, Scalar};

#[derive(Parser)]
#[command(name = "operad", version, about = "Operad calculus: identity checks, cohomology and Lax flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized identity suites.
    Verify(VerifyArgs),
    /// Cohomology dimensions of an associative algebra.
    Cohomology(CohomologyArgs),
    /// Integrate an operadic Lax system and stream invariants as CSV.
    Lax(LaxArgs),
    /// The harmonic oscillator and its operadic transport.
    Oscillator(OscillatorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cases run for every dimension from 1 up to this.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
    /// Cases per (dimension, variance).
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Float backend only.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Run only these suites (repeatable).
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Print suite names and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    corrupt_sign: bool,
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(long)]
    algebra: PathBuf,
    /// Top cochain degree (default depends on the dimension).
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LaxArgs {
    #[arg(long)]
    system: PathBuf,
    /// Overrides the step in the system file.
    #[arg(long)]
    dt: Option<f64>,
    /// Overrides the end time in the system file.
    #[arg(long)]
    t_end: Option<f64>,
    /// Append every coefficient of L to each row.
    #[arg(long)]
    emit_l: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OscillatorArgs {
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    q0: f64,
    #[arg(long, default_value_t = 0.0)]
    p0: f64,
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Initial operation (required for degree >= 2).
    #[arg(long)]
    l_init: Option<PathBuf>,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long)]
    emit_l: bool,
    /// Monodromy report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Operad(OperadError),
    Io(String),
    /// Suites ran but some failed.
    Verify,
}

impl From<OperadError> for Failure {
    fn from(e: OperadError) -> Self {
        Failure::Operad(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn exit_code(e: &OperadError) -> u8 {
    match e {
        OperadError::NotAssociative { .. } => 3,
        OperadError::Parse(_) => 4,
        OperadError::NonFinite { .. } => 5,
        OperadError::MissingInitialData { .. } => 6,
        _ => 2,
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let config = VerifyConfig {
        seed: args.seed,
        max_dim: args.dim,
        max_degree: args.max_degree,
        cases: args.cases,
        tol: args.tol,
        corrupt_sign: args.corrupt_sign,
        only: args.suites,
    };
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(OperadError::Config("tol must be non-negative".into()).into());
    }
    fn go<S: Scalar>(config: &VerifyConfig) -> Result<VerifyReport, OperadError> {
        standard_registry::<S>().run(config)
    }
    let mut out = open_out(&args.out)?;
    if args.list {
        for name in standard_registry::<Rational>().names() {
            writeln!(out, "{name}")?;
        }
        out.flush()?;
        return Ok(());
    }
    let report = match args.backend {
        BackendArg::Exact => go::<Rational>(&config)?,
        BackendArg::Float => go::<f64>(&config)?,
    };
    match args.format {
        Format::Text => out.write_all(report.to_text().as_bytes())?,
        Format::Machine => out.write_all(report.to_json().as_bytes())?,
    }
    out.flush()?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn betti_text(table: &BettiTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algebra {} (dim {})", table.algebra, table.dim);
    let _ = writeln!(s, "{:>3} {:>10} {:>8} {:>10} {:>6}", "n", "dim C^n", "rank ∂", "dim Ker", "H^n");
    for r in &table.rows {
        let _ = writeln!(s, "{:>3} {:>10} {:>8} {:>10} {:>6}", r.n, r.dim_cochains, r.rank, r.dim_kernel, r.dim_cohomology);
    }
    let dims: Vec<String> = table.cohomology_dims().iter().map(|d| d.to_string()).collect();
    let _ = writeln!(s, "H = ({})", dims.join(", "));
    s
}

fn run_cohomology(args: CohomologyArgs) -> Result<(), Failure> {
    let spec = AlgebraSpec::load(&args.algebra)?;
    let n_max = args.max_degree.unwrap_or_else(|| default_max_degree(spec.dim));
    let table = betti_table(&spec, n_max)?;
    let mut out = open_out(&args.out)?;
    match args.format {
        Format::Text => out.write_all(betti_text(&table).as_bytes())?,
        Format::Machine => {
            let mut json = serde_json::to_string_pretty(&table).expect("table serializes");
            json.push('\n');
            out.write_all(json.as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_lax(args: LaxArgs) -> Result<(), Failure> {
    let mut file = SystemFile::load(&args.system)?;
    if let Some(dt) = args.dt {
        file.dt = dt;
    }
    if let Some(t) = args.t_end {
        file.t_end = t;
    }
    let system = file.system()?;
    let mut names = file.observe.clone();
    if names.is_empty() {
        names.push("norm".into());
        match system.l0.deg() {
            1 => names.push("trace2".into()),
            2 => names.push("assoc_defect".into()),
            _ => {}
        }
    }
    let observers = ObserverRegistry::standard(&system).select(&names)?;
    let mut csv = CsvWriter::new(open_out(&args.out)?, args.emit_l);
    integrate(&system, &observers, |s| csv.write(s))?;
    csv.into_inner().flush()?;
    Ok(())
}

fn run_oscillator(args: OscillatorArgs) -> Result<(), Failure> {
    let l_init = args.l_init.as_ref().map(OpFile::load).transpose()?;
    let params = OscillatorParams::new(args.omega, args.q0, args.p0, args.degree, l_init)?;
    let system = oscillator::oscillator_system(&params, args.dt, args.t_end)?;
    let observers =
        oscillator::observer_registry(&system, params.omega).select(&oscillator::default_columns(params.degree))?;
    let mut csv = CsvWriter::new(open_out(&args.out)?, args.emit_l);
    integrate(&system, &observers, |s| csv.write(s))?;
    csv.into_inner().flush()?;

    let report = oscillator::monodromy_report(&params)?;
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::Machine => serde_json::to_string(&report).expect("report serializes") + "\n",
    };
    if args.out.is_some() {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        io::stderr().write_all(text.as_bytes())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Cohomology(a) => run_cohomology(a),
        Command::Lax(a) => run_lax(a),
        Command::Oscillator(a) => run_oscillator(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Operad(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
