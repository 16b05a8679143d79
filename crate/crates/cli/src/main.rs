use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use circulant::compute::{compute, Request};
use circulant::report::{CsvRow, InvariantResult, Method, Quantity, Tolerances};
use circulant::sweep::{sweep, SweepConfig, SweepQuantity};
use circulant::verify::{verify, VerifyConfig};
use circulant::{CirculantSpec, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Directory for output files when `--output` is not given.
const OUTPUT_DIR_ENV: &str = "CIRCULANT_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "circulant", version, about = "Invariants of circulant graphs obtained by deleting distance classes from K_N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one invariant by one method.
    Compute(ComputeArgs),
    /// Cross-check closed forms, spectral sums and oracles over a range of N.
    Verify(VerifyArgs),
    /// Tabulate scaled closed-form quantities against their large-N limits.
    Sweep(SweepArgs),
    /// Dump the Laplacian spectrum.
    Eig(EigArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct SpecArgs {
    /// Number of vertices.
    #[arg(long, required_unless_present = "spec")]
    n: Option<usize>,
    /// Deleted distance classes, e.g. `--delete 1,3`.
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    delete: Vec<usize>,
    /// Full spec as JSON: {"n":7,"deleted":[1]} or {"n":6,"weights":{"1":"1/2","3":"2"}}.
    #[arg(long, conflicts_with = "n")]
    spec: Option<String>,
}

impl SpecArgs {
    fn build(&self) -> Result<CirculantSpec, Error> {
        match (&self.spec, self.n) {
            (Some(json), _) => serde_json::from_str(json)
                .map_err(|e| Error::InvalidSpec(format!("--spec: {e}"))),
            (None, Some(n)) => CirculantSpec::deletion(n, self.delete.iter().copied()),
            (None, None) => Err(Error::InvalidSpec("either --n or --spec is required".into())),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    /// Output file; defaults to stdout, or a file under $CIRCULANT_OUTPUT_DIR when set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// resistance, trees, forests, hitting, kirchhoff or eigenvalues.
    #[arg(long, value_parser = parse_from_str::<Quantity>)]
    quantity: Quantity,
    /// closed, spectral, oracle or monte-carlo.
    #[arg(long, value_parser = parse_from_str::<Method>, default_value = "spectral")]
    method: Method,
    /// Source vertex of a single pair.
    #[arg(long, requires = "v")]
    u: Option<usize>,
    /// Target vertex of a single pair.
    #[arg(long, requires = "u")]
    v: Option<usize>,
    /// Residues `q`, each meaning the pair (0, q); comma-separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["u", "v"])]
    q: Vec<usize>,
    /// Exact rational results (closed and oracle methods).
    #[arg(long)]
    exact: bool,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo walk count [default: 10000].
    #[arg(long)]
    walks: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Single N (shorthand for --n-min N --n-max N).
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<usize>,
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 15)]
    n_max: usize,
    /// Skip even N.
    #[arg(long)]
    odd_only: bool,
    /// Check only G_{N,r}.
    #[arg(long, conflicts_with = "delete")]
    r: Option<usize>,
    /// Check only K_N minus these classes.
    #[arg(long, value_delimiter = ',')]
    delete: Vec<usize>,
    /// Add a Monte Carlo hitting-time check with this many walks per spec.
    #[arg(long)]
    walks: Option<usize>,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance overrides [default: 1e-9 each].
    #[arg(long)]
    tol_resistance: Option<f64>,
    #[arg(long)]
    tol_trees: Option<f64>,
    #[arg(long)]
    tol_forests: Option<f64>,
    #[arg(long)]
    tol_hitting: Option<f64>,
    #[arg(long)]
    tol_kirchhoff: Option<f64>,
    #[arg(long)]
    tol_eigenvalues: Option<f64>,
    /// Allowed Monte Carlo deviation in standard errors.
    #[arg(long)]
    tol_sigmas: Option<f64>,
    /// Report file (JSON); defaults to stdout, or a file under $CIRCULANT_OUTPUT_DIR when set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// tree-ratio, resistance-scaled, kirchhoff-scaled or rho-gap.
    #[arg(long, value_parser = parse_from_str::<SweepQuantity>)]
    quantity: SweepQuantity,
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    step: usize,
    /// Residue for resistance-scaled.
    #[arg(long, default_value_t = 1)]
    q: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EigArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// closed, spectral or oracle.
    #[arg(long, value_parser = parse_from_str::<Method>, default_value = "spectral")]
    method: Method,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Precondition(String),
    Disconnected(String),
    VerificationFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Disconnected { .. } => Failure::Disconnected(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Precondition(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Precondition(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Precondition(format!("json error: {e}"))
    }
}

fn open_output(path: Option<&PathBuf>, default_name: &str) -> Result<Box<dyn Write>, Failure> {
    let path = match path {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUTPUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(default_name)),
    };
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Jsonl => "jsonl",
        Format::Csv => "csv",
    }
}

fn write_results(records: &[InvariantResult], out: &OutputArgs, stem: &str) -> Result<(), Failure> {
    let sink = open_output(out.output.as_ref(), &format!("{stem}.{}", extension(out.format)))?;
    match out.format {
        Format::Jsonl => {
            let mut sink = sink;
            for r in records {
                serde_json::to_writer(&mut sink, r)?;
                writeln!(sink)?;
            }
            sink.flush()?;
        }
        Format::Csv => write_csv(sink, records.iter().flat_map(|r| r.csv_rows()))?,
    }
    Ok(())
}

fn write_csv(sink: Box<dyn Write>, rows: impl Iterator<Item = CsvRow>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn run_compute(args: ComputeArgs) -> Result<(), Failure> {
    let spec = args.spec.build()?;
    let mut req = Request::new(spec, args.quantity, args.method);
    req.exact = args.exact;
    req.seed = args.seed;
    req.walks = args.walks;
    req.pairs = match (args.u, args.v) {
        (Some(u), Some(v)) => vec![(u, v)],
        _ => args.q.iter().map(|&q| (0, q)).collect(),
    };
    let records = compute(&req)?;
    write_results(&records, &args.out, "compute")
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let (n_min, n_max) = match args.n {
        Some(n) => (n, n),
        None => (args.n_min, args.n_max),
    };
    let mut cfg = VerifyConfig::new(n_min, n_max);
    cfg.odd_only = args.odd_only;
    cfg.classes = match (args.r, args.delete.is_empty()) {
        (Some(r), _) => Some(vec![vec![r]]),
        (None, false) => Some(vec![args.delete.clone()]),
        (None, true) => None,
    };
    cfg.monte_carlo = args.walks.map(|w| (args.seed, w));
    let t: &mut Tolerances = &mut cfg.tolerances;
    for (slot, flag) in [
        (&mut t.resistance, args.tol_resistance),
        (&mut t.trees, args.tol_trees),
        (&mut t.forests, args.tol_forests),
        (&mut t.hitting, args.tol_hitting),
        (&mut t.kirchhoff, args.tol_kirchhoff),
        (&mut t.eigenvalues, args.tol_eigenvalues),
        (&mut t.monte_carlo_sigmas, args.tol_sigmas),
    ] {
        if let Some(x) = flag {
            *slot = x;
        }
    }
    let report = verify(&cfg)?;
    let mut sink = open_output(args.output.as_ref(), "verify-report.json")?;
    serde_json::to_writer_pretty(&mut sink, &report)?;
    writeln!(sink)?;
    sink.flush()?;
    eprint!("{}", report.human_summary());
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::VerificationFailed)
    }
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let cfg = SweepConfig {
        quantity: args.quantity,
        n_min: args.n_min,
        n_max: args.n_max,
        step: args.step,
        q: args.q,
    };
    let table = sweep(&cfg)?;
    let stem = format!("sweep-{}", args.quantity);
    let sink = open_output(args.out.output.as_ref(), &format!("{stem}.{}", extension(args.out.format)))?;
    match args.out.format {
        Format::Jsonl => {
            let mut sink = sink;
            for row in &table.rows {
                serde_json::to_writer(&mut sink, row)?;
                writeln!(sink)?;
            }
            sink.flush()?;
        }
        Format::Csv => write_csv(sink, table.rows.iter().map(|r| r.csv_row()))?,
    }
    eprintln!("{}", table.footer());
    Ok(())
}

fn run_eig(args: EigArgs) -> Result<(), Failure> {
    let spec = args.spec.build()?;
    let records = compute(&Request::new(spec, Quantity::Eigenvalues, args.method))?;
    write_results(&records, &args.out, "eig")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Verify(a) => run_verify(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Eig(a) => run_eig(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::VerificationFailed) => ExitCode::from(1),
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disconnected(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
