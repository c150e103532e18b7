use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resolvent_quad::harness::config::parse_methods;
use resolvent_quad::harness::report::render_table;
use resolvent_quad::harness::shifts::{format_complex, resolve_shifts};
use resolvent_quad::harness::{run_experiment, write_report, ExperimentConfig, ShiftSpec};
use resolvent_quad::linalg::DEFAULT_TOL_HERM;
use resolvent_quad::mmio::{read_matrix_market, read_matrix_market_header};
use resolvent_quad::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rquad",
    version,
    about = "Resolvent quadratic forms for many shifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment.
    Run(RunArgs),
    /// Print a shift set, one `re im` pair per line.
    Shifts {
        #[arg(long, default_value = "unit-circle:m=16")]
        shifts: String,
        /// Needed for spectrum-offset sweeps.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Report structure and Hermitian symmetry of a Matrix Market file.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL_HERM)]
        tol: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// uniform | random:seed=N | file:PATH
    #[arg(long)]
    vector: Option<String>,
    /// unit-circle:m=16 | list:FILE | values:Z1,Z2 | spectrum-offset:zeta=..;lambda=min|max
    #[arg(long)]
    shifts: Option<String>,
    /// Comma-separated subset of lanczos,cocg,cocr,minres.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    lag: Option<usize>,
    /// none | dense | spectral
    #[arg(long)]
    reference: Option<String>,
    /// Seed shift index for COCG/COCR.
    #[arg(long)]
    seed_shift: Option<usize>,
    /// Record per-iteration histories.
    #[arg(long)]
    history: bool,
    /// Output directory for summary.json and history.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, Error> {
        let mut c = ExperimentConfig::default();
        if let Some(p) = &self.config {
            c.merge_config_file(p)?;
        }
        if let Some(m) = self.matrix {
            c.matrix = Some(m);
        }
        if let Some(v) = self.vector {
            c.vector = v.parse()?;
        }
        if let Some(s) = self.shifts {
            c.shifts = s.parse()?;
        }
        if let Some(m) = self.methods {
            c.methods = parse_methods(&m)?;
        }
        if let Some(r) = self.rtol {
            c.rtol = r;
        }
        if let Some(m) = self.max_iter {
            c.max_iter = m;
        }
        if let Some(d) = self.lag {
            c.lag = d;
        }
        if let Some(r) = self.reference {
            c.reference = r.parse()?;
        }
        if self.seed_shift.is_some() {
            c.seed_shift = self.seed_shift;
        }
        if self.history {
            c.history = true;
        }
        if let Some(o) = self.out {
            c.out = Some(o);
        }
        c.validate()?;
        Ok(c)
    }
}

fn run(args: RunArgs) -> Result<u8, Error> {
    let config = args.into_config()?;
    let report = run_experiment(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", render_table(&report));
    if let Some(dir) = &config.out {
        let files = write_report(&report, dir)?;
        eprintln!("wrote {}", files.summary.display());
        if let Some(h) = files.history {
            eprintln!("wrote {}", h.display());
        }
    }
    Ok(if report.all_failed() {
        EXIT_NUMERICAL
    } else {
        0
    })
}

fn shifts(spec: &str, matrix: Option<PathBuf>) -> Result<u8, Error> {
    let spec: ShiftSpec = spec.parse()?;
    let a = matrix.map(read_matrix_market).transpose()?;
    for z in resolve_shifts(&spec, a.as_ref())? {
        println!("{:e} {:e}    # {}", z.re, z.im, format_complex(z));
    }
    Ok(0)
}

fn check(path: PathBuf, tol: f64) -> Result<u8, Error> {
    let header = read_matrix_market_header(&path)?;
    println!("file: {}", path.display());
    println!(
        "header: {:?} {:?} {:?}",
        header.format, header.field, header.symmetry
    );
    let a = read_matrix_market(&path)?;
    let h = a.hermitian_check(tol);
    println!("n: {}", a.n());
    println!("nnz: {}", a.nnz());
    println!("frobenius norm: {:.6e}", a.frobenius_norm());
    println!("max |entry|: {:.6e}", h.max_entry);
    println!("max asymmetry: {:.3e}", h.max_asymmetry);
    println!("hermitian: {}", if h.hermitian { "yes" } else { "no" });
    println!(
        "real symmetric: {}",
        if a.is_real_symmetric() { "yes" } else { "no" }
    );
    Ok(if h.hermitian { 0 } else { EXIT_CONFIG })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Shifts { shifts: s, matrix } => shifts(&s, matrix),
        Command::Check { matrix, tol } => check(matrix, tol),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
