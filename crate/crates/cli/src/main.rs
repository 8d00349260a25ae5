//! `horizon-eur`: single-point reports, grid sweeps, figure data and the
//! invariant suite.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 bad arguments or domain error,
//! 3 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use horizon_eur::channel::{hawking_temperature, BlackHoleParams};
use horizon_eur::sweep::{
    self, evaluate, evaluate_point, linear_grid, write_rows, OutputFormat, StateFamily, SweepConfig,
};
use horizon_eur::validate::{self, ValidateOptions};
use horizon_eur::{Error, ObservableSpec};

#[derive(Parser)]
#[command(
    name = "horizon-eur",
    version,
    about = "Entropic uncertainty bounds near a GHS dilaton black hole"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every bound for one state, temperature and observable pair
    Report(ReportArgs),
    /// Evaluate a (p, T) grid and write CSV or JSON rows
    Sweep(SweepArgs),
    /// Write fig2.csv … fig7.csv
    Figures(FiguresArgs),
    /// Run the invariant suites
    Validate(ValidateArgs),
}

#[derive(Args)]
struct Observables {
    /// Alice's first observable: x, y, z or a Bloch direction "theta,phi"
    #[arg(long = "obs-q", default_value = "x", allow_hyphen_values = true)]
    q: ObservableSpec,

    /// Alice's second observable
    #[arg(long = "obs-r", default_value = "z", allow_hyphen_values = true)]
    r: ObservableSpec,
}

#[derive(Args)]
struct ReportArgs {
    /// bell-diagonal, werner or x-state
    #[arg(long)]
    state: StateFamily,

    #[arg(long)]
    p: f64,

    /// Hawking temperature
    #[arg(long, required_unless_present = "mass", conflicts_with_all = ["mass", "dilaton"])]
    temp: Option<f64>,

    /// Black hole mass M (with --dilaton, instead of --temp)
    #[arg(long, requires = "dilaton")]
    mass: Option<f64>,

    /// Dilaton charge D
    #[arg(long, requires = "mass")]
    dilaton: Option<f64>,

    #[arg(long, default_value_t = 1.0)]
    omega: f64,

    #[command(flatten)]
    observables: Observables,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    state: StateFamily,

    /// Single probability (instead of a p range)
    #[arg(long, conflicts_with_all = ["p_min", "p_max", "p_step"])]
    p: Option<f64>,

    #[arg(long, default_value_t = 0.0)]
    p_min: f64,

    #[arg(long, default_value_t = 1.0)]
    p_max: f64,

    #[arg(long, default_value_t = 0.1)]
    p_step: f64,

    /// Single temperature (instead of a T range)
    #[arg(long, conflicts_with_all = ["t_min", "t_max", "t_step", "t_list"])]
    temp: Option<f64>,

    #[arg(long, requires_all = ["t_max", "t_step"], conflicts_with = "t_list")]
    t_min: Option<f64>,

    #[arg(long, requires_all = ["t_min", "t_step"])]
    t_max: Option<f64>,

    #[arg(long, requires_all = ["t_min", "t_max"])]
    t_step: Option<f64>,

    /// Comma-separated temperatures
    #[arg(long, value_delimiter = ',')]
    t_list: Option<Vec<f64>>,

    #[arg(long, default_value_t = 1.0)]
    omega: f64,

    #[command(flatten)]
    observables: Observables,

    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value = "csv")]
    format: OutputFormat,

    /// Worker threads (defaults to all cores)
    #[arg(long, env = "HORIZON_EUR_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Output directory
    #[arg(long, default_value = "figures")]
    out: PathBuf,

    #[arg(long, env = "HORIZON_EUR_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Seed for the random-state suites
    #[arg(long, default_value_t = ValidateOptions::default().seed)]
    seed: u64,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure {
        code: 3,
        message: e.to_string(),
    }
}

/// Six decimals, with `-0.000000` folded into `0.000000`.
fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn report(args: ReportArgs) -> Result<(), Failure> {
    let t = match (args.temp, args.mass, args.dilaton) {
        (Some(t), _, _) => t,
        (None, Some(mass), Some(dilaton)) => {
            hawking_temperature(BlackHoleParams::new(mass, dilaton)?)?
        }
        _ => unreachable!("clap enforces --temp or --mass/--dilaton"),
    };
    let q = args.observables.q.observable()?;
    let r = args.observables.r.observable()?;
    let report = evaluate_point(args.state, args.p, t, args.omega, &q, &r)?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut emit = || -> io::Result<()> {
        writeln!(out, "{:<16} {}", "family", args.state)?;
        writeln!(out, "{:<16} {}", "p", fixed6(args.p))?;
        writeln!(out, "{:<16} {}", "T", fixed6(t))?;
        writeln!(out, "{:<16} {}", "omega", fixed6(args.omega))?;
        writeln!(out, "{:<16} {}", "obs_q", args.observables.q)?;
        writeln!(out, "{:<16} {}", "obs_r", args.observables.r)?;
        for (name, value) in report.fields() {
            writeln!(out, "{name:<16} {}", fixed6(value))?;
        }
        if report.qsk_lower < 0.0 {
            writeln!(
                out,
                "note: negative key rate, the state cannot support quantum key distribution"
            )?;
        }
        Ok(())
    };
    emit().map_err(io_failure)
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    let p_grid = match args.p {
        Some(p) => vec![p],
        None => linear_grid(args.p_min, args.p_max, args.p_step)?,
    };
    let t_grid = match (
        &args.temp,
        &args.t_list,
        args.t_min,
        args.t_max,
        args.t_step,
    ) {
        (Some(t), _, _, _, _) => vec![*t],
        (None, Some(list), _, _, _) => list.clone(),
        (None, None, Some(min), Some(max), Some(step)) => linear_grid(min, max, step)?,
        _ => {
            return Err(Failure {
                code: 2,
                message: "give --temp, --t-list or --t-min/--t-max/--t-step".into(),
            })
        }
    };
    let mut config = SweepConfig::new(args.state, p_grid, t_grid);
    config.omega = args.omega;
    config.q_axis = args.observables.q;
    config.r_axis = args.observables.r;
    config.output_path = args.out.clone();
    config.format = args.format;
    config.validate()?;
    Ok(config)
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let config = sweep_config(&args)?;
    let rows = evaluate(&config, args.jobs)?;
    match &config.output_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure {
                code: 3,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
            write_rows(&rows, config.format, BufWriter::new(file))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => write_rows(&rows, config.format, io::stdout().lock())?,
    }
    Ok(())
}

fn figures(args: FiguresArgs) -> Result<(), Failure> {
    let paths = sweep::write_figures(&args.out, args.jobs)?;
    for path in paths {
        println!("{}", path.display());
    }
    Ok(())
}

fn run_validate(args: ValidateArgs) -> Result<(), Failure> {
    let summary = validate::run(&ValidateOptions {
        seed: args.seed,
        kraus_perturbation: None,
    });
    for suite in &summary.suites {
        let cases: usize = suite.invariants.iter().map(|i| i.cases).sum();
        println!(
            "{:<20} {}/{} invariants passed ({} cases)",
            suite.name,
            suite.passed_count(),
            suite.invariants.len(),
            cases
        );
        for inv in suite.invariants.iter().filter(|i| !i.passed()) {
            println!(
                "  FAIL {} ({}/{} cases, worst {:e})",
                inv.name, inv.failures, inv.cases, inv.worst
            );
        }
    }
    if summary.all_passed() {
        println!("all invariants passed (seed {})", args.seed);
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("failing invariants: {}", summary.failing().join(", ")),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Report(args) => report(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Figures(args) => figures(args),
        Command::Validate(args) => run_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
