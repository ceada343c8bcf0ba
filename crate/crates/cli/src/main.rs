use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dtqw::series::LoopKernel;
use dtqw_cli::{
    emit_results, line_demo, memchain_demo, run_sweeps, scaling_report, table1, ClassicalMethod,
    CliError, Emit, Format, QuantumMethod, Result, SweepConfig, SweepResult,
    DEFAULT_WINDOW_FRAC,
};

/// Quantum and classical walks on the binary tree: sweeps, asymptotics, fits and tables.
#[derive(Parser, Debug)]
#[command(name = "dtqw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output encoding.
    #[arg(long, default_value = "csv", value_parser = parse::<Format>)]
    format: Format,
    /// Destination file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Starting levels, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Largest time step; defaults to max(4n, n + 600) per level.
    #[arg(long)]
    t_max: Option<usize>,
    /// Scalar type for the numerics.
    #[arg(long, default_value = "f64", value_parser = ["f32", "f64"])]
    precision: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Copy)]
struct KernelArg {
    /// Loop kernel: `walk` (matches the step rule) or `published` (printed closed form).
    #[arg(long, default_value = "walk", value_parser = parse_kernel)]
    kernel: LoopKernel,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Direct simulation of the quantum walk (full tree or lumped levels).
    Simulate {
        #[arg(long, default_value = "projected", value_parser = parse::<QuantumMethod>)]
        method: QuantumMethod,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Root probability from generating-function coefficients.
    Series {
        #[command(flatten)]
        kernel: KernelArg,
        /// Also emit classical (exact recursion) and asymptotic columns.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Saddle-point approximation to the root probability.
    Asympt {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Classical hitting probability of the root.
    Classical {
        #[arg(long, default_value = "dp", value_parser = parse::<ClassicalMethod>)]
        method: ClassicalMethod,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Peak times and probabilities for both walks at the reference levels.
    Table1 {
        #[command(flatten)]
        kernel: KernelArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exponential run-time fits, quantum against classical.
    Fit {
        #[command(flatten)]
        kernel: KernelArg,
        /// Explicit levels, comma separated; overrides the range flags.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        n_min: usize,
        #[arg(long, default_value_t = 500)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        n_step: usize,
        /// Fraction of the level range (from the top) used by the fit.
        #[arg(long, default_value_t = DEFAULT_WINDOW_FRAC)]
        window_frac: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Persistent classical walk on a cycle, via the memory-2 chain.
    MemchainDemo {
        /// Number of sites on the cycle.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Probability of keeping direction.
        #[arg(long, default_value_t = 0.7)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        t_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Quantum walk on a line built from the two-neighbor unitary.
    LineDemo {
        /// Mixing parameter of the site unitary.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        t_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse<T: std::str::FromStr<Err = CliError>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_kernel(s: &str) -> std::result::Result<LoopKernel, String> {
    s.parse::<LoopKernel>().map_err(|e| e.to_string())
}

fn sweep(args: &SweepArgs, cfg: SweepConfig) -> Result<Vec<SweepResult>> {
    let cfg = SweepConfig {
        t_max: args.t_max,
        ..cfg
    };
    match args.precision.as_str() {
        "f32" => run_sweeps::<f32>(&args.n, &cfg),
        _ => run_sweeps::<f64>(&args.n, &cfg),
    }
}

fn emit<E: Emit + ?Sized>(value: &E, out: &OutputArgs) -> Result<()> {
    emit_results(value, out.format, out.out.as_deref())
}

fn only(quantum: Option<QuantumMethod>, classical: Option<ClassicalMethod>) -> SweepConfig {
    SweepConfig {
        quantum,
        classical,
        asymptotic: false,
        ..SweepConfig::default()
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { method, sweep: s } => {
            emit(&sweep(&s, only(Some(method), None))?, &s.output)
        }
        Command::Series {
            kernel,
            compare,
            sweep: s,
        } => {
            let cfg = SweepConfig {
                quantum: Some(QuantumMethod::Series),
                classical: compare.then_some(ClassicalMethod::Dp),
                asymptotic: compare,
                kernel: kernel.kernel,
                t_max: None,
            };
            emit(&sweep(&s, cfg)?, &s.output)
        }
        Command::Asympt { sweep: s } => {
            let cfg = SweepConfig {
                asymptotic: true,
                ..only(None, None)
            };
            emit(&sweep(&s, cfg)?, &s.output)
        }
        Command::Classical { method, sweep: s } => {
            emit(&sweep(&s, only(None, Some(method)))?, &s.output)
        }
        Command::Table1 { kernel, output } => emit(&table1(kernel.kernel)?, &output),
        Command::Fit {
            kernel,
            n,
            n_min,
            n_max,
            n_step,
            window_frac,
            output,
        } => {
            let ns: Vec<usize> = if n.is_empty() {
                if n_step == 0 || n_min == 0 || n_min > n_max {
                    return Err(CliError::Parameter(format!(
                        "bad level range {n_min}..={n_max} step {n_step}"
                    )));
                }
                (n_min..=n_max).step_by(n_step).collect()
            } else {
                n
            };
            emit(&scaling_report(&ns, kernel.kernel, window_frac)?, &output)
        }
        Command::MemchainDemo { n, p, t_max, output } => {
            emit(&memchain_demo(n, p, t_max)?, &output)
        }
        Command::LineDemo { p, t_max, output } => emit(&line_demo(p, t_max)?, &output),
    }
}

fn error_line(message: &str, kind: &str) {
    let line = serde_json::json!({ "error": message, "kind": kind });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            error_line(e.render().to_string().trim(), "usage");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error_line(&e.to_string(), e.kind());
            ExitCode::FAILURE
        }
    }
}
