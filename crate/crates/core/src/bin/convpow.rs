use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use convpow::cli::{self, OutputFormat, Report, RunConfig, Suite, VerifyArgs, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "convpow", version, about = "Convolution powers of 1/x: exact series and quadrature cross-checks")]
struct Args {
    /// Truncation order of 1/x series (default: $CONVPOW_N or 64)
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Float mantissa bits (at most 53)
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Local b-file for comparing last rows of A^s
    #[arg(long, global = true)]
    bfile: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print A^s with optional identity checks
    Amatrix {
        s: usize,
        #[arg(long)]
        check: bool,
    },
    /// Coefficients q_{n,s}, s = 1..s_max, by both routes
    Qcoeff { n: usize, s_max: usize },
    /// beta_0 .. beta_{n_max} with error bars
    Beta { n_max: usize },
    /// f_n(y) from every path, or phi^{*n}(x) with --conv
    Eval {
        n: Option<usize>,
        y: Option<f64>,
        /// Convolution power and argument: --conv N X
        #[arg(long, num_args = 2, value_names = ["N", "X"], allow_negative_numbers = true)]
        conv: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        smax: Option<usize>,
    },
}

fn run(args: Args) -> convpow::Result<Report> {
    let mut cfg = RunConfig::from_env()?;
    if let Some(n) = args.order {
        cfg.order = n;
    }
    if let Some(b) = args.precision_bits {
        cfg.precision_bits = b;
    }
    if let Some(t) = args.tol {
        cfg.quad_tol = t;
    }
    cfg.format = match args.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    cfg.bfile = args.bfile;

    match args.command {
        Command::Amatrix { s, check } => cli::cmd_amatrix(s, check, &cfg),
        Command::Qcoeff { n, s_max } => cli::cmd_qcoeff(n, s_max, &cfg),
        Command::Beta { n_max } => cli::cmd_beta(n_max, &cfg),
        Command::Eval { n, y, conv, lambda, a } => match (conv, n, y) {
            (Some(c), None, None) => {
                if c[0] < 1.0 || c[0].fract() != 0.0 {
                    return Err(convpow::Error::Config(format!("--conv power must be a positive integer, got {}", c[0])));
                }
                cli::cmd_eval_conv(c[0] as usize, c[1], lambda, a, &cfg)
            }
            (None, Some(n), Some(y)) => cli::cmd_eval(n, y, &cfg),
            _ => Err(convpow::Error::Config("eval takes either `N Y` or `--conv N X`".into())),
        },
        Command::Verify { suite, n, y, nmax, smax } => {
            let suite: Suite = suite.parse()?;
            cli::cmd_verify(suite, &VerifyArgs { n, y, nmax, smax }, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(args) {
        Ok(report) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", report.render());
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAILED {}: {}", c.name, c.detail);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
