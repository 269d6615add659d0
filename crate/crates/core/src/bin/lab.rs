use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use numlab::lab::{self, LabError};
use numlab::rng::derive_seed;

#[derive(Parser)]
#[command(name = "lab", version, about = "Run and report reproducible numerical experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config and write its result.
    Run { config: PathBuf },
    /// Render a result file.
    Report {
        result: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
    },
    /// Print the seeds derived from a master seed for each label.
    Seeds {
        master: u64,
        #[arg(required = true)]
        labels: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Summary,
}

fn configure_threads() -> Result<(), LabError> {
    let Ok(raw) = std::env::var("LAB_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| LabError::Schema(format!("LAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| LabError::Run(numlab::Error::Internal(e.to_string())))
}

fn dispatch(cli: Cli) -> Result<(), LabError> {
    configure_threads()?;
    match cli.command {
        Command::Run { config } => {
            let out = lab::run_config_file(&config)?;
            println!("{}", out.display());
        }
        Command::Report { result, format } => {
            let r = lab::load_result(&result)?;
            match format {
                Format::Csv => print!("{}", lab::render_csv(&r)),
                Format::Summary => print!("{}", lab::render_summary(&r)),
            }
        }
        Command::Seeds { master, labels } => {
            for l in labels {
                println!("{l}\t{}", derive_seed(master, &l));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
