use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geophase::frames::FAMILY_REGISTRY;
use geophase_cli::config::SCENARIO_KINDS;
use geophase_cli::{parse, run_config, Config, EXIT_CONFIG, EXIT_OK};

/// Holonomic gate synthesis, sweeps and convergence studies.
#[derive(Parser)]
#[command(name = "geophase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in a config and write report.json plus CSVs.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "geophase-out")]
        out: PathBuf,
        /// Worker threads; defaults to the config's `workers`, then the CPU count.
        #[arg(long)]
        workers: Option<usize>,
        /// Skip remaining scenarios after the first failure.
        #[arg(long)]
        fail_fast: bool,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// List registered Hamiltonian families and scenario kinds.
    ListFamilies,
}

fn load(path: &PathBuf) -> Result<Config, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("config error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_CONFIG)
    })?;
    parse(&text).map_err(|e| {
        eprintln!("config error: {e}");
        ExitCode::from(EXIT_CONFIG)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            fail_fast,
        } => {
            if workers == Some(0) {
                eprintln!("config error: --workers must be at least 1");
                return ExitCode::from(EXIT_CONFIG);
            }
            let config = match load(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match run_config(&config, &out, workers, fail_fast) {
                Ok((code, path)) => {
                    println!("report: {}", path.display());
                    if code != EXIT_OK {
                        eprintln!("run finished with exit code {code}; see {}", path.display());
                    }
                    ExitCode::from(code)
                }
                Err(e) => {
                    eprintln!("error: cannot write reports to {}: {e}", out.display());
                    ExitCode::FAILURE
                }
            }
        }
        Command::Validate { config } => match load(&config) {
            Ok(c) => {
                println!("ok: {} scenario(s)", c.scenarios.len());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::ListFamilies => {
            for f in FAMILY_REGISTRY.iter() {
                let settings: Vec<String> = f.settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!(
                    "{}\tdim={}\tparameters=[{}]\tsettings=[{}]\t{}",
                    f.name,
                    f.dim,
                    f.parameters.join(", "),
                    settings.join(", "),
                    f.summary
                );
            }
            println!("scenario kinds: {}", SCENARIO_KINDS.join(", "));
            ExitCode::SUCCESS
        }
    }
}
