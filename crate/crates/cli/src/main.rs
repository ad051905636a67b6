//! `pqlab` — batch experiment runner.
//!
//! `pqlab run <config.json> [--seed S] [--out DIR]` executes one
//! experiment config and writes a CSV and a JSON summary; outputs are
//! byte-identical for identical configs and seeds. `pqlab verify
//! <summary.json>` re-runs the embedded config and checks that the
//! recorded results reproduce exactly.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 validation error, 3 cap
//! breach.

use clap::{Parser, Subcommand};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use pqlab_cli::config::ExperimentConfig;
use pqlab_cli::experiments::{execute, ExperimentOutput};

#[derive(Parser)]
#[command(name = "pqlab", version, about = "Experiment runner for the pqlab laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a JSON experiment config ("-" reads it from stdin).
    Run {
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides the config's out_dir; default ".").
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the config embedded in a summary and check reproducibility.
    Verify { summary: PathBuf },
}

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CAP: u8 = 3;

fn core_error_exit(e: &pqlab_core::Error) -> u8 {
    match e {
        pqlab_core::Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_VALIDATION,
    }
}

fn read_config(path: &Path) -> Result<String, u8> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| {
            eprintln!("error: reading config from stdin: {e}");
            EXIT_IO
        })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| {
            eprintln!("error: reading {}: {e}", path.display());
            EXIT_IO
        })
    }
}

fn run(config_path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<(), u8> {
    let raw = read_config(config_path)?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&raw).map_err(|e| {
        eprintln!("error: invalid config: {e}");
        EXIT_VALIDATION
    })?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let out_dir = out
        .or_else(|| cfg.out_dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let output = execute(&cfg).map_err(|e| {
        eprintln!("error: {e}");
        core_error_exit(&e)
    })?;

    std::fs::create_dir_all(&out_dir).map_err(|e| {
        eprintln!("error: creating {}: {e}", out_dir.display());
        EXIT_IO
    })?;
    let write = |name: &str, bytes: &[u8]| -> Result<PathBuf, u8> {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| {
            eprintln!("error: writing {}: {e}", path.display());
            EXIT_IO
        })?;
        Ok(path)
    };
    let json_bytes = render_summary(&output);
    let csv_path = write(&output.csv_name, output.csv.as_bytes())?;
    let json_path = write(&output.json_name, &json_bytes)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

fn render_summary(output: &ExperimentOutput) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(&output.summary).expect("summary serializes");
    bytes.push(b'\n');
    bytes
}

fn verify(summary_path: &Path) -> Result<(), u8> {
    let raw = std::fs::read_to_string(summary_path).map_err(|e| {
        eprintln!("error: reading {}: {e}", summary_path.display());
        EXIT_IO
    })?;
    let recorded: serde_json::Value = serde_json::from_str(&raw).map_err(|e| {
        eprintln!("error: invalid summary: {e}");
        EXIT_VALIDATION
    })?;
    let cfg: ExperimentConfig =
        serde_json::from_value(recorded["config"].clone()).map_err(|e| {
            eprintln!("error: summary carries no valid config: {e}");
            EXIT_VALIDATION
        })?;
    let output = execute(&cfg).map_err(|e| {
        eprintln!("error: {e}");
        core_error_exit(&e)
    })?;

    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        println!("[{}] {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    check(
        "summary reproduces byte-identically",
        render_summary(&output) == raw.as_bytes(),
    );
    check("results match", output.summary["results"] == recorded["results"]);
    check(
        "version matches",
        output.summary["version"] == recorded["version"],
    );
    // When the recorded CSV sits next to the summary, require identity.
    if let Some(csv_name) = recorded["files"]["csv"].as_str() {
        let csv_path = summary_path
            .parent()
            .unwrap_or(Path::new("."))
            .join(csv_name);
        if csv_path.exists() {
            let recorded_csv = std::fs::read(&csv_path).map_err(|e| {
                eprintln!("error: reading {}: {e}", csv_path.display());
                EXIT_IO
            })?;
            check("csv reproduces byte-identically", recorded_csv == output.csv.as_bytes());
        }
    }
    if ok {
        Ok(())
    } else {
        Err(EXIT_VALIDATION)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run { config, seed, out } => run(&config, seed, out),
        Cmd::Verify { summary } => verify(&summary),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
