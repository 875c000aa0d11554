use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use charloc::harness::{self, rows::csv_line, ExperimentConfig, ExperimentId, Format};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "charloc", version, about = "Character formula experiments for SL(2,R) and SU(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's experiment id.
        #[arg(long)]
        experiment: Option<String>,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn load(path: &Path, experiment: Option<&str>, out: Option<PathBuf>) -> Result<ExperimentConfig> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if let Some(id) = experiment {
        config.experiment = ExperimentId::parse(id)?;
        config.validate()?;
    }
    if let Some(out) = out {
        config.output_dir = out;
    }
    Ok(config)
}

fn run(config: &ExperimentConfig) -> Result<bool> {
    let dir = &config.output_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let echo = dir.join("config.echo.json");
    fs::write(&echo, config.to_json() + "\n")
        .with_context(|| format!("writing {}", echo.display()))?;

    let csv_path = dir.join("rows.csv");
    let file =
        File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    let mut csv = BufWriter::new(file);
    writeln!(csv, "{}", harness::rows::CSV_HEADER)?;
    let mut write_error = None;
    let rows = harness::run_with(config, |row| {
        let line = writeln!(csv, "{}", csv_line(row)).and_then(|_| csv.flush());
        if let Err(e) = line {
            write_error.get_or_insert(e);
        }
        eprintln!(
            "{} rel_err={:.3e}{}",
            row.experiment.as_str(),
            row.rel_err,
            row.error.as_deref().map(|e| format!(" error: {e}")).unwrap_or_default()
        );
    })?;
    if let Some(e) = write_error {
        return Err(e).with_context(|| format!("writing {}", csv_path.display()));
    }
    harness::emit(&rows, Format::Json, &dir.join("rows.json"))?;
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    eprintln!(
        "{} rows, {} failed; outputs in {}",
        rows.len(),
        failed,
        dir.display()
    );
    Ok(failed == 0)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            experiment,
            out,
            threads,
        } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build_global()
                    .context("configuring the thread pool")?;
            }
            let config = load(&config, experiment.as_deref(), out)?;
            let ok = run(&config)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
