use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use decomposable::engine::{Mode, SelectionConfig};
use decomposable::oracle::verify_trajectory;
use decomposable_cli::edges::read_edge_list;
use decomposable_cli::{emit, ingest, select, CliError, Format};

#[derive(Parser)]
#[command(name = "decomp", version, about = "Stepwise selection of decomposable models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Forward,
    Backward,
    Alternating,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a model from a CSV file.
    Select {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "forward")]
        mode: ModeArg,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        min_delta: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        max_clique_size: Option<u64>,
        /// json, dot or tsv-trace.
        #[arg(long, default_value = "json")]
        format: String,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start from this chordal edge list instead of the default model.
        #[arg(long)]
        init_edges: Option<PathBuf>,
        /// Record wall-clock time per step in the JSON manifest.
        #[arg(long)]
        timings: bool,
        /// Compare the clique graph against a rebuild after every step.
        #[arg(long)]
        check: bool,
    },
    /// Check the incremental structures against reference implementations
    /// along a random trajectory.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Select {
            input,
            mode,
            max_steps,
            min_delta,
            max_clique_size,
            format,
            out,
            init_edges,
            timings,
            check,
        } => {
            let format: Format = format.parse()?;
            let data = ingest(&input)?;
            let start = init_edges
                .map(|p| read_edge_list(&p, data.names()))
                .transpose()?;
            let config = SelectionConfig {
                mode: match mode {
                    ModeArg::Forward => Mode::Forward,
                    ModeArg::Backward => Mode::Backward,
                    ModeArg::Alternating => Mode::Alternating,
                },
                max_steps: max_steps.unwrap_or(usize::MAX),
                min_delta,
                max_clique_size: max_clique_size.map(|k| k as usize),
                check_invariants: check,
            };
            let manifest = select(&data, &input.display().to_string(), config, start, timings)?;
            write_output(out.as_ref(), &emit(&manifest, format)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed, n, steps } => {
            let report = verify_trajectory(seed, n, steps)?;
            let mut bytes = serde_json::to_vec_pretty(&report)?;
            bytes.push(b'\n');
            write_output(None, &bytes)?;
            Ok(if report.is_clean() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("decomp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
