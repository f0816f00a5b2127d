use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use logsieve::synthgen::Region;
use logsieve::{cli, RunConfig};

#[derive(Parser)]
#[command(name = "logsieve", version, about = "Find crawler traffic in web access logs and build a blocklist")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score log files and write the blocklist, reports, plots and workload table.
    Analyze {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory; overrides `out_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Workload window in seconds; overrides `ds`.
        #[arg(long)]
        ds: Option<u32>,
        /// Log files; override `inputs`.
        inputs: Vec<PathBuf>,
    },
    /// Generate a labeled synthetic log.
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated region letters, or ALL.
        #[arg(long, default_value = "")]
        regions: String,
        #[arg(long, default_value_t = 50)]
        humans: usize,
    },
    /// Redraw the plots from a previous analyze run's output directory.
    Render {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(config: Option<&PathBuf>) -> logsieve::Result<RunConfig> {
    match config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn out_dir(flag: Option<PathBuf>, cfg: &RunConfig) -> PathBuf {
    flag.or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn run(args: Args) -> logsieve::Result<()> {
    match args.command {
        Command::Analyze { config, out, ds, inputs } => {
            let mut cfg = load(config.as_ref())?;
            if let Some(ds) = ds {
                if ds == 0 {
                    return Err(logsieve::Error::Invalid("--ds must be at least 1".into()));
                }
                cfg.workload.ds = ds;
            }
            let inputs = if inputs.is_empty() { cfg.inputs.clone() } else { inputs };
            let out = out_dir(out, &cfg);
            cli::cmd_analyze(&cfg, &inputs, &out, &mut std::io::stdout().lock())?;
        }
        Command::Synth { config, out, seed, regions, humans } => {
            let cfg = load(config.as_ref())?;
            let regions = Region::parse_list(&regions).map_err(logsieve::Error::Invalid)?;
            cli::cmd_synth(&cfg, &regions, humans, seed, &out_dir(out, &cfg))?;
        }
        Command::Render { config, out } => {
            let cfg = load(config.as_ref())?;
            cli::cmd_render(&cfg, &out_dir(out, &cfg))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("logsieve: {e}");
            ExitCode::FAILURE
        }
    }
}
