use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use windsite_core::batch::{self, AnalysisKind, RunConfig};

/// Wind-farm siting analyses: voltage quality, wind–diesel reliability,
/// geographic smoothing, capacity credit and levelized cost.
#[derive(Parser, Debug)]
#[command(name = "windsite", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Run configuration file (TOML).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration by name (see `windsite presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory; overrides the configuration's `output_dir`.
    #[arg(long, env = "WINDSITE_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Voltage-quality assessment of the configured PQ scenarios.
    Pq(Common),
    /// Diesel, wind and wind–diesel availability and reliability curves.
    Reliability(Common),
    /// Portfolio series, duration curves and variation ranges.
    Aggregate(Common),
    /// Peak-window capacity credit with rolling averages.
    Credit(Common),
    /// Cash-flow ledgers, LCOE and sensitivity sweeps.
    Lcoe(Common),
    /// Coupled versus conventional portfolio LCOE over reduction grids.
    Compare(Common),
    /// Every analysis selected in a configuration.
    Run {
        /// Run configuration file (TOML).
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long, env = "WINDSITE_OUT")]
        out: Option<PathBuf>,
    },
    /// List built-in configurations.
    Presets,
}

fn load(config: Option<&PathBuf>, preset: Option<&str>, default_preset: &str) -> anyhow::Result<RunConfig> {
    Ok(match (config, preset) {
        (Some(p), _) => batch::load_config(p).with_context(|| format!("loading {}", p.display()))?,
        (None, Some(name)) => batch::load_preset(name)?,
        (None, None) => batch::load_preset(default_preset)?,
    })
}

fn single(kind: AnalysisKind, c: &Common) -> anyhow::Result<(RunConfig, Option<PathBuf>)> {
    let default_preset = match kind {
        AnalysisKind::Pq => "table-3.5-scenarios",
        AnalysisKind::Aggregate => "case-ab",
        _ => "dabaa-zafarana",
    };
    let mut cfg = load(c.config.as_ref(), c.preset.as_deref(), default_preset)?;
    cfg.analyses = vec![kind];
    if let Err(e) = cfg.validate() {
        bail!("{e}");
    }
    Ok((cfg, c.out.clone()))
}

fn execute() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    let (cfg, out) = match &cli.command {
        Command::Pq(c) => single(AnalysisKind::Pq, c)?,
        Command::Reliability(c) => single(AnalysisKind::Reliability, c)?,
        Command::Aggregate(c) => single(AnalysisKind::Aggregate, c)?,
        Command::Credit(c) => single(AnalysisKind::Credit, c)?,
        Command::Lcoe(c) => single(AnalysisKind::Lcoe, c)?,
        Command::Compare(c) => single(AnalysisKind::Compare, c)?,
        Command::Run { config, preset, out } => {
            if config.is_none() && preset.is_none() {
                bail!("`run` needs a configuration file or --preset");
            }
            (load(config.as_ref(), preset.as_deref(), "")?, out.clone())
        }
        Command::Presets => {
            for name in batch::preset_names() {
                println!("{name}");
            }
            return Ok(true);
        }
    };
    let report = batch::run(&cfg, out.as_deref())?;
    print!("{report}");
    Ok(report.all_ok())
}

fn main() -> ExitCode {
    match execute() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
