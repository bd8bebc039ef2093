use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lifsync::io::config::spec_to_json;
use lifsync::io::{
    load_spec, preset, run_experiment, ExperimentKind, ExperimentSpec, PRESET_NAMES,
};
use lifsync::Result;

/// Simulate noisy LIF networks and estimate synchronization probabilities.
#[derive(Parser)]
#[command(name = "lifsync", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON spec.
    Run {
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a built-in experiment.
    Preset {
        /// Preset name (see --list).
        name: Option<String>,
        /// List the available presets.
        #[arg(long)]
        list: bool,
        /// Print the preset spec as JSON instead of running it.
        #[arg(long)]
        print: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Tabulate the closed-form bounds for a spec without simulating.
    Bounds {
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print the version.
    Version,
}

#[derive(Args)]
struct Overrides {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
}

impl Overrides {
    fn apply(&self, spec: &mut ExperimentSpec) {
        if let Some(seed) = self.seed {
            spec.sim.seed = seed;
        }
        if let Some(out) = &self.out {
            spec.output_path = out.clone();
        }
        if let Some(trials) = self.trials {
            spec.trials = trials;
        }
    }
}

fn init_pool() -> Result<()> {
    let Ok(raw) = std::env::var("LIFSYNC_WORKERS") else {
        return Ok(());
    };
    let workers: usize = raw.trim().parse().map_err(|_| {
        lifsync::Error::InvalidArgument(format!(
            "LIFSYNC_WORKERS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| lifsync::Error::InvalidArgument(e.to_string()))
}

fn run(mut spec: ExperimentSpec, overrides: &Overrides) -> Result<()> {
    overrides.apply(&mut spec);
    for w in spec.params.warnings() {
        eprintln!("warning: {w}");
    }
    let tables = run_experiment(&spec)?;
    for t in tables {
        println!(
            "{}/{}.csv ({} rows)",
            spec.output_path,
            t.name,
            t.rows.len()
        );
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { spec, overrides } => run(load_spec(spec)?, &overrides),
        Command::Bounds { spec, overrides } => {
            let mut spec = load_spec(spec)?;
            spec.kind = ExperimentKind::BoundsTable;
            run(spec, &overrides)
        }
        Command::Preset {
            name,
            list,
            print,
            overrides,
        } => {
            if list {
                for n in PRESET_NAMES {
                    println!("{n}");
                }
                return Ok(());
            }
            let Some(name) = name else {
                return Err(lifsync::Error::InvalidArgument(
                    "preset name required (try --list)".into(),
                ));
            };
            let mut spec = preset(&name)?;
            if print {
                overrides.apply(&mut spec);
                println!("{}", serde_json::to_string_pretty(&spec_to_json(&spec))?);
                return Ok(());
            }
            run(spec, &overrides)
        }
        Command::Version => {
            println!("lifsync {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_pool().and_then(|_| dispatch(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
