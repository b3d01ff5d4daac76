use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use mscps::experiment::comparison_report;
use mscps::{run_experiment, save_instance, sensitivity_sweep, verify, ExperimentConfig};

#[derive(Parser)]
#[command(name = "mscps", version, about = "Coordinated search for free charging stations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Simulated runs per instance.
    #[arg(long)]
    runs: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; all cores by default.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every configured setting on every instance.
    Run(Common),
    /// Rerun the settings that depend on the global penalty over a grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Global penalty values; defaults to the config's `beta_grid`.
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
    },
    /// Write generated instances as JSON files.
    Generate(Common),
    /// Run the oracle suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_config(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(r) = c.runs {
        cfg.runs = r;
    }
    Ok(cfg)
}

fn init_pool(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot start the worker pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run(c) => {
            init_pool(c.jobs)?;
            let cfg = load_config(&c)?;
            let out = run_experiment(&cfg, &c.out)?;
            print!("{}", comparison_report(&out.cells, cfg.reference_setting()?));
            for f in &out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Sweep { common, beta } => {
            init_pool(common.jobs)?;
            let cfg = load_config(&common)?;
            let (rows, path) = sensitivity_sweep(&cfg, &beta, &common.out)?;
            println!("{} rows, wrote {}", rows.len(), path.display());
        }
        Command::Generate(c) => {
            let cfg = load_config(&c)?;
            let instances = mscps::experiment::build_instances(&cfg)?;
            std::fs::create_dir_all(&c.out).with_context(|| format!("cannot create {}", c.out.display()))?;
            for e in &instances {
                let speed = e.params.as_ref().map(|p| p.speed_kmh);
                let path = c.out.join(format!("instance_{:04}.json", e.index));
                save_instance(&path, &e.instance, speed)?;
            }
            println!("wrote {} instances to {}", instances.len(), c.out.display());
        }
        Command::Verify { seed } => {
            let results = verify::run_all(seed);
            for r in &results {
                println!("{r}");
            }
            return Ok(results.iter().all(|r| r.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
