use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rlsnet::driver::{config::parse_pairs, convergence_study, env_out_dir, run, RunConfig};
use rlsnet::Error;

/// Multi-region interface networks with the regional level-set method.
#[derive(Parser)]
#[command(name = "rlsnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write metrics and snapshots.
    Run(Common),
    /// Run a scenario at several resolutions and report observed orders.
    Study {
        #[command(flatten)]
        common: Common,
        /// Comma separated grid sizes.
        #[arg(long, value_delimiter = ',', default_value = "32,64,128,256")]
        resolutions: Vec<usize>,
    },
}

#[derive(Args)]
struct Common {
    scenario: String,
    /// Flat `key = value` file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    rk: Option<String>,
    #[arg(long)]
    operator: Option<String>,
    #[arg(long)]
    reinit_every: Option<usize>,
    /// Narrow-band width in cells, or `off`.
    #[arg(long)]
    band: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    end_time: Option<String>,
    /// Output directory; RLSNET_OUT is used when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn build(&self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::for_scenario(&self.scenario)?;
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_pairs(&parse_pairs(&text)?)?;
        }
        let flags = [
            ("n", self.n.map(|v| v.to_string())),
            ("scheme", self.scheme.clone()),
            ("cfl", self.cfl.clone()),
            ("rk", self.rk.clone()),
            ("operator", self.operator.clone()),
            ("reinit_every", self.reinit_every.map(|v| v.to_string())),
            ("band", self.band.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("end_time", self.end_time.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        if let Some(dir) = self.out.clone().or_else(env_out_dir) {
            cfg.out_dir = Some(dir);
        }
        if cfg.out_dir.is_none() {
            cfg.out_dir = Some(PathBuf::from("out"));
        }
        let end = cfg.end_time;
        cfg.snapshot_times.retain(|&t| t <= end);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(common) => {
            let cfg = common.build()?;
            let report = run(&cfg)?;
            let dir = cfg.out_dir.as_deref().unwrap_or(std::path::Path::new("."));
            println!("{} steps to t = {}; artifacts in {}", report.steps, report.final_time, dir.display());
            if let Some(last) = report.rows.last() {
                if let (Some(e1), Some(ei)) = (last.eps1, last.eps_inf) {
                    println!("eps1 = {e1:.6e}, epsinf = {ei:.6e}");
                }
            }
        }
        Command::Study { common, resolutions } => {
            let cfg = common.build()?;
            let table = convergence_study(&cfg, &resolutions)?;
            print!("{}", rlsnet::driver::io::study_csv(&table));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
