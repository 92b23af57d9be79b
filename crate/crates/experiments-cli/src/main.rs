use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirichlet_neumann::DnMode;
use experiments_cli::{run, Experiment, RunConfig};

#[derive(Parser)]
#[command(name = "riglid", version, about = "Water-waves rigid-lid limit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSVs and manifest.json.
    Run(RunArgs),
    /// List the experiments and the criterion each one checks.
    List,
}

#[derive(Parser)]
struct RunArgs {
    /// Experiment name; may also come from --experiment or the config file.
    name: Option<Experiment>,
    #[arg(long)]
    experiment: Option<Experiment>,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (RIGLID_OUT takes precedence).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// One value sets epsilon; several set the sweep list.
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long = "dn-mode")]
    dn_mode: Option<DnMode>,
}

fn build_config(a: &RunArgs) -> Result<RunConfig, String> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::from_path(p).map_err(|e| e.to_string())?,
        None => {
            let e = a.name.or(a.experiment).ok_or("no experiment given (positional, --experiment or config)")?;
            RunConfig::new(e)
        }
    };
    match (a.name, a.experiment) {
        (Some(x), Some(y)) if x != y => return Err(format!("conflicting experiments {x} and {y}")),
        (Some(x), _) | (None, Some(x)) => cfg.experiment = x,
        _ => {}
    }
    if a.seed.is_some() {
        cfg.seed = a.seed;
    }
    match a.epsilon.as_deref() {
        Some([e]) => {
            cfg.params.epsilon = Some(*e);
            cfg.params.epsilon_list = None;
        }
        Some(list) if !list.is_empty() => cfg.params.epsilon_list = Some(list.to_vec()),
        _ => {}
    }
    if a.mu.is_some() {
        cfg.params.mu = a.mu;
        cfg.params.mu_list = None;
    }
    if a.grid_n.is_some() {
        cfg.grid.n = a.grid_n;
    }
    if a.dt.is_some() {
        cfg.solver.dt = a.dt;
    }
    if a.t_final.is_some() {
        cfg.solver.t_final = a.t_final;
    }
    if a.dn_mode.is_some() {
        cfg.solver.dn_mode = a.dn_mode;
    }
    if let Some(dir) = std::env::var_os("RIGLID_OUT").map(PathBuf::from).or_else(|| a.out.clone()) {
        cfg.output.dir = Some(dir);
    }
    Ok(cfg)
}

fn run_cmd(a: RunArgs) -> ExitCode {
    let resolved = match build_config(&a).and_then(|c| c.resolve().map_err(|e| e.to_string())) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&resolved)) {
        Ok(m) => {
            for a in &m.assertions {
                println!("criterion {} [{}]: {} {}", a.criterion, a.id, if a.passed { "PASS" } else { "FAIL" }, a.summary);
            }
            for f in &m.flags {
                println!("flag: {f}");
            }
            println!("wrote {} ({:.1} s)", resolved.out_dir.display(), m.wall_time_s);
            if m.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(a) => run_cmd(a),
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<20} criterion {}", e.name(), e.criterion());
            }
            ExitCode::SUCCESS
        }
    }
}
