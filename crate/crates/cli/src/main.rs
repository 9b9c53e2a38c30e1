use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use muxsim::scenario::{
    calibrate_scenario, load_scenario, prepare, repeater_table, run_repeater, run_sweep, run_tomography, sweep_table,
    tomography_table, write_csv, ConfigError, Metadata, Mode, ScenarioConfig, ScenarioError, Table,
};

#[derive(Parser)]
#[command(name = "muxsim", version, about = "Multiplexed entanglement interface simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rates, visibilities and Bell figures along the configured sweep axis.
    Sweep(Common),
    /// Link success, distribution time and link quality per mode count.
    Repeater(Common),
    /// Fit the straight-line Bell law and the per-basis noise.
    Calibrate(Common),
    /// Reconstructed two-qubit state of each source and of the interface.
    Tomography(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML). Defaults apply to every key left out.
    #[arg(long)]
    config: Option<PathBuf>,
    /// analytic, mc or both.
    #[arg(long)]
    mode: Option<Mode>,
    /// Monte Carlo cycles per basis and sweep point.
    #[arg(long)]
    cycles: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(c: &Common) -> Result<ScenarioConfig, ScenarioError> {
    let mut cfg = match &c.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError::Parse { line: None, message: format!("cannot read {}: {e}", p.display()) })?;
            load_scenario(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(m) = c.mode {
        cfg.mode = m;
    }
    if let Some(n) = c.cycles {
        cfg.cycles = n;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(o) = &c.out {
        cfg.output = Some(o.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Analytic => "analytic",
        Mode::Mc => "mc",
        Mode::Both => "both",
    }
}

fn run(cli: Cli) -> Result<(), ScenarioError> {
    let (name, common) = match &cli.command {
        Command::Sweep(c) => ("sweep", c),
        Command::Repeater(c) => ("repeater", c),
        Command::Calibrate(c) => ("calibrate", c),
        Command::Tomography(c) => ("tomography", c),
    };
    let cfg = load(common)?;
    let prep = prepare(&cfg)?;
    let (table, mode): (Table, Mode) = match cli.command {
        Command::Sweep(_) => (sweep_table(&run_sweep(&cfg, &prep)?), cfg.mode),
        Command::Repeater(_) => (repeater_table(&run_repeater(&cfg, &prep)?), Mode::Analytic),
        Command::Calibrate(_) => (calibrate_scenario(&cfg, &prep), Mode::Analytic),
        Command::Tomography(_) => (tomography_table(&run_tomography(&cfg, &prep)?), Mode::Analytic),
    };
    let meta = Metadata { command: name.into(), config_sha256: cfg.hash(), seed: cfg.seed, mode: mode_name(mode).into() };
    match &cfg.output {
        Some(path) => {
            let f = File::create(path).map_err(|e| ScenarioError::Runtime(format!("cannot create {path}: {e}")))?;
            let mut w = BufWriter::new(f);
            write_csv(&mut w, &meta, &table)?;
            w.flush()?;
        }
        None => write_csv(std::io::stdout().lock(), &meta, &table)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("muxsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
