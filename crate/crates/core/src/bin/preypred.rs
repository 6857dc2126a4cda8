use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use preypred::io::{load_config, run, trajectory_to_csv, Command, Payload};
use preypred::{Error, Result};

macro_rules! key_flags {
    ($($field:ident => $key:literal),* $(,)?) => {
        /// Configuration keys; each overrides the same key from `--config`.
        #[derive(Debug, Args)]
        struct Keys {
            $(
                #[arg(long = $key, value_name = "VALUE", allow_hyphen_values = true)]
                $field: Option<String>,
            )*
        }

        impl Keys {
            fn pairs(&self) -> Vec<(&'static str, String)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(($key, v.clone()));
                    }
                )*
                out
            }
        }
    };
}

key_flags! {
    b => "b", d => "d", c => "c", big_b => "B", r => "r", big_d => "D", big_c => "C", m => "m",
    epsilon => "epsilon", process => "process", k => "K", n0 => "n0", h0 => "h0", t => "T",
    replicas => "replicas", seed => "seed", n_max => "N_max", bins => "bins", sampler => "sampler",
    max_events => "max_events", lyapunov => "lyapunov", gamma => "gamma", n_grid => "n_grid",
    h_grid => "h_grid", h_steps => "h_steps", target_n => "target_n", target_hlo => "target_hlo",
    target_hhi => "target_hhi", times => "times", za_n => "za_n", za_h => "za_h", zb_n => "zb_n",
    zb_h => "zb_h", epsilons => "epsilons", window_start => "window_start", window_end => "window_end",
    tol => "tol", tv_tol => "tv_tol",
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    /// Configuration file (`key=value` lines or a flat JSON object).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// `csv` is available for single trajectories only.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record wall time in the output metadata.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    keys: Keys,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Simulate one trajectory, or a histogram of terminal states for several replicas.
    Simulate(Common),
    /// Invariant law of the averaged prey chain.
    Invariant(Common),
    /// Mode of the averaged invariant law.
    Mode(Common),
    /// Check the Foster-Lyapunov drift inequality on a grid.
    Drift(Common),
    /// Compare prey marginals across epsilon with the averaged chain.
    Compare(Common),
    /// Frequency of hitting a target set at the horizon.
    Reach(Common),
    /// Predator occupation measure over a time window.
    Occupation(Common),
    /// Distance between laws from two starting points over time.
    Ergodicity(Common),
}

#[derive(Debug, Parser)]
#[command(name = "preypred", version, about = "Exact simulation and analysis of a hybrid prey-predator process")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn execute(cli: Cli) -> Result<i32> {
    let (command, common) = match cli.cmd {
        Cmd::Simulate(c) => (Command::Simulate, c),
        Cmd::Invariant(c) => (Command::Invariant, c),
        Cmd::Mode(c) => (Command::Mode, c),
        Cmd::Drift(c) => (Command::Drift, c),
        Cmd::Compare(c) => (Command::Compare, c),
        Cmd::Reach(c) => (Command::Reach, c),
        Cmd::Occupation(c) => (Command::Occupation, c),
        Cmd::Ergodicity(c) => (Command::Ergodicity, c),
    };
    let file_text = common.config.as_ref().map(std::fs::read_to_string).transpose()?;
    let cfg = load_config(file_text.as_deref(), common.keys.pairs())?;
    let outcome = run(command, &cfg, common.timing)?;
    let text = match (common.format, &outcome.bundle.payload) {
        (Format::Json, _) => outcome.bundle.to_json()?,
        (Format::Csv, Payload::Trajectory(traj)) => trajectory_to_csv(traj),
        (Format::Csv, _) => {
            return Err(Error::Config {
                key: "format".into(),
                constraint: "csv is only available for single-replica simulate".into(),
            })
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
