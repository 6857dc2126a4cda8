//! One function per subcommand. Each delegates to a single simulate or
//! analysis operation and wraps the result in an [`OutputBundle`].

use std::time::Instant;

use super::config::{BinsKind, RunConfig};
use super::output::{Meta, OutputBundle, Payload, VERSION};
use crate::analysis::{
    averaged_invariant, drift_check, empirical_invariant, epsilon_convergence_suite, ergodicity_decay, invariant_mode,
    occupation_measure, reachability, BinSpec, DriftGrid, PredatorBins, Target, TruncationStatus, Verdict,
};
use crate::error::{Error, Result};
use crate::simulate::{run_replicas, run_replicas_trajectories, ReplicaPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Invariant,
    Mode,
    Drift,
    Compare,
    Reach,
    Occupation,
    Ergodicity,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Simulate,
        Command::Invariant,
        Command::Mode,
        Command::Drift,
        Command::Compare,
        Command::Reach,
        Command::Occupation,
        Command::Ergodicity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Invariant => "invariant",
            Command::Mode => "mode",
            Command::Drift => "drift",
            Command::Compare => "compare",
            Command::Reach => "reach",
            Command::Occupation => "occupation",
            Command::Ergodicity => "ergodicity",
        }
    }

    pub fn is_stochastic(&self) -> bool {
        !matches!(self, Command::Invariant | Command::Mode | Command::Drift)
    }
}

/// Result of a command that ran to completion. `exit_code` is 4 when a
/// statistical check did not confirm the expected property.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub bundle: OutputBundle,
    pub exit_code: i32,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(payload: Payload) -> (Payload, i32, Vec<String>) {
        (payload, 0, Vec::new())
    }
}

pub fn run(command: Command, cfg: &RunConfig, timing: bool) -> Result<Outcome> {
    if command.is_stochastic() {
        cfg.require_seed()?;
    }
    let started = Instant::now();
    let (payload, exit_code, warnings) = match command {
        Command::Simulate => cmd_simulate(cfg)?,
        Command::Invariant => cmd_invariant(cfg)?,
        Command::Mode => cmd_mode(cfg)?,
        Command::Drift => cmd_drift(cfg)?,
        Command::Compare => cmd_compare(cfg)?,
        Command::Reach => cmd_reach(cfg)?,
        Command::Occupation => cmd_occupation(cfg)?,
        Command::Ergodicity => cmd_ergodicity(cfg)?,
    };
    let meta = Meta {
        command: command.name().to_string(),
        version: VERSION.to_string(),
        config: cfg.clone(),
        wall_time_s: timing.then(|| started.elapsed().as_secs_f64()),
    };
    Ok(Outcome {
        bundle: OutputBundle { meta, payload },
        exit_code,
        warnings,
    })
}

type CmdResult = Result<(Payload, i32, Vec<String>)>;

fn plan(cfg: &RunConfig) -> Result<ReplicaPlan> {
    Ok(ReplicaPlan {
        options: cfg.sim_options(),
        ..ReplicaPlan::new(
            cfg.process_tag()?,
            cfg.params,
            cfg.initial(),
            cfg.require_horizon()?,
            cfg.replicas,
            cfg.require_seed()?,
        )
    })
}

fn predator_bins(cfg: &RunConfig) -> Result<PredatorBins> {
    match cfg.bins {
        BinsKind::Equilibrium => PredatorBins::equilibrium_centered(&cfg.params, cfg.n_max),
        BinsKind::Uniform { h_max, count } => PredatorBins::uniform(h_max, count),
    }
}

fn bin_spec(cfg: &RunConfig) -> Result<BinSpec> {
    Ok(BinSpec {
        predator: predator_bins(cfg)?,
        ..BinSpec::equilibrium_grid(&cfg.params, cfg.n_max)?
    })
}

/// A single replica yields its trajectory; several yield a histogram of
/// terminal states.
pub fn cmd_simulate(cfg: &RunConfig) -> CmdResult {
    let plan = plan(cfg)?;
    if cfg.replicas == 1 {
        let traj = run_replicas_trajectories(&plan)?.pop().expect("one replica");
        return Ok(Outcome::ok(Payload::Trajectory(traj)));
    }
    let states = run_replicas(&plan)?;
    Ok(Outcome::ok(Payload::Histogram(empirical_invariant(&states, &bin_spec(cfg)?)?)))
}

pub fn cmd_invariant(cfg: &RunConfig) -> CmdResult {
    let dist = averaged_invariant(&cfg.params, cfg.n_max)?;
    let mut warnings = Vec::new();
    if dist.status == TruncationStatus::ModeNotCaptured {
        warnings.push(format!("N_max={} does not capture the mode; weights still increasing", cfg.n_max));
    }
    Ok((Payload::Distribution((&dist).into()), 0, warnings))
}

pub fn cmd_mode(cfg: &RunConfig) -> CmdResult {
    let report = invariant_mode(&cfg.params, cfg.n_max)?;
    let mut warnings = Vec::new();
    if report.discrepancy {
        warnings.push(format!(
            "quadratic predicts mode {} but the recursion gives {}",
            report.polynomial.predicted_mode, report.mode
        ));
    }
    Ok((Payload::Mode(report), 0, warnings))
}

pub fn cmd_drift(cfg: &RunConfig) -> CmdResult {
    let grid = DriftGrid {
        n_max: cfg.n_grid,
        h_max: cfg.h_grid,
        h_steps: cfg.h_steps,
    };
    let report = drift_check(&cfg.params, cfg.lyapunov, cfg.gamma, grid)?;
    Ok(Outcome::ok(Payload::Drift(report)))
}

pub fn cmd_compare(cfg: &RunConfig) -> CmdResult {
    let suite = epsilon_convergence_suite(
        &cfg.params,
        &cfg.epsilons,
        cfg.initial(),
        cfg.require_horizon()?,
        cfg.replicas,
        cfg.require_seed()?,
        cfg.sim_options(),
    )?;
    let mut warnings = Vec::new();
    if !suite.nonincreasing {
        warnings.push(format!("distance increases as epsilon decreases (slack {})", suite.slack));
    }
    let last = suite.rows.last().expect("at least one epsilon").tv_averaged_process;
    if last > cfg.tv_tol {
        warnings.push(format!("final distance {last} exceeds tv_tol={}", cfg.tv_tol));
    }
    let code = if warnings.is_empty() { 0 } else { 4 };
    Ok((Payload::Comparison(suite), code, warnings))
}

pub fn cmd_reach(cfg: &RunConfig) -> CmdResult {
    let missing = |key: &str| Error::Config {
        key: key.to_string(),
        constraint: "required for reach".into(),
    };
    let target = Target {
        n: cfg.target_n.ok_or_else(|| missing("target_n"))?,
        h_lo: cfg.target_hlo.ok_or_else(|| missing("target_hlo"))?,
        h_hi: cfg.target_hhi.ok_or_else(|| missing("target_hhi"))?,
    };
    let report = reachability(&cfg.params, cfg.initial(), target, cfg.require_horizon()?, cfg.replicas, cfg.require_seed()?)?;
    if report.hits == 0 {
        return Ok((Payload::Reach(report), 4, vec!["target never reached".into()]));
    }
    Ok(Outcome::ok(Payload::Reach(report)))
}

/// Occupation measure over `[window_start, window_end]`, summed over replicas.
pub fn cmd_occupation(cfg: &RunConfig) -> CmdResult {
    let horizon = cfg.require_horizon()?;
    let window = (cfg.window_start, cfg.window_end.unwrap_or(horizon));
    let bins = predator_bins(cfg)?;
    let mut total: Option<crate::analysis::OccupationMeasure> = None;
    for traj in run_replicas_trajectories(&plan(cfg)?)? {
        let occ = occupation_measure(&traj, window, &bins)?;
        match total.as_mut() {
            None => total = Some(occ),
            Some(acc) => acc.weights.iter_mut().zip(&occ.weights).for_each(|(a, w)| *a += w),
        }
    }
    Ok(Outcome::ok(Payload::Occupation(total.expect("at least one replica"))))
}

pub fn cmd_ergodicity(cfg: &RunConfig) -> CmdResult {
    let report = ergodicity_decay(&cfg.params, cfg.za, cfg.zb, &cfg.times, cfg.replicas, cfg.require_seed()?, cfg.n_max)?;
    let warning = match (&report.verdict, &report.fit) {
        (Verdict::Inconclusive, _) => Some("fewer than two distances above the noise floor".to_string()),
        (_, Some(fit)) if fit.slope >= 0.0 => Some(format!("fitted slope {} is not negative", fit.slope)),
        _ => None,
    };
    match warning {
        Some(w) => Ok((Payload::Decay(report), 4, vec![w])),
        None => Ok(Outcome::ok(Payload::Decay(report))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::config::parse_config;

    const BENCH: &str = "b=0.4 d=0 c=0.005 B=0.02 r=2 D=0 C=0.04";

    #[test]
    fn invariant_first_weight() {
        let cfg = parse_config(&format!("{BENCH} N_max=50")).unwrap();
        let out = run(Command::Invariant, &cfg, false).unwrap();
        let Payload::Distribution(d) = &out.bundle.payload else { panic!() };
        assert!((d.p[0] - 2.69e-5).abs() < 2e-7);
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn stochastic_commands_need_seed() {
        let cfg = parse_config(&format!("{BENCH} T=1")).unwrap();
        for cmd in Command::ALL.into_iter().filter(Command::is_stochastic) {
            let err = run(cmd, &cfg, false).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{}", cmd.name());
        }
    }

    #[test]
    fn simulate_histogram_counts_replicas() {
        let cfg = parse_config(&format!("{BENCH} T=2 replicas=50 seed=1 N_max=60")).unwrap();
        let out = run(Command::Simulate, &cfg, false).unwrap();
        let Payload::Histogram(h) = &out.bundle.payload else { panic!() };
        assert_eq!(h.total(), 50.0);
    }

    #[test]
    fn occupation_totals_window_times_replicas() {
        let cfg = parse_config(&format!("{BENCH} T=10 replicas=3 seed=2 window_start=2 epsilon=0.1")).unwrap();
        let out = run(Command::Occupation, &cfg, false).unwrap();
        let Payload::Occupation(o) = &out.bundle.payload else { panic!() };
        assert!((o.total() - 24.0).abs() < 1e-9);
    }

    #[test]
    fn ceiling_maps_to_exit_three() {
        let cfg = parse_config(&format!("{BENCH} T=50 seed=3 max_events=5")).unwrap();
        assert_eq!(run(Command::Simulate, &cfg, false).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn timing_only_on_request() {
        let cfg = parse_config(BENCH).unwrap();
        assert!(run(Command::Mode, &cfg, false).unwrap().bundle.meta.wall_time_s.is_none());
        assert!(run(Command::Mode, &cfg, true).unwrap().bundle.meta.wall_time_s.is_some());
    }
}
