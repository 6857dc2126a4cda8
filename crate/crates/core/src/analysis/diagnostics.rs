//! Monte Carlo diagnostics built on replica batches: decay of the distance
//! between laws started at different points, reachability of target sets and
//! convergence of the prey marginal as `epsilon -> 0`.

use serde::{Deserialize, Serialize};

use super::histogram::{empirical_invariant, BinSpec, Hist2D};
use super::invariant::{averaged_invariant, DiscreteDistribution};
use super::stats::{linear_fit, tv_distance, LinearFit};
use crate::error::{Error, Result};
use crate::model::{equilibrium, ModelParams, State};
use crate::simulate::{run_replicas, run_replicas_observed, ProcessTag, ReplicaPlan, SimOptions, Snapshots};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Conclusive,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub time: f64,
    pub tv: f64,
    /// Distance between two independent batches started from the same point.
    pub noise: f64,
    pub above_floor: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub points: Vec<DecayPoint>,
    /// Largest same-start distance over all times.
    pub noise_floor: f64,
    /// Fit of `ln tv` against time over the points above the floor.
    pub fit: Option<LinearFit>,
    pub verdict: Verdict,
}

fn snapshot_hists(plan: &ReplicaPlan, times: &[f64], bins: &BinSpec) -> Result<Vec<Hist2D>> {
    let interp = plan.process.interpolation(&plan.params);
    let runs = run_replicas_observed(plan, |_| Snapshots::new(times.to_vec(), interp))?;
    let mut hists = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let states: Vec<State> = runs.iter().map(|(_, snap)| snap.states()[k]).collect();
        hists.push(empirical_invariant(&states, bins)?);
    }
    Ok(hists)
}

/// Estimates `TV(Law(Z_t | z_a), Law(Z_t | z_b))` at each time from `replicas`
/// runs per start, on the equilibrium-centered grid up to `n_max`.
///
/// The noise floor is the distance between two independent batches from
/// `z_a`. The log-distance is fitted against time over points above the floor;
/// fewer than two such points gives an inconclusive verdict.
pub fn ergodicity_decay(
    p: &ModelParams,
    z_a: State,
    z_b: State,
    times: &[f64],
    replicas: u64,
    seed: u64,
    n_max: u64,
) -> Result<DecayReport> {
    if times.is_empty() || times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument {
            name: "times",
            reason: "need at least one positive finite time".into(),
        });
    }
    let mut times = times.to_vec();
    times.sort_by(f64::total_cmp);
    let horizon = *times.last().unwrap();
    let bins = BinSpec::equilibrium_grid(p, n_max)?;

    let plan_a = ReplicaPlan::new(ProcessTag::Pdmp, *p, z_a, horizon, replicas, seed);
    let plan_b = ReplicaPlan {
        initial: z_b,
        first_stream: replicas,
        ..plan_a
    };
    let plan_ref = ReplicaPlan {
        first_stream: 2 * replicas,
        ..plan_a
    };
    let hist_a = snapshot_hists(&plan_a, &times, &bins)?;
    let hist_b = snapshot_hists(&plan_b, &times, &bins)?;
    let hist_ref = snapshot_hists(&plan_ref, &times, &bins)?;

    let mut points = Vec::with_capacity(times.len());
    for (k, &time) in times.iter().enumerate() {
        points.push(DecayPoint {
            time,
            tv: tv_distance(&hist_a[k], &hist_b[k])?,
            noise: tv_distance(&hist_a[k], &hist_ref[k])?,
            above_floor: false,
        });
    }
    let noise_floor = points.iter().map(|pt| pt.noise).fold(0.0, f64::max);
    for pt in &mut points {
        pt.above_floor = pt.tv > noise_floor;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|pt| pt.above_floor)
        .map(|pt| (pt.time, pt.tv.ln()))
        .unzip();
    let fit = linear_fit(&xs, &ys);
    let verdict = if fit.is_some() { Verdict::Conclusive } else { Verdict::Inconclusive };
    Ok(DecayReport {
        points,
        noise_floor,
        fit,
        verdict,
    })
}

/// Target set `{n} x (h_lo, h_hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub n: u64,
    pub h_lo: f64,
    pub h_hi: f64,
}

impl Target {
    pub fn contains(&self, s: &State) -> bool {
        s.n == self.n && s.h > self.h_lo && s.h < self.h_hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReachReport {
    pub target: Target,
    pub horizon: f64,
    pub replicas: u64,
    pub hits: u64,
    pub frequency: f64,
}

/// Empirical probability that the hybrid process sits in `target` at time
/// `horizon`.
pub fn reachability(p: &ModelParams, z0: State, target: Target, horizon: f64, replicas: u64, seed: u64) -> Result<ReachReport> {
    let plan = ReplicaPlan::new(ProcessTag::Pdmp, *p, z0, horizon, replicas, seed);
    let states = run_replicas(&plan)?;
    let hits = states.iter().filter(|s| target.contains(s)).count() as u64;
    Ok(ReachReport {
        target,
        horizon,
        replicas,
        hits,
        frequency: hits as f64 / replicas as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    /// Distance between prey marginals of the hybrid and the averaged process
    /// at the horizon.
    pub tv_averaged_process: f64,
    /// Distance between the hybrid prey marginal and the averaged invariant law.
    pub tv_invariant: f64,
    /// Fraction of terminal states with `|h - h*_n| <= 0.1`.
    pub concentration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSuite {
    pub rows: Vec<EpsilonRow>,
    pub averaged_marginal: DiscreteDistribution,
    /// Whether `tv_averaged_process` never increases by more than `slack` as
    /// epsilon decreases.
    pub nonincreasing: bool,
    pub slack: f64,
}

/// Prey marginal of the hybrid process at `horizon` for each `epsilon`,
/// compared with the averaged chain run with the same seed and replica count.
pub fn epsilon_convergence_suite(
    p: &ModelParams,
    epsilons: &[f64],
    z0: State,
    horizon: f64,
    replicas: u64,
    seed: u64,
    options: SimOptions,
) -> Result<EpsilonSuite> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument {
            name: "epsilons",
            reason: "need at least one epsilon".into(),
        });
    }
    let averaged_plan = ReplicaPlan {
        options,
        ..ReplicaPlan::new(ProcessTag::Averaged, *p, z0, horizon, replicas, seed)
    };
    let averaged = DiscreteDistribution::from_samples(run_replicas(&averaged_plan)?.iter().map(|s| s.n))?;
    let invariant = averaged_invariant(&p.with_epsilon(1.0)?, 200.max(averaged.n_max()))?;

    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut rows = Vec::with_capacity(eps.len());
    for e in eps {
        let params = p.with_epsilon(e)?;
        let plan = ReplicaPlan {
            params,
            options,
            ..ReplicaPlan::new(ProcessTag::Pdmp, params, z0, horizon, replicas, seed)
        };
        let states = run_replicas(&plan)?;
        let marginal = DiscreteDistribution::from_samples(states.iter().map(|s| s.n))?;
        let near = states.iter().filter(|s| (s.h - equilibrium(&params, s.n)).abs() <= 0.1).count();
        rows.push(EpsilonRow {
            epsilon: e,
            tv_averaged_process: tv_distance(&marginal, &averaged)?,
            tv_invariant: tv_distance(&marginal, &invariant)?,
            concentration: near as f64 / states.len() as f64,
        });
    }
    // twice the expected distance between two independent samples of this law
    let slack = 2.0 * averaged.weights.iter().map(|w| (w / (std::f64::consts::PI * replicas as f64)).sqrt()).sum::<f64>();
    let nonincreasing = rows
        .windows(2)
        .all(|w| w[1].tv_averaged_process <= w[0].tv_averaged_process + slack);
    Ok(EpsilonSuite {
        rows,
        averaged_marginal: averaged,
        nonincreasing,
        slack,
    })
}
