use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_averaged_with, simulate_ibm_with, simulate_pdmp_with, Event, Observer, ProcessTag, SimOptions, Trajectory};
use crate::error::{Error, Result};
use crate::model::{ModelParams, State};
use crate::rng::RngStream;

/// A batch of independent runs of one process.
///
/// Replica `i` uses stream `first_stream + i` of `master_seed`. For the
/// individual-based process the initial predator count is `round(h * K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicaPlan {
    pub process: ProcessTag,
    pub params: ModelParams,
    pub initial: State,
    pub horizon: f64,
    pub replicas: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub first_stream: u64,
    #[serde(default)]
    pub options: SimOptions,
}

impl ReplicaPlan {
    pub fn new(process: ProcessTag, params: ModelParams, initial: State, horizon: f64, replicas: u64, master_seed: u64) -> Self {
        Self {
            process,
            params,
            initial,
            horizon,
            replicas,
            master_seed,
            first_stream: 0,
            options: SimOptions::default(),
        }
    }

    pub fn stream(&self, replica: u64) -> RngStream {
        RngStream::new(self.master_seed, self.first_stream + replica)
    }

    fn run_one<O: Observer + ?Sized>(&self, replica: u64, observer: &mut O) -> Result<State> {
        let stream = self.stream(replica);
        match self.process {
            ProcessTag::Pdmp => simulate_pdmp_with(&self.params, self.initial, self.horizon, stream, &self.options, observer),
            ProcessTag::Ibm { k } => {
                let predators = (self.initial.h * k as f64).round() as u64;
                simulate_ibm_with(&self.params, k, self.initial.n, predators, self.horizon, stream, &self.options, observer)
            }
            ProcessTag::Averaged => simulate_averaged_with(&self.params, self.initial.n, self.horizon, stream, &self.options, observer),
        }
    }

    fn check(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(Error::InvalidArgument {
                name: "replicas",
                reason: "need at least one replica".into(),
            });
        }
        Ok(())
    }
}

/// Runs every replica with a fresh observer from `make` and returns terminal
/// states with their observers, in replica order. The first failing replica
/// (by index) is reported.
pub fn run_replicas_observed<O, F>(plan: &ReplicaPlan, make: F) -> Result<Vec<(State, O)>>
where
    O: Observer + Send,
    F: Fn(u64) -> O + Sync,
{
    plan.check()?;
    let results: Vec<Result<(State, O)>> = (0..plan.replicas)
        .into_par_iter()
        .map(|i| {
            let mut obs = make(i);
            plan.run_one(i, &mut obs)
                .map(|s| (s, obs))
                .map_err(|e| Error::Replica { index: i, source: Box::new(e) })
        })
        .collect();
    results.into_iter().collect()
}

/// Terminal states of every replica, in replica order.
pub fn run_replicas(plan: &ReplicaPlan) -> Result<Vec<State>> {
    Ok(run_replicas_observed(plan, |_| ())?.into_iter().map(|(s, _)| s).collect())
}

pub fn run_replicas_trajectories(plan: &ReplicaPlan) -> Result<Vec<Trajectory>> {
    let initial = match plan.process {
        ProcessTag::Ibm { k } => State::new(plan.initial.n, (plan.initial.h * k as f64).round() / k as f64),
        ProcessTag::Averaged => State::new(plan.initial.n, crate::model::equilibrium(&plan.params, plan.initial.n)),
        ProcessTag::Pdmp => plan.initial,
    };
    let runs = run_replicas_observed(plan, |_| Vec::<Event>::new())?;
    Ok(runs
        .into_iter()
        .enumerate()
        .map(|(i, (_, events))| Trajectory {
            params: plan.params,
            process: plan.process,
            initial,
            horizon: plan.horizon,
            events,
            seed: plan.master_seed,
            stream: plan.first_stream + i as u64,
        })
        .collect())
}
