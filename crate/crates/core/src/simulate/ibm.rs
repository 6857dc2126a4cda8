use rand::Rng;
use rand_distr::Exp1;

use super::{check_horizon, Event, EventBudget, EventKind, Observer, ProcessTag, SimOptions, Trajectory};
use crate::error::{Error, Result};
use crate::model::{ModelParams, State};
use crate::rng::RngStream;

/// Reaction rates of the individual-based community at scale `k` with prey
/// count `n` and predator count `predators`.
///
/// Predation is `B/K`, conversion `Kr`, predator competition `C/K`; the
/// predator constants are further divided by `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbmRates {
    pub prey_birth: f64,
    pub prey_death: f64,
    pub predator_birth: f64,
    pub predator_death: f64,
}

impl IbmRates {
    pub fn total(&self) -> f64 {
        self.prey_birth + self.prey_death + self.predator_birth + self.predator_death
    }
}

pub fn ibm_rates(p: &ModelParams, k: u64, n: u64, predators: u64) -> IbmRates {
    let scale = k as f64;
    let nf = n as f64;
    let hf = predators as f64;
    let predation = p.predation / scale;
    let conversion = scale * p.conversion / p.epsilon;
    let competition = p.predator_competition / p.epsilon / scale;
    let prey_death = if p.death_active(n) {
        nf * (p.prey_death + p.prey_competition * nf + predation * hf)
    } else {
        0.0
    };
    IbmRates {
        prey_birth: p.prey_birth * nf + p.migration,
        prey_death,
        predator_birth: hf * conversion * predation * nf,
        predator_death: hf * (p.predator_death / p.epsilon + competition * hf),
    }
}

/// Gillespie direct method for the four-reaction individual-based chain,
/// starting from `n0` prey and `predators0` predator individuals.
///
/// Reported densities are `predators / k`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_ibm_with<O: Observer + ?Sized>(
    p: &ModelParams,
    k: u64,
    n0: u64,
    predators0: u64,
    horizon: f64,
    stream: RngStream,
    options: &SimOptions,
    observer: &mut O,
) -> Result<State> {
    p.validate()?;
    check_horizon(horizon)?;
    if k == 0 {
        return Err(Error::InvalidArgument {
            name: "K",
            reason: "scale must be >= 1".into(),
        });
    }
    let scale = k as f64;
    State::new(n0, predators0 as f64 / scale).validate(p)?;
    let mut rng = stream.rng();
    let mut budget = EventBudget::new(options.max_events);
    let (mut n, mut pred) = (n0, predators0);
    let mut t = 0.0;
    loop {
        let before = State::new(n, pred as f64 / scale);
        let r = ibm_rates(p, k, n, pred);
        let total = r.total();
        let step: f64 = rng.sample(Exp1);
        let next_t = t + step / total;
        if next_t > horizon {
            let end = Event {
                time: horizon,
                kind: EventKind::End,
                state_after: before,
            };
            observer.observe(t, &before, &end);
            return Ok(before);
        }
        budget.spend()?;
        let u = rng.random::<f64>() * total;
        let kind = if u < r.prey_birth {
            n += 1;
            EventKind::PreyBirth
        } else if u < r.prey_birth + r.prey_death {
            n -= 1;
            EventKind::PreyDeath
        } else if u < r.prey_birth + r.prey_death + r.predator_birth {
            pred += 1;
            EventKind::PredatorBirth
        } else {
            pred -= 1;
            EventKind::PredatorDeath
        };
        let event = Event {
            time: next_t,
            kind,
            state_after: State::new(n, pred as f64 / scale),
        };
        observer.observe(t, &before, &event);
        t = next_t;
    }
}

pub fn simulate_ibm(
    p: &ModelParams,
    k: u64,
    n0: u64,
    predators0: u64,
    horizon: f64,
    stream: RngStream,
    options: &SimOptions,
) -> Result<Trajectory> {
    let mut events = Vec::new();
    simulate_ibm_with(p, k, n0, predators0, horizon, stream, options, &mut events)?;
    Ok(Trajectory {
        params: *p,
        process: ProcessTag::Ibm { k },
        initial: State::new(n0, predators0 as f64 / k as f64),
        horizon,
        events,
        seed: stream.master_seed,
        stream: stream.index,
    })
}
