use rand::Rng;
use rand_distr::Exp1;

use super::{check_horizon, Event, EventBudget, EventKind, Observer, ProcessTag, SimOptions, Trajectory};
use crate::error::Result;
use crate::model::{equilibrium, rates, ModelParams, State};
use crate::rng::RngStream;

/// Birth-death chain with the predator frozen at `h*_n`: births `bn`, deaths
/// `n(d + cn + B h*_n)` (suppressed at `n = 1` without migration).
pub fn simulate_averaged_with<O: Observer + ?Sized>(
    p: &ModelParams,
    n0: u64,
    horizon: f64,
    stream: RngStream,
    options: &SimOptions,
    observer: &mut O,
) -> Result<State> {
    p.validate()?;
    check_horizon(horizon)?;
    let mut state = State::new(n0, equilibrium(p, n0));
    state.validate(p)?;
    let mut rng = stream.rng();
    let mut budget = EventBudget::new(options.max_events);
    let mut t = 0.0;
    loop {
        let r = rates(p, &state);
        let step: f64 = rng.sample(Exp1);
        let next_t = t + step / r.total();
        if next_t > horizon {
            let end = Event {
                time: horizon,
                kind: EventKind::End,
                state_after: state,
            };
            observer.observe(t, &state, &end);
            return Ok(state);
        }
        budget.spend()?;
        let (n, kind) = if rng.random::<f64>() * r.total() < r.birth {
            (state.n + 1, EventKind::PreyBirth)
        } else {
            (state.n - 1, EventKind::PreyDeath)
        };
        let event = Event {
            time: next_t,
            kind,
            state_after: State::new(n, equilibrium(p, n)),
        };
        observer.observe(t, &state, &event);
        t = next_t;
        state = event.state_after;
    }
}

pub fn simulate_averaged(
    p: &ModelParams,
    n0: u64,
    horizon: f64,
    stream: RngStream,
    options: &SimOptions,
) -> Result<Trajectory> {
    let mut events = Vec::new();
    simulate_averaged_with(p, n0, horizon, stream, options, &mut events)?;
    Ok(Trajectory {
        params: *p,
        process: ProcessTag::Averaged,
        initial: State::new(n0, equilibrium(p, n0)),
        horizon,
        events,
        seed: stream.master_seed,
        stream: stream.index,
    })
}
