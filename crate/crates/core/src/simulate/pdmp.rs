use rand::Rng;
use rand_distr::Exp1;

use super::{check_horizon, Event, EventBudget, EventKind, JumpKind, Observer, ProcessTag, Sampler, SimOptions, Trajectory};
use crate::error::Result;
use crate::model::{
    flow_unchecked, hazard_unchecked, invert_hazard_unchecked, rate_ceiling, rates, ModelParams, State,
};
use crate::rng::RngStream;

fn choose_kind<R: Rng + ?Sized>(p: &ModelParams, s: &State, rng: &mut R) -> JumpKind {
    let r = rates(p, s);
    if rng.random::<f64>() * r.total() < r.birth {
        JumpKind::PreyBirth
    } else {
        JumpKind::PreyDeath
    }
}

/// Thinning against the ceiling `rate(n, max(h, h*_n))`, refreshed after every
/// proposal. Returns `None` if no jump happens within `horizon`.
pub(crate) fn thinning_within<R: Rng + ?Sized>(
    p: &ModelParams,
    s: &State,
    rng: &mut R,
    horizon: f64,
) -> Option<(f64, JumpKind)> {
    let mut elapsed = 0.0;
    let mut current = *s;
    loop {
        let ceiling = rate_ceiling(p, &current);
        let step: f64 = rng.sample(Exp1);
        elapsed += step / ceiling;
        if elapsed > horizon {
            return None;
        }
        current.h = flow_unchecked(p, s.n, s.h, elapsed);
        let r = rates(p, &current);
        let u = rng.random::<f64>() * ceiling;
        if u < r.birth {
            return Some((elapsed, JumpKind::PreyBirth));
        }
        if u < r.total() {
            return Some((elapsed, JumpKind::PreyDeath));
        }
    }
}

/// Inverts the closed-form cumulative hazard at a standard exponential draw.
pub(crate) fn inversion_within<R: Rng + ?Sized>(
    p: &ModelParams,
    s: &State,
    rng: &mut R,
    horizon: f64,
) -> Option<(f64, JumpKind)> {
    let target: f64 = rng.sample(Exp1);
    if horizon.is_finite() && target > hazard_unchecked(p, s, horizon) {
        return None;
    }
    let t = invert_hazard_unchecked(p, s, target);
    let at = State::new(s.n, flow_unchecked(p, s.n, s.h, t));
    Some((t, choose_kind(p, &at, rng)))
}

/// Exact sample of the time to the next prey jump from `s` and its kind, by
/// thinning.
pub fn next_jump_thinning<R: Rng + ?Sized>(p: &ModelParams, s: &State, rng: &mut R) -> (f64, JumpKind) {
    thinning_within(p, s, rng, f64::INFINITY).expect("unbounded horizon always yields a jump")
}

/// Same law as [`next_jump_thinning`], drawn by hazard inversion.
pub fn next_jump_inversion<R: Rng + ?Sized>(p: &ModelParams, s: &State, rng: &mut R) -> (f64, JumpKind) {
    inversion_within(p, s, rng, f64::INFINITY).expect("unbounded horizon always yields a jump")
}

/// Runs the hybrid process from `z0` up to `horizon`, reporting events to
/// `observer`, and returns the terminal state.
pub fn simulate_pdmp_with<O: Observer + ?Sized>(
    p: &ModelParams,
    z0: State,
    horizon: f64,
    stream: RngStream,
    options: &SimOptions,
    observer: &mut O,
) -> Result<State> {
    p.validate()?;
    z0.validate(p)?;
    check_horizon(horizon)?;
    let mut rng = stream.rng();
    let mut budget = EventBudget::new(options.max_events);
    let mut t = 0.0;
    let mut state = z0;
    loop {
        let next = match options.sampler {
            Sampler::Thinning => thinning_within(p, &state, &mut rng, horizon - t),
            Sampler::Inversion => inversion_within(p, &state, &mut rng, horizon - t),
        };
        let Some((dt, kind)) = next else {
            let end = Event {
                time: horizon,
                kind: EventKind::End,
                state_after: State::new(state.n, flow_unchecked(p, state.n, state.h, horizon - t)),
            };
            observer.observe(t, &state, &end);
            return Ok(end.state_after);
        };
        budget.spend()?;
        let h = flow_unchecked(p, state.n, state.h, dt);
        let n = match kind {
            JumpKind::PreyBirth => state.n + 1,
            JumpKind::PreyDeath => state.n - 1,
        };
        let event = Event {
            time: t + dt,
            kind: kind.into(),
            state_after: State::new(n, h),
        };
        observer.observe(t, &state, &event);
        t = event.time;
        state = event.state_after;
    }
}

pub fn simulate_pdmp(
    p: &ModelParams,
    z0: State,
    horizon: f64,
    stream: RngStream,
    options: &SimOptions,
) -> Result<Trajectory> {
    let mut events = Vec::new();
    simulate_pdmp_with(p, z0, horizon, stream, options, &mut events)?;
    Ok(Trajectory {
        params: *p,
        process: ProcessTag::Pdmp,
        initial: z0,
        horizon,
        events,
        seed: stream.master_seed,
        stream: stream.index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{equilibrium, total_rate};

    #[test]
    fn fixed_point_accepts_every_proposal() {
        let p = ModelParams::benchmark();
        let s = State::new(6, 6.0);
        // At the fixed point the ceiling equals the rate, so a single
        // exponential per jump is consumed: compare against a direct draw.
        let mut a = RngStream::new(1, 0).rng();
        let mut b = RngStream::new(1, 0).rng();
        let theta = total_rate(&p, &s);
        for _ in 0..100 {
            let (t, _) = next_jump_thinning(&p, &s, &mut a);
            let e: f64 = b.sample(Exp1);
            let _: f64 = b.random();
            assert!((t - e / theta).abs() <= 1e-12 * t.max(1.0));
        }
    }

    #[test]
    fn pure_birth_always_births() {
        let p = ModelParams::new(0.5, 0.0, 1e-300, 0.0, 1.0, 0.0, 1.0).unwrap();
        let mut rng = RngStream::new(3, 0).rng();
        for _ in 0..1000 {
            let (_, k) = next_jump_thinning(&p, &State::new(4, 0.0), &mut rng);
            assert_eq!(k, JumpKind::PreyBirth);
        }
    }

    #[test]
    fn prey_never_hits_zero_and_events_are_ordered() {
        let p = ModelParams::benchmark().with_epsilon(0.1).unwrap();
        for sampler in [Sampler::Thinning, Sampler::Inversion] {
            let opts = SimOptions { sampler, ..Default::default() };
            let traj = simulate_pdmp(&p, State::new(1, 2.0), 60.0, RngStream::new(9, 2), &opts).unwrap();
            let mut last = 0.0;
            let mut prev = traj.initial;
            for e in &traj.events {
                assert!(e.time > last || e.kind == EventKind::End);
                assert!(e.time <= traj.horizon);
                assert!(e.state_after.n >= 1);
                if e.kind != EventKind::End {
                    assert_eq!(e.state_after.n.abs_diff(prev.n), 1);
                }
                last = e.time;
                prev = e.state_after;
            }
            assert_eq!(traj.events.last().unwrap().kind, EventKind::End);
            assert_eq!(traj.events.last().unwrap().time, 60.0);
        }
    }

    #[test]
    fn no_jump_keeps_equilibrium() {
        let p = ModelParams::benchmark();
        let n = 5;
        let h = equilibrium(&p, n);
        let mut rng = RngStream::new(0, 0).rng();
        assert!(thinning_within(&p, &State::new(n, h), &mut rng, 0.0).is_none());
        let traj = simulate_pdmp(&p, State::new(n, h), 1e-12, RngStream::new(5, 0), &SimOptions::default()).unwrap();
        assert_eq!(traj.jump_count(), 0);
        assert_eq!(traj.terminal(), State::new(n, h));
    }

    #[test]
    fn ceiling_is_enforced() {
        let p = ModelParams::benchmark();
        let opts = SimOptions { max_events: 3, ..Default::default() };
        let err = simulate_pdmp(&p, State::new(10, 10.0), 100.0, RngStream::new(1, 0), &opts).unwrap_err();
        assert!(err.to_string().contains("3"));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn replay_is_identical() {
        let p = ModelParams::benchmark();
        let a = simulate_pdmp(&p, State::new(3, 1.0), 30.0, RngStream::new(11, 4), &SimOptions::default()).unwrap();
        let b = simulate_pdmp(&p, State::new(3, 1.0), 30.0, RngStream::new(11, 4), &SimOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
