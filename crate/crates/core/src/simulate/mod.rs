//! Exact stochastic simulation of the hybrid process, its individual-based
//! origin and its averaged limit.
//!
//! All simulators share one event loop shape: sample the next jump exactly,
//! report it to an [`Observer`], stop at the horizon with an `End` event.
//! Recording full trajectories is one observer among others; Monte Carlo
//! batches usually keep only terminal states or snapshots.

mod averaged;
mod ibm;
mod pdmp;
mod replicas;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{flow_unchecked, ModelParams, State};

pub use averaged::{simulate_averaged, simulate_averaged_with};
pub use ibm::{ibm_rates, simulate_ibm, simulate_ibm_with, IbmRates};
pub use pdmp::{next_jump_inversion, next_jump_thinning, simulate_pdmp, simulate_pdmp_with};
pub use replicas::{run_replicas, run_replicas_observed, run_replicas_trajectories, ReplicaPlan};

pub const DEFAULT_MAX_EVENTS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpKind {
    PreyBirth,
    PreyDeath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    #[serde(rename = "prey_birth")]
    PreyBirth,
    #[serde(rename = "prey_death")]
    PreyDeath,
    #[serde(rename = "ibm_pred_birth")]
    PredatorBirth,
    #[serde(rename = "ibm_pred_death")]
    PredatorDeath,
    #[serde(rename = "end")]
    End,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::PreyBirth => "prey_birth",
            EventKind::PreyDeath => "prey_death",
            EventKind::PredatorBirth => "ibm_pred_birth",
            EventKind::PredatorDeath => "ibm_pred_death",
            EventKind::End => "end",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "prey_birth" => EventKind::PreyBirth,
            "prey_death" => EventKind::PreyDeath,
            "ibm_pred_birth" => EventKind::PredatorBirth,
            "ibm_pred_death" => EventKind::PredatorDeath,
            "end" => EventKind::End,
            _ => return None,
        })
    }
}

impl From<JumpKind> for EventKind {
    fn from(k: JumpKind) -> Self {
        match k {
            JumpKind::PreyBirth => EventKind::PreyBirth,
            JumpKind::PreyDeath => EventKind::PreyDeath,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub state_after: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum ProcessTag {
    Pdmp,
    Ibm { k: u64 },
    Averaged,
}

impl ProcessTag {
    /// How the predator density evolves between two events.
    pub fn interpolation(&self, p: &ModelParams) -> Interpolation {
        match self {
            ProcessTag::Pdmp => Interpolation::Flow(*p),
            ProcessTag::Ibm { .. } | ProcessTag::Averaged => Interpolation::Hold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interpolation {
    Flow(ModelParams),
    Hold,
}

impl Interpolation {
    pub fn advance(&self, s: &State, dt: f64) -> State {
        match self {
            Interpolation::Flow(p) => State::new(s.n, flow_unchecked(p, s.n, s.h, dt)),
            Interpolation::Hold => *s,
        }
    }
}

/// One simulated path: the initial state and every event up to the horizon,
/// closed by an `End` event at the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: ModelParams,
    pub process: ProcessTag,
    pub initial: State,
    pub horizon: f64,
    pub events: Vec<Event>,
    pub seed: u64,
    pub stream: u64,
}

impl Trajectory {
    pub fn terminal(&self) -> State {
        self.events.last().map(|e| e.state_after).unwrap_or(self.initial)
    }

    /// Number of jumps, not counting the closing `End` event.
    pub fn jump_count(&self) -> usize {
        self.events.iter().filter(|e| e.kind != EventKind::End).count()
    }

    /// State at time `t` (right-continuous), evaluated from the events.
    pub fn state_at(&self, t: f64) -> Option<State> {
        if !(0.0..=self.horizon).contains(&t) {
            return None;
        }
        let interp = self.process.interpolation(&self.params);
        let idx = self.events.partition_point(|e| e.time <= t);
        let (t0, s0) = if idx == 0 {
            (0.0, self.initial)
        } else {
            let e = &self.events[idx - 1];
            (e.time, e.state_after)
        };
        Some(interp.advance(&s0, t - t0))
    }

    /// States on the uniform grid `0, dt, 2dt, ...` up to the horizon.
    pub fn sample_grid(&self, dt: f64) -> Vec<(f64, State)> {
        let steps = (self.horizon / dt).floor() as u64;
        (0..=steps)
            .filter_map(|k| {
                let t = k as f64 * dt;
                self.state_at(t).map(|s| (t, s))
            })
            .collect()
    }

    /// Iterates `(start, end, state at start)` over the deterministic pieces.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, State)> + '_ {
        let mut t0 = 0.0;
        let mut s0 = self.initial;
        self.events.iter().map(move |e| {
            let seg = (t0, e.time, s0);
            t0 = e.time;
            s0 = e.state_after;
            seg
        })
    }
}

/// Which exact sampler draws the next prey jump of the hybrid process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    #[default]
    Thinning,
    Inversion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    pub max_events: u64,
    pub sampler: Sampler,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            max_events: DEFAULT_MAX_EVENTS,
            sampler: Sampler::Thinning,
        }
    }
}

/// Receives events as a simulation runs.
pub trait Observer {
    /// `segment_start` and `before` describe the piece that the event closes:
    /// the state right after the previous event and when it happened.
    fn observe(&mut self, segment_start: f64, before: &State, event: &Event);
}

impl Observer for () {
    fn observe(&mut self, _: f64, _: &State, _: &Event) {}
}

impl Observer for Vec<Event> {
    fn observe(&mut self, _: f64, _: &State, event: &Event) {
        self.push(*event);
    }
}

/// Records the state at a fixed, sorted list of times.
#[derive(Debug, Clone)]
pub struct Snapshots {
    times: Vec<f64>,
    interp: Interpolation,
    states: Vec<State>,
}

impl Snapshots {
    pub fn new(mut times: Vec<f64>, interp: Interpolation) -> Self {
        times.sort_by(f64::total_cmp);
        let cap = times.len();
        Self {
            times,
            interp,
            states: Vec::with_capacity(cap),
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Snapshot states, aligned with [`Snapshots::times`]. Times past the
    /// horizon are never filled.
    pub fn states(&self) -> &[State] {
        &self.states
    }
}

impl Observer for Snapshots {
    fn observe(&mut self, segment_start: f64, before: &State, event: &Event) {
        while let Some(&t) = self.times.get(self.states.len()) {
            let inside = t < event.time || (event.kind == EventKind::End && t <= event.time);
            if !inside {
                break;
            }
            if event.kind == EventKind::End && t == event.time {
                self.states.push(event.state_after);
            } else {
                self.states.push(self.interp.advance(before, (t - segment_start).max(0.0)));
            }
        }
    }
}

pub(crate) fn check_horizon(horizon: f64) -> Result<()> {
    if horizon.is_finite() && horizon > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name: "T",
            reason: format!("horizon must be finite and > 0, got {horizon}"),
        })
    }
}

/// Counts events against the ceiling.
pub(crate) struct EventBudget {
    used: u64,
    max: u64,
}

impl EventBudget {
    pub(crate) fn new(max: u64) -> Self {
        Self { used: 0, max }
    }

    pub(crate) fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.max {
            Err(Error::EventCeiling { ceiling: self.max })
        } else {
            Ok(())
        }
    }
}
