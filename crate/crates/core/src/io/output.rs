//! Output bundles: run metadata plus one payload, written as JSON, and the
//! CSV trajectory format `t,n,h,event`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::analysis::{
    DecayReport, DiscreteDistribution, DriftReport, EpsilonSuite, Hist2D, ModeReport, OccupationMeasure, ReachReport,
};
use crate::error::{Error, Result};
use crate::model::State;
use crate::simulate::{Event, EventKind, Trajectory};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub version: String,
    pub config: RunConfig,
    /// Only present when timing was requested, so that default output stays
    /// byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// Distribution on `n = start..=N_max` with its estimated tail mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionOut {
    pub n: Vec<u64>,
    pub p: Vec<f64>,
    pub tail_mass: f64,
    #[serde(rename = "N_max")]
    pub n_max: u64,
}

impl From<&DiscreteDistribution> for DistributionOut {
    fn from(d: &DiscreteDistribution) -> Self {
        let (n, p) = d.support().unzip();
        Self {
            n,
            p,
            tail_mass: d.tail_mass,
            n_max: d.n_max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Trajectory(Trajectory),
    Histogram(Hist2D),
    Distribution(DistributionOut),
    Mode(ModeReport),
    Drift(DriftReport),
    Comparison(EpsilonSuite),
    Reach(ReachReport),
    Occupation(OccupationMeasure),
    Decay(DecayReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputBundle {
    pub meta: Meta,
    pub payload: Payload,
}

impl OutputBundle {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// 17 significant digits.
fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per event, the last being the `end` row at the horizon.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,n,h,event\n");
    for ev in &traj.events {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_real(ev.time),
            ev.state_after.n,
            fmt_real(ev.state_after.h),
            ev.kind.as_str()
        );
    }
    out
}

pub fn events_from_csv(text: &str) -> Result<Vec<Event>> {
    let bad = |line: usize, what: &str| Error::InvalidArgument {
        name: "csv",
        reason: format!("line {line}: {what}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "t,n,h,event")) => {}
        _ => return Err(bad(1, "expected header `t,n,h,event`")),
    }
    let mut events = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let [t, n, h, kind] = fields.as_slice() else {
            return Err(bad(i + 1, "expected four fields"));
        };
        let time: f64 = t.parse().map_err(|_| bad(i + 1, "bad time"))?;
        let n: u64 = n.parse().map_err(|_| bad(i + 1, "bad prey count"))?;
        let h: f64 = h.parse().map_err(|_| bad(i + 1, "bad density"))?;
        let kind = EventKind::parse(kind).ok_or_else(|| bad(i + 1, "unknown event"))?;
        events.push(Event {
            time,
            kind,
            state_after: State::new(n, h),
        });
    }
    Ok(events)
}
