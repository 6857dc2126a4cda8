//! Time-weighted occupation of predator densities along a trajectory.
//!
//! Between events the density follows a monotone closed-form flow, so the
//! time spent in each bin is obtained from the exact bin-crossing times.

use serde::{Deserialize, Serialize};

use super::histogram::PredatorBins;
use crate::error::{Error, Result};
use crate::model::{equilibrium, flow_hitting_time, State};
use crate::simulate::{Interpolation, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationMeasure {
    pub window: (f64, f64),
    pub bins: PredatorBins,
    /// Time spent in each predator bin.
    pub weights: Vec<f64>,
}

impl OccupationMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn check_window(traj: &Trajectory, window: (f64, f64)) -> Result<()> {
    let (a, b) = window;
    if !(a >= 0.0 && a <= b && b <= traj.horizon) {
        return Err(Error::InvalidArgument {
            name: "window",
            reason: format!("window ({a}, {b}) must lie within [0, {}]", traj.horizon),
        });
    }
    Ok(())
}

/// Pieces of the trajectory clipped to the window: `(start, end, state at start)`.
fn clipped_segments(traj: &Trajectory, window: (f64, f64)) -> impl Iterator<Item = (f64, f64, State)> + '_ {
    let interp = traj.process.interpolation(&traj.params);
    let (a, b) = window;
    traj.segments().filter_map(move |(s, e, state)| {
        let lo = s.max(a);
        let hi = e.min(b);
        (hi > lo).then(|| (lo, hi, interp.advance(&state, lo - s)))
    })
}

pub fn occupation_measure(traj: &Trajectory, window: (f64, f64), bins: &PredatorBins) -> Result<OccupationMeasure> {
    check_window(traj, window)?;
    let interp = traj.process.interpolation(&traj.params);
    let mut weights = vec![0.0; bins.len()];
    let mut cuts = Vec::new();
    for (lo, hi, start) in clipped_segments(traj, window) {
        let Interpolation::Flow(p) = interp else {
            weights[bins.index(start.h)] += hi - lo;
            continue;
        };
        let end_h = interp.advance(&start, hi - lo).h;
        let (h_min, h_max) = (start.h.min(end_h), start.h.max(end_h));
        cuts.clear();
        cuts.push(lo);
        for &edge in &bins.edges {
            if edge > h_min && edge < h_max {
                if let Some(tau) = flow_hitting_time(&p, start.n, start.h, edge) {
                    cuts.push((lo + tau).clamp(lo, hi));
                }
            }
        }
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let len = w[1] - w[0];
            if len > 0.0 {
                let mid = interp.advance(&start, 0.5 * (w[0] + w[1]) - lo);
                weights[bins.index(mid.h)] += len;
            }
        }
    }
    Ok(OccupationMeasure {
        window,
        bins: bins.clone(),
        weights,
    })
}

/// Fraction of the window during which `|h - h*_n| <= tol`.
pub fn near_equilibrium_fraction(traj: &Trajectory, window: (f64, f64), tol: f64) -> Result<f64> {
    check_window(traj, window)?;
    let length = window.1 - window.0;
    if length == 0.0 {
        return Ok(0.0);
    }
    let p = traj.params;
    let interp = traj.process.interpolation(&p);
    let mut near = 0.0;
    for (lo, hi, start) in clipped_segments(traj, window) {
        let target = equilibrium(&p, start.n);
        let gap = start.h - target;
        if gap.abs() <= tol {
            near += hi - lo;
            continue;
        }
        if matches!(interp, Interpolation::Hold) || start.h == 0.0 {
            continue;
        }
        // the distance to h*_n decreases monotonically along the flow
        let level = if gap > 0.0 { target + tol } else { target - tol };
        if let Some(tau) = flow_hitting_time(&p, start.n, start.h, level) {
            near += (hi - lo - tau).max(0.0);
        }
    }
    Ok(near / length)
}
