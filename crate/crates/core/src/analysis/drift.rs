//! Grid verification of the Foster-Lyapunov inequality
//! `AL(z) <= -gamma L(z) + delta 1_K(z)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{generator_apply, Lyapunov, ModelParams, State};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftGrid {
    /// Prey counts `1..=n_max`.
    pub n_max: u64,
    /// Predator densities `0, h_max/h_steps, ..., h_max`.
    pub h_max: f64,
    pub h_steps: usize,
}

impl DriftGrid {
    fn h(&self, j: usize) -> f64 {
        self.h_max * j as f64 / self.h_steps as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub lyapunov: Lyapunov,
    pub gamma: f64,
    pub delta: f64,
    /// Compact set `K = {1..n_bar} x [0, h_bar]`.
    pub n_bar: u64,
    pub h_bar: f64,
    pub grid: DriftGrid,
    /// Largest `AL + gamma L` over grid points outside `K` (nonpositive).
    pub worst_margin: f64,
}

impl DriftReport {
    pub fn in_compact(&self, s: &State) -> bool {
        s.n <= self.n_bar && s.h <= self.h_bar
    }

    /// Whether the drift inequality with this report's constants holds at `s`.
    pub fn holds_at(&self, p: &ModelParams, s: &State) -> bool {
        let value = drift_margin(p, self.lyapunov, self.gamma, s);
        let allowance = if self.in_compact(s) { self.delta } else { 0.0 };
        value <= allowance * (1.0 + 1e-12) + 1e-12
    }
}

/// `AL(z) + gamma L(z)`.
pub fn drift_margin(p: &ModelParams, lyap: Lyapunov, gamma: f64, s: &State) -> f64 {
    generator_apply(p, lyap, s) + gamma * lyap.eval(p, s.n, s.h)
}

/// Scans the grid, takes `K` as the bounding box of the points where
/// `AL + gamma L > 0`, and sets `delta` to the largest positive margin.
///
/// Fails when positive margins touch the outer edge of the grid (no compact
/// set can be certified there), or when the margin is not decreasing outward
/// along that edge.
pub fn drift_check(p: &ModelParams, lyap: Lyapunov, gamma: f64, grid: DriftGrid) -> Result<DriftReport> {
    p.validate()?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "gamma",
            reason: format!("must be > 0, got {gamma}"),
        });
    }
    if grid.n_max < 2 || grid.h_steps < 2 || !(grid.h_max > 0.0) {
        return Err(Error::InvalidArgument {
            name: "grid",
            reason: "need n_max >= 2, h_steps >= 2 and h_max > 0".into(),
        });
    }
    for (coef, power) in lyap.leading_terms(p) {
        if !(coef < 0.0) {
            return Err(Error::DriftTail(format!("leading coefficient {coef} of power {power} is not negative")));
        }
    }

    let cols = grid.h_steps + 1;
    let margins: Vec<f64> = (1..=grid.n_max)
        .flat_map(|n| (0..cols).map(move |j| (n, j)))
        .map(|(n, j)| drift_margin(p, lyap, gamma, &State::new(n, grid.h(j))))
        .collect();
    let at = |n: u64, j: usize| margins[(n - 1) as usize * cols + j];

    let mut n_bar = 1;
    let mut j_bar = 0;
    let mut offending = Vec::new();
    for n in 1..=grid.n_max {
        for j in 0..cols {
            let m = at(n, j);
            if m > 0.0 {
                n_bar = n_bar.max(n);
                j_bar = j_bar.max(j);
                if n == grid.n_max || j == grid.h_steps {
                    offending.push((n, grid.h(j), m));
                }
            }
        }
    }
    if !offending.is_empty() {
        offending.truncate(20);
        return Err(Error::DriftNoCompactSet { offending });
    }

    for j in 0..cols {
        if at(grid.n_max, j) >= at(grid.n_max - 1, j) {
            return Err(Error::DriftTail(format!("margin not decreasing in n at n={}, h={}", grid.n_max, grid.h(j))));
        }
    }
    for n in 1..=grid.n_max {
        if at(n, grid.h_steps) >= at(n, grid.h_steps - 1) {
            return Err(Error::DriftTail(format!("margin not decreasing in h at n={n}, h={}", grid.h_max)));
        }
    }

    let mut delta = 0.0f64;
    let mut worst_margin = f64::NEG_INFINITY;
    for n in 1..=grid.n_max {
        for j in 0..cols {
            let m = at(n, j);
            if n <= n_bar && j <= j_bar {
                delta = delta.max(m);
            } else {
                worst_margin = worst_margin.max(m);
            }
        }
    }
    Ok(DriftReport {
        lyapunov: lyap,
        gamma,
        delta,
        n_bar,
        h_bar: grid.h(j_bar),
        grid,
        worst_margin,
    })
}
