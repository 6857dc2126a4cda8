//! Two-dimensional histograms of `(prey, predator)` samples.

use serde::{Deserialize, Serialize};

use super::invariant::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::model::{equilibrium, ModelParams, State};

/// Predator bin edges. Bin `i` is `[edges[i], edges[i+1])`; values below the
/// first edge fall in bin 0 and values at or past the last edge in the last
/// bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredatorBins {
    pub edges: Vec<f64>,
}

impl PredatorBins {
    pub fn from_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "edges",
                reason: "need at least two finite, strictly increasing edges".into(),
            });
        }
        Ok(Self { edges })
    }

    pub fn uniform(h_max: f64, count: usize) -> Result<Self> {
        if !(h_max > 0.0) || count == 0 {
            return Err(Error::InvalidArgument {
                name: "bins",
                reason: "uniform bins need h_max > 0 and at least one bin".into(),
            });
        }
        Self::from_edges((0..=count).map(|i| h_max * i as f64 / count as f64).collect())
    }

    /// Bins centered on the distinct equilibria `h*_1 .. h*_{n_max}`, with
    /// edges at midpoints of consecutive centers.
    pub fn equilibrium_centered(p: &ModelParams, n_max: u64) -> Result<Self> {
        let mut centers: Vec<f64> = (1..=n_max.max(1)).map(|n| equilibrium(p, n)).collect();
        centers.dedup();
        if centers.len() == 1 {
            let c = centers[0];
            return Self::from_edges(vec![c - 0.5, c + 0.5]);
        }
        let mut edges = Vec::with_capacity(centers.len() + 1);
        edges.push(centers[0] - 0.5 * (centers[1] - centers[0]));
        for w in centers.windows(2) {
            edges.push(0.5 * (w[0] + w[1]));
        }
        let k = centers.len();
        edges.push(centers[k - 1] + 0.5 * (centers[k - 1] - centers[k - 2]));
        Self::from_edges(edges)
    }

    pub fn len(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, h: f64) -> usize {
        let i = self.edges.partition_point(|e| *e <= h);
        i.saturating_sub(1).min(self.len() - 1)
    }
}

/// How terminal states are binned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    /// First prey bin (1, or 0 with migration).
    pub prey_start: u64,
    /// Last prey bin; larger counts are clamped into it.
    pub prey_max: u64,
    pub predator: PredatorBins,
}

impl BinSpec {
    /// Integer prey bins `1..=n_max` and equilibrium-centered predator bins.
    pub fn equilibrium_grid(p: &ModelParams, n_max: u64) -> Result<Self> {
        Ok(Self {
            prey_start: if p.has_migration() { 0 } else { 1 },
            prey_max: n_max,
            predator: PredatorBins::equilibrium_centered(p, n_max)?,
        })
    }
}

/// Weighted `(prey, predator)` histogram, stored row-major by prey bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hist2D {
    pub bins: BinSpec,
    pub weights: Vec<f64>,
}

impl Hist2D {
    pub fn new(bins: BinSpec) -> Result<Self> {
        if bins.prey_max < bins.prey_start {
            return Err(Error::InvalidArgument {
                name: "bins",
                reason: "prey_max below prey_start".into(),
            });
        }
        let size = (bins.prey_max - bins.prey_start + 1) as usize * bins.predator.len();
        Ok(Self {
            bins,
            weights: vec![0.0; size],
        })
    }

    pub fn prey_bins(&self) -> usize {
        (self.bins.prey_max - self.bins.prey_start + 1) as usize
    }

    pub fn cell(&self, s: &State) -> (usize, usize) {
        let row = s.n.clamp(self.bins.prey_start, self.bins.prey_max) - self.bins.prey_start;
        (row as usize, self.bins.predator.index(s.h))
    }

    pub fn add(&mut self, s: &State, weight: f64) {
        let (i, j) = self.cell(s);
        let cols = self.bins.predator.len();
        self.weights[i * cols + j] += weight;
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.bins.predator.len() + col]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Adds another histogram with the same bins.
    pub fn merge(&mut self, other: &Hist2D) -> Result<()> {
        if self.bins != other.bins {
            return Err(Error::ShapeMismatch("histograms have different bins".into()));
        }
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
        Ok(())
    }

    /// Normalized prey marginal.
    pub fn prey_marginal(&self) -> Result<DiscreteDistribution> {
        let cols = self.bins.predator.len();
        let rows = self.weights.chunks(cols).map(|r| r.iter().sum()).collect();
        DiscreteDistribution::from_weights(self.bins.prey_start, rows)
    }

    /// Normalized predator marginal over predator bins.
    pub fn predator_marginal(&self) -> Vec<f64> {
        let cols = self.bins.predator.len();
        let mut out = vec![0.0; cols];
        for row in self.weights.chunks(cols) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += w;
            }
        }
        let total: f64 = out.iter().sum();
        if total > 0.0 {
            out.iter_mut().for_each(|w| *w /= total);
        }
        out
    }

    /// Fraction of weight lying in the cells that contain `(n, h*_n)`.
    pub fn mass_on_equilibria(&self, p: &ModelParams) -> f64 {
        let total = self.total();
        if total == 0.0 {
            return 0.0;
        }
        let mut on = 0.0;
        let cols = self.bins.predator.len();
        for n in self.bins.prey_start..=self.bins.prey_max {
            let (i, j) = self.cell(&State::new(n, equilibrium(p, n)));
            on += self.weights[i * cols + j];
        }
        on / total
    }
}

/// Histogram of terminal states with unit weight each.
pub fn empirical_invariant(states: &[State], bins: &BinSpec) -> Result<Hist2D> {
    if states.is_empty() {
        return Err(Error::InvalidArgument {
            name: "states",
            reason: "empty sample".into(),
        });
    }
    let mut hist = Hist2D::new(bins.clone())?;
    for s in states {
        hist.add(s, 1.0);
    }
    Ok(hist)
}

/// Fraction of states with `|h - h*_n| <= tol`.
pub fn concentration_fraction(p: &ModelParams, states: &[State], tol: f64) -> f64 {
    if states.is_empty() {
        return 0.0;
    }
    let near = states.iter().filter(|s| (s.h - equilibrium(p, s.n)).abs() <= tol).count();
    near as f64 / states.len() as f64
}
