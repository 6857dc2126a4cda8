//! Closed-form invariant law of the averaged prey chain and its mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{equilibrium, ModelParams};

/// Ratio below which `mu_{n+1}/mu_n` counts as equal to one.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationStatus {
    #[default]
    Ok,
    /// The weights were still increasing at the truncation point.
    ModeNotCaptured,
}

/// Probability mass function on `start..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    pub start: u64,
    pub weights: Vec<f64>,
    /// Estimated mass of the untruncated law beyond `n_max`.
    pub tail_mass: f64,
    pub status: TruncationStatus,
}

impl DiscreteDistribution {
    /// Normalizes arbitrary nonnegative weights on `start..`.
    pub fn from_weights(start: u64, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument {
                name: "weights",
                reason: "need at least one finite nonnegative weight".into(),
            });
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument {
                name: "weights",
                reason: "total weight is zero".into(),
            });
        }
        Ok(Self {
            start,
            weights: weights.into_iter().map(|w| w / total).collect(),
            tail_mass: 0.0,
            status: TruncationStatus::Ok,
        })
    }

    /// Empirical law of a sample of counts.
    pub fn from_samples<I: IntoIterator<Item = u64>>(samples: I) -> Result<Self> {
        let samples: Vec<u64> = samples.into_iter().collect();
        let (Some(&lo), Some(&hi)) = (samples.iter().min(), samples.iter().max()) else {
            return Err(Error::InvalidArgument {
                name: "samples",
                reason: "empty sample".into(),
            });
        };
        let mut counts = vec![0.0; (hi - lo + 1) as usize];
        for s in samples {
            counts[(s - lo) as usize] += 1.0;
        }
        Self::from_weights(lo, counts)
    }

    pub fn n_max(&self) -> u64 {
        self.start + self.weights.len() as u64 - 1
    }

    pub fn prob(&self, n: u64) -> f64 {
        if n < self.start {
            return 0.0;
        }
        self.weights.get((n - self.start) as usize).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.weights.iter().enumerate().map(move |(i, &w)| (self.start + i as u64, w))
    }

    /// Smallest most likely value.
    pub fn argmax(&self) -> u64 {
        let mut best = 0;
        for (i, w) in self.weights.iter().enumerate() {
            if *w > self.weights[best] {
                best = i;
            }
        }
        self.start + best as u64
    }

    pub fn mean(&self) -> f64 {
        self.support().map(|(n, w)| n as f64 * w).sum()
    }
}

/// `mu_{n+1} / mu_n = bn / ((n+1)(d + c(n+1) + B h*_{n+1}))` for the averaged
/// chain without migration.
pub fn averaged_ratio(p: &ModelParams, n: u64) -> f64 {
    let next = (n + 1) as f64;
    let death = next * (p.prey_death + p.prey_competition * next + p.predation * equilibrium(p, n + 1));
    p.prey_birth * n as f64 / death
}

fn check_averaged(p: &ModelParams, n_max: u64) -> Result<()> {
    p.validate()?;
    if p.has_migration() {
        return Err(Error::InvalidArgument {
            name: "m",
            reason: "the averaged invariant law is computed without migration".into(),
        });
    }
    if n_max < 2 {
        return Err(Error::InvalidArgument {
            name: "N_max",
            reason: format!("must be >= 2, got {n_max}"),
        });
    }
    Ok(())
}

/// Invariant law of the averaged prey chain truncated to `1..=n_max`.
///
/// Log-weights follow the detailed-balance recursion from `log mu_1 = 0`;
/// normalization uses log-sum-exp. The tail beyond `n_max` is estimated by a
/// geometric series with the last ratio.
pub fn averaged_invariant(p: &ModelParams, n_max: u64) -> Result<DiscreteDistribution> {
    check_averaged(p, n_max)?;
    let mut log_w = Vec::with_capacity(n_max as usize);
    log_w.push(0.0);
    for n in 1..n_max {
        let prev = *log_w.last().unwrap();
        log_w.push(prev + averaged_ratio(p, n).ln());
    }
    let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_total = top + log_w.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    let weights: Vec<f64> = log_w.iter().map(|l| (l - log_total).exp()).collect();

    let last_ratio = averaged_ratio(p, n_max);
    let (tail_mass, status) = if last_ratio < 1.0 {
        let rel = weights[weights.len() - 1] * last_ratio / (1.0 - last_ratio);
        (rel / (1.0 + rel), TruncationStatus::Ok)
    } else {
        (1.0, TruncationStatus::ModeNotCaptured)
    };
    Ok(DiscreteDistribution {
        start: 1,
        weights,
        tail_mass,
        status,
    })
}

/// Coefficients and roots of the quadratic whose sign tracks
/// `b / ((x+1)(d + c(x+1) + B h*(x+1))) - 1`.
///
/// This quadratic omits the factor `n` of the recursion ratio and therefore
/// generally predicts a different mode; it is reported for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePolynomial {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub discriminant: f64,
    pub x0: f64,
    pub x1: f64,
    /// Smallest integer `>= x1` (a root within `1e-9` of an integer counts as
    /// that integer, the tie rule), or 1 when `x1 <= 1`.
    pub predicted_mode: u64,
}

impl ModePolynomial {
    pub fn new(p: &ModelParams) -> Self {
        let (b, d, c) = (p.prey_birth, p.prey_death, p.prey_competition);
        let (big_b, r, big_d, big_c) = (p.predation, p.conversion, p.predator_death, p.predator_competition);
        let pred = r * big_b * big_b / big_c;
        let cross = big_b * big_d / big_c;
        let alpha = c + pred;
        let beta = d + 2.0 * c + 2.0 * pred - cross;
        let gamma = -b + d + c + pred - cross;
        let discriminant = (d - cross).powi(2) + 4.0 * alpha * b;
        let root = discriminant.sqrt();
        let x0 = (-beta - root) / (2.0 * alpha);
        let x1 = (-beta + root) / (2.0 * alpha);
        let nearest = x1.round();
        let x1_snapped = if (x1 - nearest).abs() <= 1e-9 { nearest } else { x1 };
        let predicted_mode = if x1_snapped > 1.0 { x1_snapped.ceil() as u64 } else { 1 };
        Self {
            alpha,
            beta,
            gamma,
            discriminant,
            x0,
            x1,
            predicted_mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode: u64,
    /// `mu_{mode+1} = mu_mode` within tolerance; the smaller index is reported.
    pub tie: bool,
    pub polynomial: ModePolynomial,
    /// The quadratic's prediction disagrees with the recursion.
    pub discrepancy: bool,
}

/// Mode of the averaged invariant law by scanning the recursion ratios.
pub fn invariant_mode(p: &ModelParams, n_max: u64) -> Result<ModeReport> {
    check_averaged(p, n_max)?;
    let mut mode = 1;
    let mut tie = false;
    while mode < n_max {
        let ratio = averaged_ratio(p, mode);
        if (ratio - 1.0).abs() <= TIE_TOL {
            tie = true;
            break;
        }
        if ratio < 1.0 {
            break;
        }
        mode += 1;
    }
    let polynomial = ModePolynomial::new(p);
    Ok(ModeReport {
        mode,
        tie,
        polynomial,
        discrepancy: polynomial.predicted_mode != mode,
    })
}
