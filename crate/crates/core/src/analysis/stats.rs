//! Distances and goodness-of-fit statistics.

use super::histogram::Hist2D;
use super::invariant::DiscreteDistribution;
use crate::error::{Error, Result};

/// Measures that admit a total variation distance between two values of the
/// same shape.
pub trait TotalVariation {
    fn tv(&self, other: &Self) -> Result<f64>;
}

/// Half L1 distance between two weight vectors after normalizing each.
pub fn tv_weights(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("{} vs {} bins", a.len(), b.len())));
    }
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if !(sa > 0.0 && sb > 0.0) {
        return Err(Error::InvalidArgument {
            name: "weights",
            reason: "total weight must be positive".into(),
        });
    }
    let l1: f64 = a.iter().zip(b).map(|(x, y)| (x / sa - y / sb).abs()).sum();
    Ok((0.5 * l1).clamp(0.0, 1.0))
}

impl TotalVariation for DiscreteDistribution {
    /// Distributions live on the integers, so supports are aligned by value.
    fn tv(&self, other: &Self) -> Result<f64> {
        let lo = self.start.min(other.start);
        let hi = self.n_max().max(other.n_max());
        let a: Vec<f64> = (lo..=hi).map(|n| self.prob(n)).collect();
        let b: Vec<f64> = (lo..=hi).map(|n| other.prob(n)).collect();
        tv_weights(&a, &b)
    }
}

impl TotalVariation for Hist2D {
    fn tv(&self, other: &Self) -> Result<f64> {
        if self.bins != other.bins {
            return Err(Error::ShapeMismatch("histograms have different bins".into()));
        }
        tv_weights(&self.weights, &other.weights)
    }
}

pub fn tv_distance<M: TotalVariation>(a: &M, b: &M) -> Result<f64> {
    a.tv(b)
}

/// Asymptotic Kolmogorov-Smirnov coefficient `c(alpha) = sqrt(-ln(alpha/2)/2)`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Critical value of the one-sample statistic for `n` draws.
pub fn ks_critical_one(alpha: f64, n: usize) -> f64 {
    ks_coefficient(alpha) / (n as f64).sqrt()
}

/// Critical value of the two-sample statistic for sample sizes `n` and `m`.
pub fn ks_critical_two(alpha: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}

/// `sup |F_n - F|` for a continuous reference CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `sup |F_a - F_b|` between two empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Least-squares line `y = intercept + slope x` with its coefficient of
/// determination.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}
