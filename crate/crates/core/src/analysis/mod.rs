//! Stationary behaviour and convergence diagnostics.

pub mod diagnostics;
pub mod drift;
pub mod histogram;
pub mod invariant;
pub mod occupation;
pub mod stats;

pub use diagnostics::{
    epsilon_convergence_suite, ergodicity_decay, reachability, DecayPoint, DecayReport, EpsilonRow, EpsilonSuite,
    ReachReport, Target, Verdict,
};
pub use drift::{drift_check, drift_margin, DriftGrid, DriftReport};
pub use histogram::{concentration_fraction, empirical_invariant, BinSpec, Hist2D, PredatorBins};
pub use invariant::{
    averaged_invariant, averaged_ratio, invariant_mode, DiscreteDistribution, ModePolynomial, ModeReport,
    TruncationStatus,
};
pub use occupation::{near_equilibrium_fraction, occupation_measure, OccupationMeasure};
pub use stats::{tv_distance, TotalVariation};
