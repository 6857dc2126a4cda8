//! Parameters, hybrid state, closed-form predator flow, jump rates, cumulative
//! hazard and generator evaluation.
//!
//! Everything here is deterministic. Between prey jumps the predator density
//! follows the logistic ODE
//!
//! ```text
//! dh/dt = h (rBn - D - Ch) / epsilon
//! ```
//!
//! whose solution is known in closed form, so no numerical integration is
//! ever needed on the production path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative width of the band around `rBn - D = 0` where the flow switches to
/// its analytic limit `h / (1 + hCt)`.
const DEGENERATE_GROWTH_TOL: f64 = 1e-12;

/// Demographic rates of the community.
///
/// Serialized with the single-letter keys used on the command line
/// (`b d c B r D C m epsilon`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Prey per-capita birth rate `b`.
    #[serde(rename = "b")]
    pub prey_birth: f64,
    /// Prey per-capita death rate `d`.
    #[serde(rename = "d")]
    pub prey_death: f64,
    /// Prey logistic competition `c`.
    #[serde(rename = "c")]
    pub prey_competition: f64,
    /// Predation intensity `B`.
    #[serde(rename = "B")]
    pub predation: f64,
    /// Conversion efficiency `r`.
    #[serde(rename = "r")]
    pub conversion: f64,
    /// Predator death rate `D`.
    #[serde(rename = "D")]
    pub predator_death: f64,
    /// Predator competition `C`.
    #[serde(rename = "C")]
    pub predator_competition: f64,
    /// Prey migration rate `m`; zero disables migration.
    #[serde(rename = "m", default)]
    pub migration: f64,
    /// Predator time-scale ratio in `(0, 1]`.
    #[serde(default = "one")]
    pub epsilon: f64,
}

fn one() -> f64 {
    1.0
}

impl ModelParams {
    /// Builds a validated parameter set with `m = 0` and `epsilon = 1`.
    pub fn new(b: f64, d: f64, c: f64, big_b: f64, r: f64, big_d: f64, big_c: f64) -> Result<Self> {
        let p = Self {
            prey_birth: b,
            prey_death: d,
            prey_competition: c,
            predation: big_b,
            conversion: r,
            predator_death: big_d,
            predator_competition: big_c,
            migration: 0.0,
            epsilon: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// The reference community `b=0.4, d=0, c=0.005, B=0.02, r=2, D=0, C=0.04`.
    ///
    /// With these rates `h*_n = n` and the apparent competition is `0.025`.
    pub fn benchmark() -> Self {
        Self::new(0.4, 0.0, 0.005, 0.02, 2.0, 0.0, 0.04).expect("benchmark parameters are valid")
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_migration(mut self, m: f64) -> Result<Self> {
        self.migration = m;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, value: f64, ok: bool, constraint: &'static str) -> Result<()> {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, constraint, value })
            }
        }
        check("b", self.prey_birth, self.prey_birth > 0.0, "must be > 0")?;
        check("d", self.prey_death, self.prey_death >= 0.0, "must be >= 0")?;
        check("c", self.prey_competition, self.prey_competition > 0.0, "must be > 0")?;
        check("B", self.predation, self.predation >= 0.0, "must be >= 0")?;
        check("r", self.conversion, self.conversion > 0.0, "must be > 0")?;
        check("D", self.predator_death, self.predator_death >= 0.0, "must be >= 0")?;
        check("C", self.predator_competition, self.predator_competition > 0.0, "must be > 0")?;
        check("m", self.migration, self.migration >= 0.0, "must be >= 0")?;
        check(
            "epsilon",
            self.epsilon,
            self.epsilon > 0.0 && self.epsilon <= 1.0,
            "must lie in (0, 1]",
        )?;
        Ok(())
    }

    /// Same dynamics expressed with `epsilon = 1`: `(r, D, C) -> (r, D, C) / epsilon`.
    pub fn unscaled(&self) -> Self {
        Self {
            conversion: self.conversion / self.epsilon,
            predator_death: self.predator_death / self.epsilon,
            predator_competition: self.predator_competition / self.epsilon,
            epsilon: 1.0,
            ..*self
        }
    }

    /// Unscaled per-capita predator growth `rBn - D` at prey count `n`.
    pub fn predator_growth(&self, n: u64) -> f64 {
        self.conversion * self.predation * n as f64 - self.predator_death
    }

    /// Apparent competition `c + rB²/C` felt by the prey once predators sit at
    /// equilibrium (exact description of the averaged death rate when `D = 0`).
    pub fn apparent_competition(&self) -> f64 {
        self.prey_competition
            + self.conversion * self.predation * self.predation / self.predator_competition
    }

    pub fn has_migration(&self) -> bool {
        self.migration > 0.0
    }

    /// Whether prey deaths are possible at count `n`.
    pub fn death_active(&self, n: u64) -> bool {
        if self.has_migration() {
            n >= 1
        } else {
            n >= 2
        }
    }
}

/// A point `(n, h)` of the hybrid state space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    /// Prey count.
    pub n: u64,
    /// Predator density.
    pub h: f64,
}

impl State {
    pub fn new(n: u64, h: f64) -> Self {
        Self { n, h }
    }

    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        if !(self.h.is_finite() && self.h >= 0.0) {
            return Err(Error::InvalidState {
                n: self.n,
                h: self.h,
                reason: "predator density must be finite and >= 0",
            });
        }
        if self.n == 0 && !p.has_migration() {
            return Err(Error::InvalidState {
                n: self.n,
                h: self.h,
                reason: "prey count must be >= 1 without migration",
            });
        }
        Ok(())
    }
}

/// Predator equilibrium `h*_n = max((rBn - D)/C, 0)`.
///
/// Independent of `epsilon`: numerator and denominator scale together.
pub fn equilibrium(p: &ModelParams, n: u64) -> f64 {
    (p.predator_growth(n) / p.predator_competition).max(0.0)
}

/// Cached `n -> h*_n` lookup for `n` in `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumTable {
    values: Vec<f64>,
}

impl EquilibriumTable {
    pub fn new(p: &ModelParams, n_max: u64) -> Self {
        Self {
            values: (0..=n_max).map(|n| equilibrium(p, n)).collect(),
        }
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> Option<f64> {
        self.values.get(n as usize).copied()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

fn check_duration(name: &'static str, t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 || t == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name,
            reason: format!("duration must be >= 0, got {t}"),
        })
    }
}

fn check_density(h: f64) -> Result<()> {
    if h.is_finite() && h >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name: "h",
            reason: format!("predator density must be finite and >= 0, got {h}"),
        })
    }
}

fn is_degenerate(p: &ModelParams, n: u64) -> bool {
    let rbn = p.conversion * p.predation * n as f64;
    p.predator_growth(n).abs() < DEGENERATE_GROWTH_TOL * 1f64.max(rbn).max(p.predator_death)
}

/// Flow in unscaled time `tau = t / epsilon`; no argument checks.
pub(crate) fn flow_unchecked(p: &ModelParams, n: u64, h: f64, t: f64) -> f64 {
    if h == 0.0 || t == 0.0 {
        return h;
    }
    let tau = t / p.epsilon;
    let cc = p.predator_competition;
    if is_degenerate(p, n) {
        return h / (1.0 + h * cc * tau);
    }
    let a = p.predator_growth(n);
    if a > 0.0 {
        // h* / (1 + (h*/h - 1) e^{-a tau}) rearranged to avoid both overflow
        // and cancellation when h* is small.
        let decay = (-a * tau).exp();
        let h_star = a / cc;
        h_star / (-(-a * tau).exp_m1() + (h_star / h) * decay)
    } else {
        h * (a * tau).exp() / (1.0 + h * cc / a * (a * tau).exp_m1())
    }
}

/// Predator density after following the flow at fixed prey count `n` for a
/// duration `t`, starting from `h`.
pub fn flow(p: &ModelParams, n: u64, h: f64, t: f64) -> Result<f64> {
    check_duration("t", t)?;
    check_density(h)?;
    if t == f64::INFINITY {
        return Ok(if h > 0.0 { equilibrium(p, n) } else { 0.0 });
    }
    Ok(flow_unchecked(p, n, h, t))
}

/// Time needed for the flow at prey count `n` to carry `h` to `target`, or
/// `None` when `target` is not visited (it does not lie between `h` and the
/// limit of the flow, or equals an unreachable limit).
pub fn flow_hitting_time(p: &ModelParams, n: u64, h: f64, target: f64) -> Option<f64> {
    if target == h {
        return Some(0.0);
    }
    if h <= 0.0 || target <= 0.0 {
        return None;
    }
    let limit = equilibrium(p, n);
    let (lo, hi) = if h < limit { (h, limit) } else { (limit, h) };
    if !(target > lo && target < hi) {
        return None;
    }
    let cc = p.predator_competition;
    let tau = if is_degenerate(p, n) {
        (1.0 / target - 1.0 / h) / cc
    } else {
        let a = p.predator_growth(n);
        // e^{a tau} = y (a - hC) / (h (a - yC))
        let ratio = target * (a - h * cc) / (h * (a - target * cc));
        ratio.ln() / a
    };
    (tau.is_finite() && tau >= 0.0).then_some(tau * p.epsilon)
}

/// Prey birth and death rates at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRates {
    pub birth: f64,
    pub death: f64,
}

impl JumpRates {
    pub fn total(&self) -> f64 {
        self.birth + self.death
    }
}

/// Birth rate `bn + m` and death rate `n(d + cn + Bh)`, the latter switched
/// off at `n = 1` when there is no migration.
pub fn rates(p: &ModelParams, s: &State) -> JumpRates {
    let n = s.n as f64;
    let birth = p.prey_birth * n + p.migration;
    let death = if p.death_active(s.n) {
        n * (p.prey_death + p.prey_competition * n + p.predation * s.h)
    } else {
        0.0
    };
    JumpRates { birth, death }
}

pub fn total_rate(p: &ModelParams, s: &State) -> f64 {
    rates(p, s).total()
}

/// Unsuppressed total rate `n(b + d + cn + Bh) + m`, an upper bound of
/// [`total_rate`] at every state.
pub fn total_rate_bound(p: &ModelParams, s: &State) -> f64 {
    let n = s.n as f64;
    n * (p.prey_birth + p.prey_death + p.prey_competition * n + p.predation * s.h) + p.migration
}

/// Upper bound of the jump rate along the whole future flow from `s`.
///
/// The flow never exceeds `max(h, h*_n)` and the rates are nondecreasing in
/// `h`, so the actual rate evaluated there dominates.
pub fn rate_ceiling(p: &ModelParams, s: &State) -> f64 {
    let top = s.h.max(equilibrium(p, s.n));
    total_rate(p, &State::new(s.n, top))
}

/// `∫_0^t flow(n, h, s) ds` in closed form.
pub(crate) fn flow_integral(p: &ModelParams, n: u64, h: f64, t: f64) -> f64 {
    if h == 0.0 || t == 0.0 {
        return 0.0;
    }
    let tau = t / p.epsilon;
    let cc = p.predator_competition;
    let unscaled = if is_degenerate(p, n) {
        (h * cc * tau).ln_1p() / cc
    } else {
        let a = p.predator_growth(n);
        if a > 0.0 {
            // log(1 + hC/a (e^{a tau} - 1)) = a tau + log(e^{-a tau} + hC (1 - e^{-a tau}) / a)
            let decay = (-a * tau).exp();
            (a * tau + (decay - h * cc * (-a * tau).exp_m1() / a).ln()) / cc
        } else {
            (h * cc / a * (a * tau).exp_m1()).ln_1p() / cc
        }
    };
    unscaled * p.epsilon
}

/// Cumulative hazard `Θ(z, t) = ∫_0^t total_rate(flow(z, s)) ds`.
pub fn hazard(p: &ModelParams, s: &State, t: f64) -> Result<f64> {
    check_duration("t", t)?;
    check_density(s.h)?;
    Ok(hazard_unchecked(p, s, t))
}

pub(crate) fn hazard_unchecked(p: &ModelParams, s: &State, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let n = s.n as f64;
    let mut total = (p.prey_birth * n + p.migration) * t;
    if p.death_active(s.n) {
        total += n * (p.prey_death + p.prey_competition * n) * t
            + n * p.predation * flow_integral(p, s.n, s.h, t);
    }
    total
}

/// Duration `t` such that `hazard(p, s, t) = target`.
///
/// Bracketed by `target / rate_ceiling` and `target / (minimal rate)`, then
/// refined by Newton steps that fall back to bisection whenever they leave the
/// bracket.
pub fn invert_hazard(p: &ModelParams, s: &State, target: f64) -> Result<f64> {
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "target",
            reason: format!("target hazard must be finite and >= 0, got {target}"),
        });
    }
    s.validate(p)?;
    Ok(invert_hazard_unchecked(p, s, target))
}

pub(crate) fn invert_hazard_unchecked(p: &ModelParams, s: &State, target: f64) -> f64 {
    if target == 0.0 {
        return 0.0;
    }
    let n = s.n as f64;
    let mut floor_rate = p.prey_birth * n + p.migration;
    if p.death_active(s.n) {
        floor_rate += n * (p.prey_death + p.prey_competition * n);
    }
    let mut lo = target / rate_ceiling(p, s);
    let mut hi = target / floor_rate;
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = hazard_unchecked(p, s, t) - target;
        if f == 0.0 {
            return t;
        }
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = total_rate(p, &State::new(s.n, flow_unchecked(p, s.n, s.h, t)));
        let mut next = t - f / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-13 * next || hi - lo <= 1e-13 * hi {
            return next;
        }
        t = next;
    }
    t
}

/// Lyapunov functions used for the drift inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lyapunov {
    /// `V(n, h) = n + h / r`
    V,
    /// `W(n, h) = n² + h`
    W,
}

impl Lyapunov {
    pub fn eval(&self, p: &ModelParams, n: u64, h: f64) -> f64 {
        let n = n as f64;
        match self {
            Lyapunov::V => n + h / p.conversion,
            Lyapunov::W => n * n + h,
        }
    }

    /// Partial derivative in `h` (constant for both functions).
    pub fn d_dh(&self, p: &ModelParams) -> f64 {
        match self {
            Lyapunov::V => 1.0 / p.conversion,
            Lyapunov::W => 1.0,
        }
    }

    /// Leading negative coefficients `(coef, power)` in `n` and in `h` of the
    /// generator applied to this function, used for tail dominance checks.
    pub fn leading_terms(&self, p: &ModelParams) -> [(f64, i32); 2] {
        match self {
            Lyapunov::V => [
                (-p.prey_competition, 2),
                (-p.predator_competition / p.conversion / p.epsilon, 2),
            ],
            Lyapunov::W => [(-2.0 * p.prey_competition, 3), (-p.predator_competition / p.epsilon, 2)],
        }
    }
}

/// Generator of the process applied to a Lyapunov function at `s`.
pub fn generator_apply(p: &ModelParams, lyap: Lyapunov, s: &State) -> f64 {
    let JumpRates { birth, death } = rates(p, s);
    let here = lyap.eval(p, s.n, s.h);
    let drift = s.h * (p.predator_growth(s.n) - p.predator_competition * s.h) / p.epsilon
        * lyap.d_dh(p);
    let mut value = drift + (lyap.eval(p, s.n + 1, s.h) - here) * birth;
    if death > 0.0 {
        value += (lyap.eval(p, s.n - 1, s.h) - here) * death;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
    }

    fn bench() -> ModelParams {
        ModelParams::benchmark()
    }

    #[test]
    fn equilibrium_values() {
        let p = bench();
        assert!(close(equilibrium(&p, 1), 1.0, 1e-15));
        assert!(close(equilibrium(&p, 14), 14.0, 1e-15));
        let q = ModelParams::new(0.4, 0.0, 0.005, 0.02, 2.0, 1.0, 0.04).unwrap();
        assert_eq!(equilibrium(&q, 3), 0.0);
        assert_eq!(equilibrium(&bench().with_epsilon(1e-3).unwrap(), 7), equilibrium(&p, 7));
    }

    #[test]
    fn flow_reference_value() {
        // h e^{0.04} / (1 + 2 (e^{0.04} - 1)) with h = 2
        let e = 0.04f64.exp();
        let want = 2.0 * e / (1.0 + 2.0 * (e - 1.0));
        let got = flow(&bench(), 1, 2.0, 1.0).unwrap();
        assert!(close(got, want, 1e-14));
        assert!((got - 1.92454).abs() < 1e-5);
    }

    #[test]
    fn flow_identities() {
        let p = bench();
        assert_eq!(flow(&p, 5, 3.0, 0.0).unwrap(), 3.0);
        assert!(close(flow(&p, 5, 5.0, 17.0).unwrap(), 5.0, 1e-14));
        assert_eq!(flow(&p, 5, 0.0, 17.0).unwrap(), 0.0);
        assert!(flow(&p, 5, 1.0, -1.0).is_err());
        assert!(flow(&p, 5, -1.0, 1.0).is_err());
    }

    #[test]
    fn flow_degenerate_branch() {
        let p = ModelParams::new(0.4, 0.0, 0.005, 0.02, 2.0, 0.08, 0.04).unwrap();
        // rBn - D = 0 at n = 2
        let got = flow(&p, 2, 3.0, 2.5).unwrap();
        assert!(close(got, 3.0 / (1.0 + 3.0 * 0.04 * 2.5), 1e-14));
    }

    #[test]
    fn flow_does_not_overflow() {
        let p = bench().with_epsilon(1e-5).unwrap();
        let h = flow(&p, 30, 0.5, 1e3).unwrap();
        assert!(close(h, 30.0, 1e-14));
        assert!(hazard(&p, &State::new(30, 0.5), 1e3).unwrap().is_finite());
    }

    #[test]
    fn decaying_flow() {
        let p = ModelParams::new(0.4, 0.0, 0.005, 0.02, 2.0, 1.0, 0.04).unwrap();
        let h = flow(&p, 3, 2.0, 10.0).unwrap();
        assert!(h > 0.0 && h < 2.0);
        let later = flow(&p, 3, h, 5.0).unwrap();
        assert!(close(later, flow(&p, 3, 2.0, 15.0).unwrap(), 1e-12));
    }

    #[test]
    fn hitting_time_inverts_flow() {
        let p = bench().with_epsilon(0.1).unwrap();
        for &(n, h, y) in &[(5u64, 1.0, 3.0), (5, 9.0, 5.5), (2, 0.3, 1.9)] {
            let t = flow_hitting_time(&p, n, h, y).unwrap();
            assert!(close(flow(&p, n, h, t).unwrap(), y, 1e-10));
        }
        assert!(flow_hitting_time(&p, 5, 1.0, 6.0).is_none());
        assert!(flow_hitting_time(&p, 5, 1.0, 0.5).is_none());
    }

    #[test]
    fn rates_examples() {
        let p = bench();
        let r = rates(&p, &State::new(1, 1.0));
        assert!(close(r.birth, 0.4, 1e-15));
        assert_eq!(r.death, 0.0);
        let r = rates(&p, &State::new(2, 2.0));
        assert!(close(r.death, 0.10, 1e-14));
        assert!(close(total_rate(&p, &State::new(2, 2.0)), 0.9, 1e-14));
        assert!(close(total_rate(&p, &State::new(1, 1.0)), 0.4, 1e-15));
        assert!(close(total_rate_bound(&p, &State::new(1, 1.0)), 0.425, 1e-14));
    }

    #[test]
    fn migration_drops_indicator() {
        let p = bench().with_migration(0.1).unwrap();
        let r = rates(&p, &State::new(1, 1.0));
        assert!(close(r.death, 0.025, 1e-14));
        assert!(close(r.birth, 0.5, 1e-14));
        let r = rates(&p, &State::new(0, 1.0));
        assert!(close(r.birth, 0.1, 1e-15));
        assert_eq!(r.death, 0.0);
        assert!(State::new(0, 1.0).validate(&p).is_ok());
        assert!(State::new(0, 1.0).validate(&bench()).is_err());
    }

    #[test]
    fn pure_birth_rates() {
        let p = ModelParams::new(0.7, 0.0, 1e-300, 0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(close(total_rate(&p, &State::new(6, 3.0)), 4.2, 1e-12));
    }

    #[test]
    fn hazard_constant_rate_case() {
        let p = bench();
        let s = State::new(6, 6.0);
        let theta = total_rate(&p, &s);
        assert_eq!(hazard(&p, &s, 0.0).unwrap(), 0.0);
        assert!(close(hazard(&p, &s, 3.0).unwrap(), 3.0 * theta, 1e-13));
        assert!(close(invert_hazard(&p, &s, 5.0 * theta).unwrap(), 5.0, 1e-12));
        assert_eq!(invert_hazard(&p, &s, 0.0).unwrap(), 0.0);
        assert!(hazard(&p, &s, -1.0).is_err());
    }

    #[test]
    fn invert_hazard_round_trip() {
        let p = bench().with_epsilon(0.1).unwrap();
        for s in [State::new(1, 2.0), State::new(3, 25.0), State::new(40, 0.2)] {
            for e in [1e-6, 0.3, 1.0, 7.5, 40.0] {
                let t = invert_hazard(&p, &s, e).unwrap();
                let back = hazard(&p, &s, t).unwrap();
                assert!((back - e).abs() <= 1e-10 * e.max(1.0), "{s:?} {e} {back}");
            }
        }
    }

    #[test]
    fn generator_examples() {
        let p = bench();
        assert!(close(generator_apply(&p, Lyapunov::V, &State::new(1, 1.0)), 0.4, 1e-14));
        // n >= 2: -(C/r) h² - (D/r) h + (b - d) n - c n²
        let s = State::new(7, 3.0);
        let want = -0.02 * 9.0 + 0.4 * 7.0 - 0.005 * 49.0;
        assert!(close(generator_apply(&p, Lyapunov::V, &s), want, 1e-13));
    }

    #[test]
    fn generator_vanishes_at_rest() {
        // Nearly inert dynamics: only tiny required rates, h = 0.
        let p = ModelParams::new(1e-300, 0.0, 1e-300, 0.0, 1.0, 0.0, 1e-300).unwrap();
        let v = generator_apply(&p, Lyapunov::V, &State::new(1, 0.0));
        assert!(v.abs() < 1e-290);
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::new(0.0, 0.0, 0.1, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(bench().with_epsilon(1.5).is_err());
        assert!(bench().with_epsilon(0.0).is_err());
        assert!(bench().with_migration(-1.0).is_err());
        assert!(ModelParams::new(0.4, 0.0, 0.005, 0.02, 2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn unscaled_matches_time_change() {
        let p = bench().with_epsilon(0.01).unwrap();
        let q = p.unscaled();
        for t in [0.0, 0.003, 0.1, 2.0] {
            let a = flow(&p, 9, 2.0, t).unwrap();
            let b = flow(&q, 9, 2.0, t).unwrap();
            let c = flow(&bench(), 9, 2.0, t / 0.01).unwrap();
            assert!(close(a, b, 1e-12) && close(a, c, 1e-12));
        }
    }
}
