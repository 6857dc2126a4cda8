//! Acceptance criteria. Runs as a plain binary and prints one PASS/FAIL line
//! per criterion; exits nonzero if any fail.
//!
//! The full-scale concentration run is skipped unless `PREYPRED_SLOW=1`.

use std::path::Path;
use std::process::{Command as Proc, Stdio};
use std::time::{Duration, Instant};

use preypred::analysis::stats::{ks_critical_two, ks_two_sample};
use preypred::analysis::{
    averaged_invariant, concentration_fraction, drift_check, epsilon_convergence_suite, ergodicity_decay,
    invariant_mode, tv_distance, DiscreteDistribution, DriftGrid,
};
use preypred::io::{parse_config, run, Command, Payload};
use preypred::model::{equilibrium, flow, Lyapunov};
use preypred::simulate::{
    next_jump_inversion, next_jump_thinning, run_replicas, ProcessTag, ReplicaPlan, SimOptions,
};
use preypred::{ModelParams, RngStream, State};

const BENCH: &str = "b=0.4 d=0 c=0.005 B=0.02 r=2 D=0 C=0.04";

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_mu1() -> Check {
    let cfg = parse_config(&format!("{BENCH} N_max=50")).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let out = run(Command::Invariant, &cfg, false).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let Payload::Distribution(d) = out.bundle.payload else {
        return Err("unexpected payload".into());
    };
    let mu1 = d.p[0];
    ensure(
        d.n[0] == 1 && (mu1 - 2.69e-5).abs() <= 0.02e-5 && elapsed < Duration::from_millis(10),
        format!("mu_1 = {mu1:.5e} (target 2.69e-5 +- 2e-7), {elapsed:?}"),
    )
}

/// `log mu_n - log mu_1 = (n-1) log(b/c~) - log n - log n!`.
fn c2_closed_form() -> Check {
    let sets = [
        ModelParams::benchmark(),
        ModelParams::new(0.7, 0.0, 0.01, 0.03, 1.5, 0.0, 0.05).unwrap(),
        ModelParams::new(1.2, 0.0, 0.02, 0.05, 0.5, 0.0, 0.1).unwrap(),
    ];
    let mut worst = 0.0f64;
    for p in sets {
        let ct = p.prey_competition + p.conversion * p.predation.powi(2) / p.predator_competition;
        let mu = averaged_invariant(&p, 50).map_err(|e| e.to_string())?;
        let mut log_fact = 0.0;
        for n in 1..=50u64 {
            log_fact += (n as f64).ln();
            let expected = ((n - 1) as f64 * (p.prey_birth / ct).ln() - (n as f64).ln() - log_fact).exp() * mu.prob(1);
            worst = worst.max((mu.prob(n) - expected).abs() / expected);
        }
    }
    ensure(worst <= 1e-10, format!("max relative error {worst:.2e} over 3 parameter sets, n <= 50"))
}

fn rk4_rhs(p: &ModelParams, n: u64, h: f64) -> f64 {
    h * (p.conversion * p.predation * n as f64 - p.predator_death - p.predator_competition * h) / p.epsilon
}

fn c3_flow_exactness() -> Check {
    let started = Instant::now();
    let base = ModelParams::new(0.4, 0.0, 0.005, 0.02, 2.0, 0.1, 0.04).unwrap();
    let ts: Vec<f64> = (1..=10).map(|k| 0.5 * k as f64).collect();
    let dt = 1e-3;
    let mut worst_rk = 0.0f64;
    let mut worst_id = 0.0f64;
    for eps in [1.0, 0.1] {
        let p = base.with_epsilon(eps).unwrap();
        let step_dt = dt * eps;
        for n in 1..=20u64 {
            for j in 0..20 {
                let h0 = 0.1 + 2.0 * j as f64;
                let mut h = h0;
                let mut t = 0.0;
                for &target in &ts {
                    let target = target * eps;
                    while t < target - 1e-12 {
                        let step = step_dt.min(target - t);
                        let k1 = rk4_rhs(&p, n, h);
                        let k2 = rk4_rhs(&p, n, h + 0.5 * step * k1);
                        let k3 = rk4_rhs(&p, n, h + 0.5 * step * k2);
                        let k4 = rk4_rhs(&p, n, h + step * k3);
                        h += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                        t += step;
                    }
                    let exact = flow(&p, n, h0, target).unwrap();
                    worst_rk = worst_rk.max((exact - h).abs());

                    let s = 0.37 * target;
                    let composed = flow(&p, n, flow(&p, n, h0, s).unwrap(), target - s).unwrap();
                    worst_id = worst_id.max((composed - exact).abs());
                    let star = equilibrium(&p, n);
                    worst_id = worst_id.max((flow(&p, n, star, target).unwrap() - star).abs());
                    worst_id = worst_id.max(flow(&p, n, 0.0, target).unwrap().abs());
                }
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(
        worst_rk <= 1e-8 && worst_id <= 1e-10 && elapsed < Duration::from_secs(1),
        format!("max |flow - RK4| {worst_rk:.2e}, max identity error {worst_id:.2e}, {elapsed:?}"),
    )
}

fn c4_samplers() -> Check {
    let started = Instant::now();
    let p = ModelParams::benchmark();
    let draws = 100_000;
    let crit = ks_critical_two(0.01, draws, draws);
    let mut details = Vec::new();
    let mut ok = true;
    for (i, s) in [State::new(14, 14.0), State::new(3, 40.0), State::new(60, 0.5)].into_iter().enumerate() {
        let mut ra = RngStream::new(2024, 2 * i as u64).rng();
        let mut rb = RngStream::new(2024, 2 * i as u64 + 1).rng();
        let a: Vec<f64> = (0..draws).map(|_| next_jump_thinning(&p, &s, &mut ra).0).collect();
        let b: Vec<f64> = (0..draws).map(|_| next_jump_inversion(&p, &s, &mut rb).0).collect();
        let d = ks_two_sample(&a, &b);
        ok &= d < crit;
        details.push(format!("({},{}) D={d:.4}", s.n, s.h));
    }
    let elapsed = started.elapsed();
    ensure(
        ok && elapsed < Duration::from_secs(30),
        format!("{} vs critical {crit:.4}, {elapsed:?}", details.join(", ")),
    )
}

fn c5_contraction() -> Check {
    let mut worst = f64::NEG_INFINITY;
    let sets = [ModelParams::benchmark(), ModelParams::new(0.4, 0.0, 0.005, 0.05, 1.0, 0.02, 0.04).unwrap()];
    for base in sets {
        let h1 = equilibrium(&base, 1);
        let delta = 0.99 * base.predator_competition * h1;
        for eps in [1.0, 0.1] {
            let p = base.with_epsilon(eps).unwrap();
            for n in 1..=40u64 {
                let star = equilibrium(&p, n);
                for j in 1..=40 {
                    let h = h1 + 1.5 * j as f64;
                    for k in 0..=25 {
                        let t = 0.4 * k as f64;
                        let lhs = (flow(&p, n, h, t).unwrap() - star).abs();
                        let rhs = (h - star).abs() * (-delta * t / eps).exp();
                        worst = worst.max(lhs - rhs - 1e-12 * h.max(1.0));
                    }
                }
            }
        }
    }
    ensure(worst <= 0.0, format!("max violation {worst:.2e} over n<=40, 40 densities above h*_1, 26 times, eps in {{1, 0.1}}"))
}

fn c6_drift() -> Check {
    let p = ModelParams::benchmark();
    let grid = DriftGrid {
        n_max: 500,
        h_max: 500.0,
        h_steps: 1000,
    };
    let mut details = Vec::new();
    let mut ok = true;
    for lyap in [Lyapunov::V, Lyapunov::W] {
        match drift_check(&p, lyap, 0.1, grid) {
            Ok(r) => {
                let spot_ok = (1..=500)
                    .step_by(13)
                    .all(|n| (0..200).all(|k| r.holds_at(&p, &State::new(n, 2.49 * k as f64 + 0.3))));
                ok &= r.worst_margin <= 0.0 && r.delta > 0.0 && r.delta.is_finite() && spot_ok;
                details.push(format!(
                    "{lyap:?}: K=1..{}x[0,{}], delta={:.3}, worst={:.3e}",
                    r.n_bar, r.h_bar, r.delta, r.worst_margin
                ));
            }
            Err(e) => {
                ok = false;
                details.push(format!("{lyap:?}: {e}"));
            }
        }
    }
    ensure(ok, details.join("; "))
}

fn terminal_states(p: &ModelParams, z0: State, horizon: f64, replicas: u64, seed: u64) -> Vec<State> {
    run_replicas(&ReplicaPlan::new(ProcessTag::Pdmp, *p, z0, horizon, replicas, seed)).unwrap()
}

fn concentration_scan(eps: &[f64], horizon: f64, replicas: u64) -> (Vec<f64>, Duration) {
    let started = Instant::now();
    let fractions = eps
        .iter()
        .map(|&e| {
            let p = ModelParams::benchmark().with_epsilon(e).unwrap();
            concentration_fraction(&p, &terminal_states(&p, State::new(1, 2.0), horizon, replicas, 71), 0.1)
        })
        .collect();
    (fractions, started.elapsed())
}

fn c7_concentration() -> Check {
    let (f, elapsed) = concentration_scan(&[1.0, 0.1, 1e-3], 200.0, 500);
    ensure(
        f[0] <= f[1] && f[1] <= f[2] && f[2] > 0.9 && elapsed < Duration::from_secs(600),
        format!("mass within 0.1 of h*_n: {:.3} -> {:.3} -> {:.3}, {elapsed:?}", f[0], f[1], f[2]),
    )
}

fn c7_full_scale() -> Option<Check> {
    if std::env::var("PREYPRED_SLOW").as_deref() != Ok("1") {
        return None;
    }
    let (f, elapsed) = concentration_scan(&[1.0, 0.1, 1e-3, 1e-5], 1000.0, 3000);
    Some(ensure(
        f.windows(2).all(|w| w[0] <= w[1]) && f[3] > 0.9,
        format!("R=3000 T=1000: {f:.3?}, {elapsed:?}"),
    ))
}

fn c8_averaging() -> Check {
    let p = ModelParams::benchmark();
    let suite = epsilon_convergence_suite(&p, &[1.0, 0.1, 1e-3], State::new(1, 2.0), 200.0, 2000, 81, SimOptions::default())
        .map_err(|e| e.to_string())?;
    let tvs: Vec<f64> = suite.rows.iter().map(|r| r.tv_averaged_process).collect();
    let last = *tvs.last().unwrap();
    ensure(
        last <= 0.1 && suite.nonincreasing,
        format!("TV by eps 1, 0.1, 1e-3: {tvs:.4?} (noise slack {:.3})", suite.slack),
    )
}

fn c9_ibm() -> Check {
    let p = ModelParams::benchmark();
    let z0 = State::new(1, 2.0);
    let marginal = |process| {
        let states = run_replicas(&ReplicaPlan::new(process, p, z0, 5.0, 2000, 91)).unwrap();
        DiscreteDistribution::from_samples(states.iter().map(|s| s.n)).unwrap()
    };
    let tv = tv_distance(&marginal(ProcessTag::Ibm { k: 500 }), &marginal(ProcessTag::Pdmp)).unwrap();
    ensure(tv <= 0.15, format!("TV(IBM K=500, hybrid) = {tv:.4}"))
}

fn c10_ergodicity() -> Check {
    let p = ModelParams::benchmark();
    let rep = ergodicity_decay(&p, State::new(1, 2.0), State::new(30, 10.0), &[5.0, 10.0, 20.0, 40.0], 5000, 101, 200)
        .map_err(|e| e.to_string())?;
    let tvs: Vec<f64> = rep.points.iter().map(|pt| pt.tv).collect();
    let monotone = tvs.windows(2).all(|w| w[1] <= w[0] + rep.noise_floor);
    let slope = rep.fit.map(|f| f.slope);
    ensure(
        matches!(slope, Some(s) if s < 0.0) && monotone,
        format!("TV {tvs:.4?}, noise floor {:.4}, slope {slope:?}", rep.noise_floor),
    )
}

fn c11_mode() -> Check {
    let r = invariant_mode(&ModelParams::benchmark(), 200).map_err(|e| e.to_string())?;
    let poly = r.polynomial;
    ensure(
        r.mode == 14 && !r.tie && (poly.x1 - 3.0).abs() < 1e-12 && (poly.discriminant - 0.04).abs() < 1e-12 && r.discrepancy,
        format!("mode {}, x1 {}, discriminant {}, discrepancy {}", r.mode, poly.x1, poly.discriminant, r.discrepancy),
    )
}

fn run_cli(dir: &Path, tag: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = dir.join(tag);
    let status = Proc::new(env!("CARGO_BIN_EXE_preypred"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .stderr(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() && status.code() != Some(4) {
        return Err(format!("{args:?} exited with {status}"));
    }
    std::fs::read(&out).map_err(|e| e.to_string())
}

fn c12_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bench: Vec<&str> = vec!["--b", "0.4", "--c", "0.005", "--B", "0.02", "--r", "2", "--C", "0.04", "--seed", "12"];
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("simulate", vec!["simulate", "--T", "30", "--epsilon", "0.1"]),
        ("simulate-csv", vec!["simulate", "--T", "30", "--format", "csv"]),
        ("simulate-hist", vec!["simulate", "--T", "10", "--replicas", "200"]),
        ("simulate-ibm", vec!["simulate", "--T", "2", "--process", "ibm", "--K", "50"]),
        ("simulate-avg", vec!["simulate", "--T", "30", "--process", "averaged"]),
        ("simulate-inv", vec!["simulate", "--T", "30", "--sampler", "inversion"]),
        ("compare", vec!["compare", "--T", "20", "--replicas", "200"]),
        ("reach", vec!["reach", "--T", "20", "--replicas", "300", "--target_n", "10", "--target_hlo", "8", "--target_hhi", "12"]),
        ("occupation", vec!["occupation", "--T", "20", "--replicas", "4", "--epsilon", "0.1"]),
        ("ergodicity", vec!["ergodicity", "--times", "1,2,4", "--replicas", "200"]),
    ];
    let mut mismatched = Vec::new();
    for (tag, args) in &cases {
        let full: Vec<&str> = args.iter().copied().chain(bench.iter().copied()).collect();
        let a = run_cli(dir.path(), &format!("{tag}-a"), &full)?;
        let b = run_cli(dir.path(), &format!("{tag}-b"), &full)?;
        if a != b || a.is_empty() {
            mismatched.push(*tag);
        }
    }
    ensure(
        mismatched.is_empty(),
        format!("{} stochastic invocations, mismatched: {mismatched:?}", cases.len()),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 mu_1 reproduction", c1_mu1),
        ("2 closed form (D=0)", c2_closed_form),
        ("3 flow exactness", c3_flow_exactness),
        ("4 sampler equivalence", c4_samplers),
        ("5 uniform contraction", c5_contraction),
        ("6 drift inequality", c6_drift),
        ("7 slow-fast concentration", c7_concentration),
        ("8 prey marginal averaging", c8_averaging),
        ("9 IBM limit", c9_ibm),
        ("10 ergodicity trend", c10_ergodicity),
        ("11 mode analysis", c11_mode),
        ("12 determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    match c7_full_scale() {
        None => println!("criterion 7 full scale (eps=1e-5, R=3000, T=1000): SKIPPED (set PREYPRED_SLOW=1)"),
        Some(Ok(detail)) => println!("criterion 7 full scale: PASS ({detail})"),
        Some(Err(detail)) => {
            failed += 1;
            println!("criterion 7 full scale: FAIL ({detail})");
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
