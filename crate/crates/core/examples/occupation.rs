//! Time spent by the predator density near its equilibrium along one path,
//! for decreasing epsilon.

use preypred::analysis::{near_equilibrium_fraction, occupation_measure, PredatorBins};
use preypred::simulate::{simulate_pdmp, SimOptions};
use preypred::{ModelParams, RngStream, State};

fn main() -> preypred::Result<()> {
    let horizon = 100.0;
    for eps in [1.0, 0.1, 0.01, 1e-3] {
        let p = ModelParams::benchmark().with_epsilon(eps)?;
        let traj = simulate_pdmp(&p, State::new(1, 2.0), horizon, RngStream::new(5, 0), &SimOptions::default())?;
        let near = near_equilibrium_fraction(&traj, (0.0, horizon), 0.1)?;
        let occ = occupation_measure(&traj, (0.0, horizon), &PredatorBins::uniform(20.0, 10)?)?;
        let shares: Vec<String> = occ.weights.iter().map(|w| format!("{:.2}", w / horizon)).collect();
        println!("epsilon {eps:>6}: near equilibrium {near:.3}, occupation by h bin [{}]", shares.join(" "));
    }
    Ok(())
}
