//! As epsilon shrinks the predator density sits at its equilibrium and the
//! prey marginal approaches that of the averaged chain.

use preypred::analysis::epsilon_convergence_suite;
use preypred::simulate::SimOptions;
use preypred::{ModelParams, State};

fn main() -> preypred::Result<()> {
    let p = ModelParams::benchmark();
    let suite = epsilon_convergence_suite(&p, &[1.0, 0.1, 1e-3], State::new(1, 2.0), 200.0, 1000, 7, SimOptions::default())?;
    println!("{:>8} {:>12} {:>12} {:>14}", "epsilon", "TV(avg proc)", "TV(inv law)", "concentration");
    for row in &suite.rows {
        println!(
            "{:>8} {:>12.4} {:>12.4} {:>14.3}",
            row.epsilon, row.tv_averaged_process, row.tv_invariant, row.concentration
        );
    }
    println!("nonincreasing within {:.3}: {}", suite.slack, suite.nonincreasing);
    Ok(())
}
