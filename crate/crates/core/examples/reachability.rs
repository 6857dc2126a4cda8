//! Probability of sitting in a target set at the horizon.

use preypred::analysis::{reachability, Target};
use preypred::{ModelParams, State};

fn main() -> preypred::Result<()> {
    let p = ModelParams::benchmark();
    let targets = [
        Target { n: 3, h_lo: 2.5, h_hi: 3.5 },
        Target { n: 14, h_lo: 13.0, h_hi: 15.0 },
        Target { n: 3, h_lo: 0.0, h_hi: 0.99 },
    ];
    for target in targets {
        let r = reachability(&p, State::new(1, 2.0), target, 50.0, 5000, 17)?;
        println!("{{{}}} x ({}, {}): {} / {} hits", target.n, target.h_lo, target.h_hi, r.hits, r.replicas);
    }
    Ok(())
}
