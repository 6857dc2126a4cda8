//! Distance between the laws started from two different states over time.

use preypred::analysis::ergodicity_decay;
use preypred::{ModelParams, State};

fn main() -> preypred::Result<()> {
    let p = ModelParams::benchmark();
    let report = ergodicity_decay(&p, State::new(1, 2.0), State::new(30, 10.0), &[5.0, 10.0, 20.0, 40.0], 2000, 3, 200)?;
    for pt in &report.points {
        println!("t = {:>4}: TV {:.4} (same-start noise {:.4})", pt.time, pt.tv, pt.noise);
    }
    match report.fit {
        Some(fit) => println!("log-TV slope {:.4} (r^2 {:.3})", fit.slope, fit.r_squared),
        None => println!("inconclusive: noise floor {:.4}", report.noise_floor),
    }
    Ok(())
}
