//! Draw first-jump times with thinning and with hazard inversion and compare
//! the two samples.

use preypred::analysis::stats::{ks_critical_two, ks_two_sample};
use preypred::simulate::{next_jump_inversion, next_jump_thinning};
use preypred::{ModelParams, RngStream, State};

fn main() {
    let p = ModelParams::benchmark();
    let draws = 20_000;
    for s in [State::new(5, 5.0), State::new(40, 1.0), State::new(2, 60.0)] {
        let mut rng_a = RngStream::new(1, 0).rng();
        let mut rng_b = RngStream::new(1, 1).rng();
        let a: Vec<f64> = (0..draws).map(|_| next_jump_thinning(&p, &s, &mut rng_a).0).collect();
        let b: Vec<f64> = (0..draws).map(|_| next_jump_inversion(&p, &s, &mut rng_b).0).collect();
        let d = ks_two_sample(&a, &b);
        let crit = ks_critical_two(0.01, draws, draws);
        println!("state ({:>2}, {:>5.1})  KS {:.5}  critical {:.5}  {}", s.n, s.h, d, crit, if d < crit { "ok" } else { "REJECT" });
    }
}
