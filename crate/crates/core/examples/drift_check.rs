//! Certify the drift inequality on a grid for both Lyapunov functions.

use preypred::analysis::{drift_check, DriftGrid};
use preypred::model::Lyapunov;
use preypred::ModelParams;

fn main() {
    let p = ModelParams::benchmark();
    let grid = DriftGrid {
        n_max: 500,
        h_max: 500.0,
        h_steps: 1000,
    };
    for lyap in [Lyapunov::V, Lyapunov::W] {
        for gamma in [0.1, 10.0] {
            match drift_check(&p, lyap, gamma, grid) {
                Ok(r) => println!(
                    "{lyap:?} gamma={gamma}: K = 1..{} x [0, {:.2}], delta = {:.3}, worst margin outside K = {:.3e}",
                    r.n_bar, r.h_bar, r.delta, r.worst_margin
                ),
                Err(e) => println!("{lyap:?} gamma={gamma}: {e}"),
            }
        }
    }
}
