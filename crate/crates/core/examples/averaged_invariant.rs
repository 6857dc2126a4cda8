//! Invariant law of the averaged prey chain and its mode.

use preypred::analysis::{averaged_invariant, invariant_mode};
use preypred::ModelParams;

fn main() -> preypred::Result<()> {
    let p = ModelParams::benchmark();
    let mu = averaged_invariant(&p, 50)?;
    println!("mu_1 = {:.4e}, tail mass {:.2e}", mu.prob(1), mu.tail_mass);
    for (n, w) in mu.support().take(30) {
        println!("{n:>3} {w:.6} {}", "#".repeat((w * 400.0) as usize));
    }

    let mode = invariant_mode(&p, 200)?;
    let poly = mode.polynomial;
    println!("mode {} (tie: {})", mode.mode, mode.tie);
    println!(
        "quadratic: alpha={} beta={} gamma={} disc={:.4} x1={:.4} predicts {} (discrepancy: {})",
        poly.alpha, poly.beta, poly.gamma, poly.discriminant, poly.x1, poly.predicted_mode, mode.discrepancy
    );
    Ok(())
}
