//! Simulate one path of the hybrid process and print its events.

use preypred::simulate::{simulate_pdmp, SimOptions};
use preypred::{ModelParams, RngStream, State};

fn main() -> preypred::Result<()> {
    let p = ModelParams::benchmark().with_epsilon(0.1)?;
    let traj = simulate_pdmp(&p, State::new(1, 2.0), 20.0, RngStream::new(42, 0), &SimOptions::default())?;

    println!("{:>10} {:>4} {:>10}  event", "t", "n", "h");
    for ev in &traj.events {
        println!("{:>10.4} {:>4} {:>10.4}  {}", ev.time, ev.state_after.n, ev.state_after.h, ev.kind.as_str());
    }
    println!("{} jumps, terminal state {:?}", traj.jump_count(), traj.terminal());
    Ok(())
}
