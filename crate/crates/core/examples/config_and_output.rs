//! Parse a configuration, run a command and write its output in both formats.

use preypred::io::{parse_config, run, trajectory_to_csv, Command, Payload};

fn main() -> preypred::Result<()> {
    let cfg = parse_config(
        "# benchmark community, fast predators\n\
         b=0.4 d=0 c=0.005 B=0.02 r=2 D=0 C=0.04\n\
         epsilon=0.1 n0=3 h0=2 T=5 seed=1\n",
    )?;
    let out = run(Command::Simulate, &cfg, false)?;
    if let Payload::Trajectory(traj) = &out.bundle.payload {
        print!("{}", trajectory_to_csv(traj));
    }
    let mode = run(Command::Mode, &cfg, false)?;
    print!("{}", mode.bundle.to_json()?);
    Ok(())
}
