//! The individual-based model with predator carrying capacity K against the
//! hybrid process it converges to.

use preypred::analysis::{tv_distance, DiscreteDistribution};
use preypred::simulate::{run_replicas, ProcessTag, ReplicaPlan};
use preypred::{ModelParams, State};

fn prey_marginal(process: ProcessTag, replicas: u64) -> preypred::Result<DiscreteDistribution> {
    let plan = ReplicaPlan::new(process, ModelParams::benchmark(), State::new(5, 5.0), 5.0, replicas, 11);
    DiscreteDistribution::from_samples(run_replicas(&plan)?.iter().map(|s| s.n))
}

fn main() -> preypred::Result<()> {
    let replicas = 2000;
    let pdmp = prey_marginal(ProcessTag::Pdmp, replicas)?;
    for k in [10, 50, 500] {
        let ibm = prey_marginal(ProcessTag::Ibm { k }, replicas)?;
        println!("K = {k:>4}: TV to hybrid prey marginal {:.4}", tv_distance(&ibm, &pdmp)?);
    }
    Ok(())
}
