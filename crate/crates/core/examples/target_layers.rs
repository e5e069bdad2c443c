//! Layers needed to reach a target error at t = n on random-field Heisenberg
//! chains, for the bare second-order formula and its corrected versions.

use steer::config::Method;
use steer::experiments::{layers_to_target, Experiment};
use steer::formulas::suzuki;
use steer::models::{heisenberg_random_field, LatticeSpec};
use steer::sampler::SteerMode;
use steer::simulator::StateVector;

fn main() -> steer::Result<()> {
    let eps = 1e-3;
    let samples = 100;
    let methods = [Method::Trotter, Method::Steer(SteerMode::Standard), Method::Steer(SteerMode::GreedyQds)];
    println!("{:>3} {:>10} {:>10} {:>12}", "n", "trotter", "standard", "greedy+qds");
    for n in [4usize, 6] {
        let model = heisenberg_random_field(LatticeSpec::line(n)?, 11)?;
        let f = suzuki(2, &model.partition)?;
        let neel = (0..n).filter(|q| q % 2 == 1).fold(0, |acc, q| acc | 1 << q);
        let mut exp = Experiment::new(model, f, StateVector::basis(n, neel)?, 11)?;
        exp.prepare(&methods)?;
        let t = n as f64;
        let counts: Vec<usize> = methods
            .iter()
            .map(|&m| layers_to_target(&exp, m, t, if m == Method::Trotter { 1 } else { samples }, eps, 1 << 14))
            .collect::<Result<_, _>>()?;
        println!("{n:>3} {:>10} {:>10} {:>12}", counts[0], counts[1], counts[2]);
    }
    Ok(())
}
