//! Draw corrections from every sampling mode and compare the empirical mean
//! rotation angle with the deterministic angle the ensemble prescribes.

use steer::formulas::{split_symmetric, suzuki};
use steer::models::{heisenberg, LatticeSpec};
use steer::sampler::{stream_rng, SamplerEnsemble, SteerMode};
use steer::series::{error_hamiltonian, symmetric_effective_hamiltonian};

fn main() -> steer::Result<()> {
    let model = heisenberg(LatticeSpec::line(4)?, &[0.4, -0.3, 0.2, -0.1])?;
    let f = suzuki(2, &model.partition)?;
    let e = error_hamiltonian(&f, &model.hamiltonian, 4)?;
    let es = symmetric_effective_hamiltonian(&split_symmetric(&f)?, &model.hamiltonian, 4)?;
    let t = 0.1;

    for mode in SteerMode::ALL {
        let ens = SamplerEnsemble::build(if mode == SteerMode::Symmetric { &es } else { &e }, mode)?;
        let probs: Vec<String> = ens
            .power_probabilities(t)
            .iter()
            .map(|(j, p)| format!("t^{j}: {p:.3}"))
            .collect();
        let n = 2000;
        let mut rotations = 0usize;
        let mut angle = 0.0;
        for i in 0..n {
            let c = ens.sample(t, &mut stream_rng(7, 0, i))?;
            rotations += c.rotations.len();
            angle += c.rotations.iter().map(|(_, a)| a.abs()).sum::<f64>();
        }
        println!(
            "{:<11} powers [{}]  mean rotations/draw {:.2}  mean |angle| {:.3e}",
            mode.name(),
            probs.join(", "),
            rotations as f64 / n as f64,
            angle / n as f64
        );
    }
    Ok(())
}
