//! Fermi-Hubbard on a 2x2 plaquette from the Neel filling with the centre
//! electron removed: final-state error of the bare formula and the corrected
//! variants at a few layer counts.

use steer::config::Method;
use steer::experiments::Experiment;
use steer::formulas::suzuki;
use steer::models::{fermi_hubbard, neel_minus_center, LatticeSpec};
use steer::sampler::SteerMode;
use steer::simulator::StateVector;

fn main() -> steer::Result<()> {
    let lat = LatticeSpec::new(2, 2)?;
    let model = fermi_hubbard(lat, 1.0, 4.0)?;
    println!("{}: {} qubits, {} terms, {} partition elements", model.name, model.n_qubits(), model.hamiltonian.len(), model.partition.len());
    let n = model.n_qubits();
    let f = suzuki(2, &model.partition)?;
    let mut exp = Experiment::new(model, f, StateVector::basis(n, neel_minus_center(lat))?, 5)?;
    let methods = [
        Method::Trotter,
        Method::Steer(SteerMode::Standard),
        Method::Steer(SteerMode::Greedy),
        Method::Steer(SteerMode::Symmetric),
    ];
    exp.prepare(&methods)?;
    let t = 1.0;
    for layers in [2, 4, 8] {
        let row: Vec<String> = methods
            .iter()
            .map(|&m| exp.error(m, t, layers, 500).map(|e| format!("{}={e:.2e}", m.name())))
            .collect::<Result<_, _>>()?;
        println!("N={layers}: {}", row.join("  "));
    }
    Ok(())
}
