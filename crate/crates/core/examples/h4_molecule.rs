//! Load the H4 chain Hamiltonian (184 Pauli terms plus identity) from the
//! fixture file and compare the bare and corrected formulas at fixed time.
//!
//!     cargo run --release --example h4_molecule -- fixtures/h4_sto3g.txt

use steer::config::Method;
use steer::experiments::Experiment;
use steer::formulas::suzuki;
use steer::models::load_hamiltonian;
use steer::sampler::SteerMode;
use steer::simulator::StateVector;

fn main() -> steer::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "fixtures/h4_sto3g.txt".into());
    let model = load_hamiltonian(&path)?;
    let n = model.n_qubits();
    println!("{}: {} qubits, {} terms", model.name, n, model.hamiltonian.len());
    let f = suzuki(2, &model.partition)?;
    // Half filling: the four lowest spin orbitals occupied.
    let mut exp = Experiment::new(model, f, StateVector::basis(n, 0b0000_1111)?, 3)?;
    let methods = [Method::Trotter, Method::Steer(SteerMode::Standard), Method::Steer(SteerMode::GreedyQds)];
    exp.prepare(&methods)?;
    for layers in [4, 8, 16] {
        let row: Vec<String> = methods
            .iter()
            .map(|&m| exp.error(m, 1.0, layers, 200).map(|e| format!("{}={e:.2e}", m.name())))
            .collect::<Result<_, _>>()?;
        println!("N={layers}: {}", row.join("  "));
    }
    Ok(())
}
