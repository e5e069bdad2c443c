//! Two-qubit depth estimates per layer: bare formulas, corrected layers, and
//! the worst-case bound for a correction spanning the whole register.

use steer::config::Method;
use steer::experiments::Experiment;
use steer::formulas::{depth_estimate, rotation_depth, steer_depth_bound, suzuki};
use steer::models::{tf_ising, LatticeSpec};
use steer::sampler::SteerMode;
use steer::simulator::StateVector;

fn main() -> steer::Result<()> {
    println!("rotation depth by Pauli weight:");
    for w in 1..=8 {
        print!(" {w}:{}", rotation_depth(w));
    }
    println!();

    let model = tf_ising(LatticeSpec::line(16)?, 1.0, 1.0)?;
    let s2 = depth_estimate(&suzuki(2, &model.partition)?, &[]);
    let s4 = depth_estimate(&suzuki(4, &model.partition)?, &[]);
    println!("1x16 Ising: suzuki2 {} per layer, suzuki4 {}", s2.formula_depth, s4.formula_depth);
    println!("worst-case corrected layer: {}", steer_depth_bound(s2.formula_depth, 16));

    let f = suzuki(2, &model.partition)?;
    let mut exp = Experiment::new(model, f, StateVector::basis(16, 0)?, 0)?;
    let methods: Vec<Method> = SteerMode::ALL.iter().map(|&m| Method::Steer(m)).collect();
    exp.prepare(&methods)?;
    for m in methods {
        println!("  {:<11} {}", m.name(), exp.layer_depth(m));
    }
    Ok(())
}
