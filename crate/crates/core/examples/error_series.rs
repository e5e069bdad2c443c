//! Error Hamiltonians of product formulas on a small Ising chain.
//!
//! Prints the leading powers of the standard error series for second-order
//! Suzuki, the sandwiched series of its symmetric split (odd powers vanish),
//! and the Zassenhaus exponents of the first-order formula.

use steer::formulas::{split_symmetric, suzuki};
use steer::models::{tf_ising, LatticeSpec};
use steer::series::{error_hamiltonian, symmetric_effective_hamiltonian, zassenhaus};

fn main() -> steer::Result<()> {
    let model = tf_ising(LatticeSpec::line(3)?, 1.0, 0.8)?;
    let h = &model.hamiltonian;
    let s2 = suzuki(2, &model.partition)?;

    let e = error_hamiltonian(&s2, h, 4)?;
    println!("{}: error series of {}", model.name, s2.label());
    for j in e.nonzero_powers() {
        println!("  t^{j}: {} terms, lambda = {:.4}", e.terms(j).len(), e.lambda(j));
    }
    println!("  lambda~ = {:.4}", e.lambda_tilde());

    let sym = symmetric_effective_hamiltonian(&split_symmetric(&s2)?, h, 6)?;
    println!("symmetric split: nonzero powers {:?}", sym.nonzero_powers());

    let s1 = suzuki(1, &model.partition)?;
    for (j, omega) in zassenhaus(&s1, h, 4)? {
        println!("zassenhaus exponent t^{j}: {} terms, one-norm {:.4}", omega.len(), omega.one_norm());
    }

    println!("\nfirst lines of the dump format:");
    for line in e.dump().lines().take(6) {
        println!("  {line}");
    }
    Ok(())
}
