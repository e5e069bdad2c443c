//! Error series against dense power-series oracles.

mod common;

use common::*;
use steer::formulas::{split_symmetric, suzuki, ProductFormula};
use steer::pauli::PauliSum;
use steer::series::{error_hamiltonian, symmetric_effective_hamiltonian, zassenhaus};

fn random_partition(n: usize, parts: usize, seed: u64) -> Vec<PauliSum> {
    let mut r = rng(seed);
    (0..parts).map(|_| random_sum(n, 2, &mut r)).collect()
}

fn total(parts: &[PauliSum]) -> PauliSum {
    parts.iter().skip(1).fold(parts[0].clone(), |a, b| a.add(b))
}

fn check_against_dense(f: &ProductFormula, h: &PauliSum, order: usize) {
    let e = error_hamiltonian(f, h, order).unwrap();
    let dim = 1usize << h.n_qubits();
    let u = MatSeries::exp_i(&dense(h), 1.0, order + 1);
    let s = formula_series(f, order + 1);
    let a = generator_series(&s, &u, &MatSeries::identity(dim, order + 1));
    for j in 0..=order {
        let d = coeff_diff(&a.0[j], &e.omega(j));
        assert!(d < 1e-10, "{} power {j}: {d:e}", f.label());
    }
}

#[test]
fn first_second_fourth_order_match_dense_series() {
    for seed in 0..3 {
        let parts = random_partition(2, 3, seed);
        let h = total(&parts);
        check_against_dense(&suzuki(1, &parts).unwrap(), &h, 3);
        check_against_dense(&suzuki(2, &parts).unwrap(), &h, 5);
        check_against_dense(&suzuki(4, &parts).unwrap(), &h, 6);
    }
}

#[test]
fn symmetric_generator_matches_dense_route() {
    for seed in 10..13 {
        let parts = random_partition(2, 3, seed);
        let h = total(&parts);
        let split = split_symmetric(&suzuki(2, &parts).unwrap()).unwrap();
        let order = 6;
        let e = symmetric_effective_hamiltonian(&split, &h, order).unwrap();
        let l = formula_series(&split.left, order + 1);
        let r = formula_series(&split.right, order + 1);
        let u = MatSeries::exp_i(&dense(&h), 1.0, order + 1);
        let a = generator_series(&l, &u, &r);
        for j in 0..=order {
            let d = coeff_diff(&a.0[j], &e.omega(j));
            assert!(d < 1e-10, "power {j}: {d:e}");
        }
        for j in [1, 3, 5] {
            assert!(e.omega(j).is_empty(), "odd power {j} should vanish");
        }
    }
}

#[test]
fn error_unitary_series_agrees_with_dense_exponentials() {
    // F(t) = S^dagger(t) U(t) rebuilt from exact matrices, compared with its
    // generator evaluated by finite differences at one point.
    let parts = random_partition(2, 2, 99);
    let h = total(&parts);
    let f = suzuki(2, &parts).unwrap();
    let e = error_hamiltonian(&f, &h, 10).unwrap();
    let t = 0.05;
    let eps = 1e-5;
    let fm = |t: f64| f.matrix(t).adjoint() * expm_i(&dense(&h), t);
    let deriv = (fm(t + eps) - fm(t - eps)) / c(2.0 * eps);
    let gen = deriv * fm(t).adjoint() * (-I);
    let series = dense(&e.omegas().evaluate(t));
    assert!(frob(&(gen - series)) < 1e-8);
}

#[test]
fn zassenhaus_matches_dense_residual() {
    let parts = random_partition(2, 2, 5);
    let h = total(&parts);
    let f = suzuki(1, &parts).unwrap();
    let z = zassenhaus(&f, &h, 4).unwrap();
    let resid = |t: f64| {
        let prod = z.iter().fold(f.matrix(t), |acc, (j, o)| acc * expm_i(&dense(o), t.powi(*j as i32)));
        op_norm(&(expm_i(&dense(&h), t) - prod))
    };
    let pts: Vec<(f64, f64)> = log_grid(0.01, 0.05, 6).into_iter().map(|t| (t, resid(t))).collect();
    let slope = loglog_slope(&pts);
    assert!((slope - 5.0).abs() < 0.2, "slope {slope}");
}
