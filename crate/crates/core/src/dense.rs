//! Dense matrix views of Pauli operators for small registers.
//!
//! Basis index bit `q` holds the state of qubit `q`. These routines allocate
//! `2^n x 2^n` matrices and are meant for oracles and checks on a handful of
//! qubits, not for simulation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::{i_pow, PauliString, PauliSum};

pub type Matrix = DMatrix<Complex64>;

/// Amplitude of `P|b>`: returns `(b ^ x, phase)`.
#[inline]
pub(crate) fn pauli_action(p: &PauliString, b: usize) -> (usize, Complex64) {
    let sign = ((b as u64) & p.z_mask()).count_ones();
    (b ^ p.x_mask() as usize, i_pow(p.y_count() + 2 * sign))
}

pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let dim = 1usize << p.n_qubits();
    let mut m = Matrix::zeros(dim, dim);
    for b in 0..dim {
        let (row, phase) = pauli_action(p, b);
        m[(row, b)] = phase;
    }
    m
}

pub fn sum_matrix(a: &PauliSum) -> Matrix {
    let dim = 1usize << a.n_qubits();
    let mut m = Matrix::zeros(dim, dim);
    for t in a.terms() {
        for b in 0..dim {
            let (row, phase) = pauli_action(&t.string, b);
            m[(row, b)] += phase * t.coeff;
        }
    }
    m
}

/// `exp(i * angle * h)` via Padé scaling and squaring.
pub fn exp_i(h: &PauliSum, angle: f64) -> Matrix {
    (sum_matrix(h) * Complex64::new(0.0, angle)).exp()
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(*v))
}
