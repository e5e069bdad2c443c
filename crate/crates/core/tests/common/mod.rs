//! Independent dense oracles shared by the integration tests.
//!
//! Everything here works on explicit `2^n x 2^n` matrices built from Kronecker
//! products, so it shares no code path with the sparse Pauli algebra under test.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steer::pauli::{PauliString, PauliSum};
use steer::series::ErrorSeries;

pub type C = Complex64;
pub type M = DMatrix<C>;

pub const I: C = C::new(0.0, 1.0);

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn single(p: char) -> M {
    let z = c(0.0);
    let o = c(1.0);
    match p {
        'I' => M::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => M::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => M::from_row_slice(2, 2, &[z, -I, I, z]),
        'Z' => M::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad Pauli {p}"),
    }
}

/// Label character `q` acts on qubit `q`, which is bit `q` of the basis index,
/// so the leftmost character is the innermost Kronecker factor.
pub fn pauli(label: &str) -> M {
    label
        .chars()
        .fold(M::identity(1, 1), |acc, p| single(p).kronecker(&acc))
}

pub fn dense(h: &PauliSum) -> M {
    let dim = 1usize << h.n_qubits();
    h.terms().iter().fold(M::zeros(dim, dim), |acc, t| {
        acc + pauli(&t.string.to_string()) * t.coeff
    })
}

pub fn labels_all(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|s| "IXYZ".chars().map(move |p| format!("{s}{p}")))
            .collect();
    }
    out
}

/// `Tr(P m) / 2^n` for every Pauli label.
pub fn decompose(m: &M, n: usize) -> Vec<(String, C)> {
    let dim = (1usize << n) as f64;
    labels_all(n)
        .into_iter()
        .map(|l| {
            let coeff = (pauli(&l) * m).trace() / dim;
            (l, coeff)
        })
        .collect()
}

/// Largest coefficient difference between a dense operator and a Pauli sum.
pub fn coeff_diff(m: &M, h: &PauliSum) -> f64 {
    let n = h.n_qubits();
    decompose(m, n)
        .into_iter()
        .map(|(l, c)| {
            let s: PauliString = l.parse().unwrap();
            (c - h.coeff(&s)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn comm(a: &M, b: &M) -> M {
    a * b - b * a
}

/// `Ad_a^n(b)`.
pub fn ad(a: &M, b: &M, n: usize) -> M {
    (0..n).fold(b.clone(), |acc, _| comm(a, &acc))
}

pub fn expm_i(h: &M, angle: f64) -> M {
    (h * C::new(0.0, angle)).exp()
}

pub fn op_norm(m: &M) -> f64 {
    m.clone().singular_values().iter().fold(0.0_f64, |a, v| a.max(*v))
}

pub fn frob(m: &M) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Random Hermitian Pauli sum with `terms` distinct non-identity strings.
pub fn random_sum(n: usize, terms: usize, rng: &mut ChaCha8Rng) -> PauliSum {
    let pool: Vec<String> = labels_all(n).into_iter().skip(1).collect();
    let mut picked: Vec<(String, f64)> = Vec::new();
    while picked.len() < terms {
        let l = pool[rng.gen_range(0..pool.len())].clone();
        if picked.iter().all(|(p, _)| *p != l) {
            picked.push((l, rng.gen_range(-1.0..1.0)));
        }
    }
    let refs: Vec<(&str, f64)> = picked.iter().map(|(l, c)| (l.as_str(), *c)).collect();
    PauliSum::from_labels(&refs).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Truncated power series with dense matrix coefficients.
#[derive(Clone, Debug)]
pub struct MatSeries(pub Vec<M>);

impl MatSeries {
    pub fn identity(dim: usize, order: usize) -> Self {
        let mut v = vec![M::zeros(dim, dim); order + 1];
        v[0] = M::identity(dim, dim);
        MatSeries(v)
    }

    /// `exp(i t a h) = sum_n (i a t)^n h^n / n!`.
    pub fn exp_i(h: &M, a: f64, order: usize) -> Self {
        let dim = h.nrows();
        let mut v = Vec::with_capacity(order + 1);
        let mut term = M::identity(dim, dim);
        for n in 0..=order {
            v.push(term.clone());
            term = &term * h * (C::new(0.0, a) / (n as f64 + 1.0));
        }
        MatSeries(v)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn mul(&self, o: &MatSeries) -> MatSeries {
        let order = self.order().min(o.order());
        MatSeries(
            (0..=order)
                .map(|p| (0..=p).fold(M::zeros(self.0[0].nrows(), self.0[0].ncols()), |acc, i| acc + &self.0[i] * &o.0[p - i]))
                .collect(),
        )
    }

    pub fn adjoint(&self) -> MatSeries {
        MatSeries(self.0.iter().map(|m| m.adjoint()).collect())
    }

    pub fn derivative(&self) -> MatSeries {
        MatSeries(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, m)| m * c(j as f64))
                .collect(),
        )
    }

    pub fn scale(&self, s: C) -> MatSeries {
        MatSeries(self.0.iter().map(|m| m * s).collect())
    }
}

/// Series of `prod_j exp(i t theta_j h_j)` in matrix-product order.
pub fn formula_series(f: &steer::formulas::ProductFormula, order: usize) -> MatSeries {
    let dim = 1usize << f.n_qubits();
    f.factors().iter().fold(MatSeries::identity(dim, order), |acc, fac| {
        acc.mul(&MatSeries::exp_i(&dense(&fac.generator), fac.theta, order))
    })
}

/// Generator `-i (dF/dt) F^dagger` of `F = L^dagger U R^dagger`, as a series.
pub fn generator_series(l: &MatSeries, u: &MatSeries, r: &MatSeries) -> MatSeries {
    let f = l.adjoint().mul(u).mul(&r.adjoint());
    let order = f.order();
    let df = f.derivative();
    let ft = MatSeries(f.0[..order].to_vec()).adjoint();
    df.mul(&ft).scale(-I)
}

/// `E[V]` of the standard, greedy, qds and symmetric constructions, built
/// directly from the series terms.
pub fn expected_correction(e: &ErrorSeries, mode: &str, t: f64, sets: Option<&dyn Fn(usize) -> Vec<Vec<usize>>>) -> M {
    let n = e.n_qubits();
    let dim = 1usize << n;
    let k = e.order();
    let powers: Vec<usize> = (k..=2 * k)
        .filter(|&j| mode != "symmetric" || !e.terms(j).is_empty())
        .collect();
    let w = |j: usize| t.powi(j as i32 + 1) / (j as f64 + 1.0);
    let big_w: f64 = powers.iter().map(|&j| w(j)).sum();
    let rot = |p: &PauliString, angle: f64| expm_i(&pauli(&p.to_string()), angle);
    let single_term = |j: usize, scale: f64| -> M {
        let lam = e.lambda(j);
        if e.terms(j).is_empty() {
            return M::identity(dim, dim);
        }
        e.terms(j).iter().fold(M::zeros(dim, dim), |acc, (p, a)| {
            acc + rot(p, a.signum() * lam * scale) * c(a.abs() / lam)
        })
    };
    let set_term = |j: usize, scale: f64| -> M {
        let lam = e.lambda(j);
        if e.terms(j).is_empty() {
            return M::identity(dim, dim);
        }
        let groups = sets.expect("sets required")(j);
        groups.iter().fold(M::zeros(dim, dim), |acc, g| {
            let s: f64 = g.iter().map(|&r| e.terms(j)[r].1.abs()).sum();
            let prod = g.iter().fold(M::identity(dim, dim), |m, &r| {
                let (p, a) = &e.terms(j)[r];
                rot(p, a * lam / s * scale) * m
            });
            acc + prod * c(s / lam)
        })
    };
    match mode {
        "standard" | "symmetric" => powers
            .iter()
            .fold(M::zeros(dim, dim), |acc, &j| acc + single_term(j, big_w) * c(w(j) / big_w)),
        "qds" => powers
            .iter()
            .fold(M::zeros(dim, dim), |acc, &j| acc + set_term(j, big_w) * c(w(j) / big_w)),
        "greedy" => powers
            .iter()
            .filter(|&&j| !e.terms(j).is_empty())
            .fold(M::identity(dim, dim), |acc, &j| single_term(j, w(j)) * acc),
        "greedy+qds" => powers
            .iter()
            .filter(|&&j| !e.terms(j).is_empty())
            .fold(M::identity(dim, dim), |acc, &j| set_term(j, w(j)) * acc),
        _ => panic!("unknown mode {mode}"),
    }
}

/// Adaptive Dormand-Prince 5(4) integration of `dY/dt = f(t, Y)` from `t0` to `t1`.
pub fn dormand_prince(f: impl Fn(f64, &M) -> M, y0: M, t0: f64, t1: f64, tol: f64) -> M {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const CS: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) / 100.0;
    while t < t1 {
        h = h.min(t1 - t);
        let mut k: Vec<M> = vec![f(t, &y)];
        for s in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[s][j] != 0.0 {
                    ys += kj * c(h * A[s][j]);
                }
            }
            k.push(f(t + CS[s] * h, &ys));
        }
        let mut y5 = y.clone();
        let mut y4 = y.clone();
        for j in 0..7 {
            y5 += &k[j] * c(h * B5[j]);
            y4 += &k[j] * c(h * B4[j]);
        }
        let err = frob(&(&y5 - &y4));
        if err <= tol || h < 1e-12 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { 0.9 * (tol / err).powf(0.2) };
        h *= factor.clamp(0.2, 5.0);
    }
    y
}

/// Least-squares log-log slope.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Log-spaced grid of `n` points over `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
