//! Dense statevector simulation of product formulas with sampled corrections.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dense::pauli_action;
use crate::error::{Error, Result};
use crate::formulas::{FormulaSplit, ProductFormula};
use crate::pauli::{PauliString, PauliSum};
use crate::sampler::SampledCorrection;

/// Largest register accepted by [`exact_evolve`].
pub const DENSE_LIMIT: usize = 14;
/// Largest register a [`StateVector`] may hold.
pub const STATE_LIMIT: usize = 30;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index>`; bit `q` of `index` is qubit `q`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > STATE_LIMIT {
            return Err(Error::TooLarge {
                n: n_qubits,
                limit: STATE_LIMIT,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Config(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() || dim.trailing_zeros() as usize > STATE_LIMIT {
            return Err(Error::Config(format!("amplitude count {dim} is not 2^n with 1 <= n <= {STATE_LIMIT}")));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Two-norm of `self - other`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n_qubits, other.n_qubits, "state dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.n_qubits == n {
            Ok(())
        } else {
            Err(Error::Dimension {
                left: self.n_qubits,
                right: n,
            })
        }
    }

    /// `|psi> <- exp(i angle P) |psi>`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, angle: f64) -> Result<()> {
        self.check(p.n_qubits())?;
        rotate(&mut self.amps, p, angle);
        Ok(())
    }

    /// `|psi> <- exp(i angle h) |psi>`. Mutually commuting `h` is applied as a
    /// sequence of rotations, anything else by a Taylor series on the state.
    pub fn apply_exp_factor(&mut self, h: &PauliSum, angle: f64) -> Result<()> {
        self.check(h.n_qubits())?;
        if h.is_mutually_commuting() {
            self.apply_exp_commuting(h, angle)
        } else {
            if self.n_qubits > DENSE_LIMIT {
                return Err(Error::TooLarge {
                    n: self.n_qubits,
                    limit: DENSE_LIMIT,
                });
            }
            taylor_evolve(h, angle, &mut self.amps);
            Ok(())
        }
    }

    /// Commuting fast path; fails on non-commuting or non-Hermitian `h`.
    pub fn apply_exp_commuting(&mut self, h: &PauliSum, angle: f64) -> Result<()> {
        self.check(h.n_qubits())?;
        if !h.is_mutually_commuting() {
            return Err(Error::NonCommutingGenerator);
        }
        for (p, c) in hermitian_terms(h)? {
            rotate(&mut self.amps, &p, angle * c);
        }
        Ok(())
    }

    pub fn apply_correction(&mut self, c: &SampledCorrection) -> Result<()> {
        for (p, a) in &c.rotations {
            self.apply_pauli_rotation(p, *a)?;
        }
        Ok(())
    }
}

fn hermitian_terms(h: &PauliSum) -> Result<Vec<(PauliString, f64)>> {
    h.real_terms(1e-12 * h.one_norm().max(1.0))
}

fn rotate(amps: &mut [Complex64], p: &PauliString, angle: f64) {
    if angle == 0.0 {
        return;
    }
    let (c, s) = (angle.cos(), angle.sin());
    let x = p.x_mask() as usize;
    if x == 0 {
        let plus = Complex64::new(c, s);
        let minus = Complex64::new(c, -s);
        let z = p.z_mask();
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= if ((b as u64) & z).count_ones() % 2 == 0 { plus } else { minus };
        }
        return;
    }
    let high = 1usize << (usize::BITS - 1 - x.leading_zeros());
    let is = I * s;
    for b in 0..amps.len() {
        if b & high != 0 {
            continue;
        }
        let (b2, ph_b) = pauli_action(p, b);
        let (_, ph_b2) = pauli_action(p, b2);
        let (a, a2) = (amps[b], amps[b2]);
        // (P a)[b] = ph_b2 * a[b2], (P a)[b2] = ph_b * a[b]
        amps[b] = c * a + is * ph_b2 * a2;
        amps[b2] = c * a2 + is * ph_b * a;
    }
}

/// `out += scale * h * v`.
fn apply_sum(h: &PauliSum, v: &[Complex64], scale: Complex64, out: &mut [Complex64]) {
    for term in h.terms() {
        let c = term.coeff * scale;
        for (b, a) in v.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let (row, ph) = pauli_action(&term.string, b);
            out[row] += c * ph * a;
        }
    }
}

/// `v <- exp(i angle h) v` by Taylor series over steps with `|step| ||h||_1 <= 1`.
fn taylor_evolve(h: &PauliSum, angle: f64, v: &mut [Complex64]) {
    let norm = h.one_norm();
    if norm == 0.0 || angle == 0.0 {
        return;
    }
    let steps = (angle.abs() * norm).ceil().max(1.0) as usize;
    let dt = angle / steps as f64;
    let mut term = vec![ZERO; v.len()];
    let mut next = vec![ZERO; v.len()];
    for _ in 0..steps {
        term.copy_from_slice(v);
        let mut bound = 1.0;
        for m in 1..=60 {
            next.iter_mut().for_each(|x| *x = ZERO);
            apply_sum(h, &term, I * (dt / m as f64), &mut next);
            std::mem::swap(&mut term, &mut next);
            for (a, t) in v.iter_mut().zip(&term) {
                *a += t;
            }
            bound *= (dt * norm).abs() / m as f64;
            if bound < 1e-18 {
                break;
            }
        }
    }
}

/// `exp(i t H) |s>` to about machine precision.
pub fn exact_evolve(h: &PauliSum, t: f64, s: &StateVector) -> Result<StateVector> {
    s.check(h.n_qubits())?;
    if s.n_qubits > DENSE_LIMIT {
        return Err(Error::TooLarge {
            n: s.n_qubits,
            limit: DENSE_LIMIT,
        });
    }
    let mut out = s.clone();
    taylor_evolve(h, t, &mut out.amps);
    Ok(out)
}

/// One exponential prepared for a fixed time step.
#[derive(Clone, Debug)]
enum CompiledFactor {
    /// Diagonal phases `exp(i angle sum_r c_r Z..)` as one vector, then rotations.
    Commuting {
        phases: Option<Vec<Complex64>>,
        rotations: Vec<(PauliString, f64)>,
    },
    General { generator: PauliSum, angle: f64 },
}

impl CompiledFactor {
    fn new(h: &PauliSum, angle: f64) -> Result<Self> {
        if !h.is_mutually_commuting() {
            if h.n_qubits() > DENSE_LIMIT {
                return Err(Error::TooLarge {
                    n: h.n_qubits(),
                    limit: DENSE_LIMIT,
                });
            }
            return Ok(CompiledFactor::General {
                generator: h.clone(),
                angle,
            });
        }
        let terms = hermitian_terms(h)?;
        let (diag, rest): (Vec<_>, Vec<_>) = terms.into_iter().partition(|(p, _)| p.is_diagonal());
        let phases = (!diag.is_empty()).then(|| {
            (0..1usize << h.n_qubits())
                .map(|b| {
                    let e: f64 = diag
                        .iter()
                        .map(|(p, c)| {
                            let sign = if ((b as u64) & p.z_mask()).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                            sign * c
                        })
                        .sum();
                    Complex64::from_polar(1.0, angle * e)
                })
                .collect()
        });
        Ok(CompiledFactor::Commuting {
            phases,
            rotations: rest.into_iter().map(|(p, c)| (p, c * angle)).collect(),
        })
    }

    fn apply(&self, amps: &mut [Complex64]) {
        match self {
            CompiledFactor::Commuting { phases, rotations } => {
                if let Some(ph) = phases {
                    amps.iter_mut().zip(ph).for_each(|(a, p)| *a *= p);
                }
                for (p, a) in rotations {
                    rotate(amps, p, *a);
                }
            }
            CompiledFactor::General { generator, angle } => taylor_evolve(generator, *angle, amps),
        }
    }
}

/// One layer `L * V * R` at a fixed step, where `V` is the sampled correction.
/// A plain formula has `L = S` and empty `R`; a split formula has `L = S^L`, `R = S^R`.
#[derive(Clone, Debug)]
pub struct CompiledLayer {
    n_qubits: usize,
    left: Vec<CompiledFactor>,
    right: Vec<CompiledFactor>,
}

fn compile(f: &ProductFormula, dt: f64) -> Result<Vec<CompiledFactor>> {
    // A state sees the rightmost factor first.
    f.merged()
        .factors()
        .iter()
        .rev()
        .map(|fac| CompiledFactor::new(&fac.generator, dt * fac.theta))
        .collect()
}

impl CompiledLayer {
    pub fn from_formula(f: &ProductFormula, dt: f64) -> Result<Self> {
        Ok(Self {
            n_qubits: f.n_qubits(),
            left: compile(f, dt)?,
            right: Vec::new(),
        })
    }

    pub fn from_split(split: &FormulaSplit, dt: f64) -> Result<Self> {
        Ok(Self {
            n_qubits: split.n_qubits(),
            left: compile(&split.left, dt)?,
            right: compile(&split.right, dt)?,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Apply one layer with an optional correction.
    pub fn apply(&self, s: &mut StateVector, correction: Option<&SampledCorrection>) -> Result<()> {
        s.check(self.n_qubits)?;
        for f in &self.right {
            f.apply(&mut s.amps);
        }
        if let Some(c) = correction {
            s.apply_correction(c)?;
        }
        for f in &self.left {
            f.apply(&mut s.amps);
        }
        Ok(())
    }
}

/// Apply `n_layers` steps of size `t_total / n_layers`. `corrections` is empty
/// (bare formula) or holds one correction per layer; mid-circuit corrections
/// require `split`.
pub fn run_layers(
    formula: &ProductFormula,
    split: Option<&FormulaSplit>,
    corrections: &[SampledCorrection],
    n_layers: usize,
    t_total: f64,
    s0: &StateVector,
) -> Result<StateVector> {
    if n_layers == 0 {
        return Err(Error::Config("at least one layer is required".into()));
    }
    if !corrections.is_empty() && corrections.len() != n_layers {
        return Err(Error::Config(format!(
            "{} corrections for {n_layers} layers",
            corrections.len()
        )));
    }
    let dt = t_total / n_layers as f64;
    let mid = corrections.iter().any(|c| c.mid_circuit);
    let layer = match (mid, split) {
        (true, Some(sp)) => CompiledLayer::from_split(sp, dt)?,
        (true, None) => return Err(Error::Config("mid-circuit corrections need a formula split".into())),
        (false, _) => CompiledLayer::from_formula(formula, dt)?,
    };
    let mut s = s0.clone();
    for l in 0..n_layers {
        layer.apply(&mut s, corrections.get(l))?;
    }
    Ok(s)
}

/// Samples reduced per chunk of this many, chunks added in index order.
pub const REDUCTION_CHUNK: usize = 64;

/// Mean of `n` states produced by `make(i)`, reduced in a fixed order so the
/// result does not depend on the thread count.
pub fn mean_state<F>(n: usize, make: F) -> Result<StateVector>
where
    F: Fn(usize) -> Result<StateVector> + Sync,
{
    if n == 0 {
        return Err(Error::Config("mean of zero samples".into()));
    }
    let chunks: Vec<Vec<Complex64>> = (0..n.div_ceil(REDUCTION_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc: Option<Vec<Complex64>> = None;
            for i in c * REDUCTION_CHUNK..((c + 1) * REDUCTION_CHUNK).min(n) {
                let s = make(i)?;
                match acc.as_mut() {
                    None => acc = Some(s.amps),
                    Some(a) => a.iter_mut().zip(&s.amps).for_each(|(x, y)| *x += y),
                }
            }
            Ok(acc.expect("chunk is nonempty"))
        })
        .collect::<Result<_>>()?;
    let mut total = chunks[0].clone();
    for c in &chunks[1..] {
        total.iter_mut().zip(c).for_each(|(x, y)| *x += y);
    }
    let inv = 1.0 / n as f64;
    total.iter_mut().for_each(|x| *x *= inv);
    StateVector::from_amplitudes(total)
}

/// `|| exp(i t H) s0 - mean(samples) ||_2`.
pub fn mean_state_error(h: &PauliSum, t: f64, samples: &[StateVector], s0: &StateVector) -> Result<f64> {
    let exact = exact_evolve(h, t, s0)?;
    let mean = mean_state(samples.len(), |i| Ok(samples[i].clone()))?;
    Ok(exact.distance(&mean))
}
