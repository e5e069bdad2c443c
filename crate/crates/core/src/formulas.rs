//! Product formulas `prod_j exp(i t theta_j h_j)`, their symmetric splits, and a
//! two-qubit depth model.

use num_complex::Complex64;

use crate::dense::{self, Matrix};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// One exponential `exp(i t theta h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub generator: PauliSum,
    pub theta: f64,
}

impl Factor {
    pub fn new(generator: PauliSum, theta: f64) -> Self {
        Self { generator, theta }
    }
}

/// Ordered product of exponentials, written as a matrix product: the first
/// factor is leftmost, so it acts last on a state.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFormula {
    n_qubits: usize,
    order: usize,
    factors: Vec<Factor>,
    label: String,
}

impl ProductFormula {
    pub fn new(order: usize, factors: Vec<Factor>, label: impl Into<String>) -> Result<Self> {
        let first = factors.first().ok_or(Error::EmptyPartition)?;
        let n_qubits = first.generator.n_qubits();
        if let Some(bad) = factors.iter().find(|f| f.generator.n_qubits() != n_qubits) {
            return Err(Error::Dimension {
                left: n_qubits,
                right: bad.generator.n_qubits(),
            });
        }
        if order == 0 {
            return Err(Error::Config("formula order must be positive".into()));
        }
        Ok(Self {
            n_qubits,
            order,
            factors,
            label: label.into(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `sum_j theta_j h_j`; equals H for a consistent formula.
    pub fn total_generator(&self) -> PauliSum {
        self.factors
            .iter()
            .fold(PauliSum::zero(self.n_qubits), |acc, f| {
                acc.add_scaled(&f.generator, Complex64::new(f.theta, 0.0))
            })
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.factors.len();
        (0..n / 2).all(|i| {
            let (a, b) = (&self.factors[i], &self.factors[n - 1 - i]);
            a.generator == b.generator && (a.theta - b.theta).abs() <= 1e-14 * a.theta.abs().max(1.0)
        })
    }

    /// Merge neighbouring factors with identical generators by summing their angles.
    pub fn merged(&self) -> ProductFormula {
        let mut out: Vec<Factor> = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            match out.last_mut() {
                Some(last) if last.generator == f.generator => last.theta += f.theta,
                _ => out.push(f.clone()),
            }
        }
        Self {
            factors: out,
            ..self.clone()
        }
    }

    /// Dense `S(t)`; small registers only.
    pub fn matrix(&self, t: f64) -> Matrix {
        let dim = 1usize << self.n_qubits;
        self.factors.iter().fold(Matrix::identity(dim, dim), |acc, f| {
            acc * dense::exp_i(&f.generator, t * f.theta)
        })
    }
}

/// `S_k = S^L S^R`, with the error unitary inserted between the halves.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaSplit {
    pub left: ProductFormula,
    pub right: ProductFormula,
    order: usize,
}

impl FormulaSplit {
    pub fn new(left: ProductFormula, right: ProductFormula, order: usize) -> Result<Self> {
        if left.n_qubits != right.n_qubits {
            return Err(Error::Dimension {
                left: left.n_qubits,
                right: right.n_qubits,
            });
        }
        Ok(Self { left, right, order })
    }

    /// Order of the combined formula.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_qubits(&self) -> usize {
        self.left.n_qubits
    }

    pub fn combined(&self) -> ProductFormula {
        let mut factors = self.left.factors.clone();
        factors.extend(self.right.factors.iter().cloned());
        ProductFormula {
            n_qubits: self.left.n_qubits,
            order: self.order,
            factors,
            label: format!("{}|{}", self.left.label, self.right.label),
        }
    }
}

fn second_order_block(partition: &[PauliSum], scale: f64, out: &mut Vec<Factor>) {
    let l = partition.len();
    for h in &partition[..l - 1] {
        out.push(Factor::new(h.clone(), scale / 2.0));
    }
    out.push(Factor::new(partition[l - 1].clone(), scale));
    for h in partition[..l - 1].iter().rev() {
        out.push(Factor::new(h.clone(), scale / 2.0));
    }
}

/// Suzuki coefficient `u = 1 / (4 - 4^{1/3})` of the fourth-order recursion.
pub fn suzuki_u() -> f64 {
    1.0 / (4.0 - 4f64.powf(1.0 / 3.0))
}

/// Suzuki-Trotter formula of order 1, 2 or 4 over `partition`.
///
/// The fourth-order formula is five second-order blocks with scales
/// `u, u, 1 - 4u, u, u`; adjacent identical generators are left unmerged
/// (see [`ProductFormula::merged`]).
pub fn suzuki(order: usize, partition: &[PauliSum]) -> Result<ProductFormula> {
    let first = partition.first().ok_or(Error::EmptyPartition)?;
    let n = first.n_qubits();
    if let Some(bad) = partition.iter().find(|h| h.n_qubits() != n) {
        return Err(Error::Dimension {
            left: n,
            right: bad.n_qubits(),
        });
    }
    let mut factors = Vec::new();
    match order {
        1 => factors.extend(partition.iter().map(|h| Factor::new(h.clone(), 1.0))),
        2 => second_order_block(partition, 1.0, &mut factors),
        4 => {
            let u = suzuki_u();
            for s in [u, u, 1.0 - 4.0 * u, u, u] {
                second_order_block(partition, s, &mut factors);
            }
        }
        _ => {
            return Err(Error::Config(format!(
                "Suzuki order {order} not supported (use 1, 2 or 4)"
            )))
        }
    }
    ProductFormula::new(order, factors, format!("suzuki{order}"))
}

/// Split a palindromic formula into a left half and its mirror image.
pub fn split_symmetric(f: &ProductFormula) -> Result<FormulaSplit> {
    if !f.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    let n = f.factors.len();
    let mut left: Vec<Factor> = f.factors[..n / 2].to_vec();
    if n % 2 == 1 {
        let mid = &f.factors[n / 2];
        left.push(Factor::new(mid.generator.clone(), mid.theta / 2.0));
    }
    let right: Vec<Factor> = left.iter().rev().cloned().collect();
    let left = ProductFormula::new(1, left, format!("{}-left", f.label))?;
    let right = ProductFormula::new(1, right, format!("{}-right", f.label))?;
    FormulaSplit::new(left, right, f.order)
}

/// Two-qubit depth of `exp(i theta P)` by a CNOT ladder: `2 ceil(log2 w) - 1`, zero for `w <= 1`.
pub fn rotation_depth(weight: usize) -> usize {
    if weight <= 1 {
        0
    } else {
        2 * (usize::BITS - (weight - 1).leading_zeros()) as usize - 1
    }
}

/// Entangling depth of one commuting exponential: terms are packed first-fit
/// into qubit-disjoint layers (heaviest first) and each layer costs its
/// heaviest rotation.
pub fn generator_depth(h: &PauliSum) -> usize {
    let mut strings: Vec<PauliString> = h
        .terms()
        .iter()
        .map(|t| t.string)
        .filter(|s| s.weight() >= 2)
        .collect();
    strings.sort_by(|a, b| b.weight().cmp(&a.weight()).then(a.text_key().cmp(&b.text_key())));
    let mut layers: Vec<(u64, usize)> = Vec::new();
    for s in strings {
        let cost = rotation_depth(s.weight());
        match layers.iter_mut().find(|(used, _)| used & s.support() == 0) {
            Some((used, c)) => {
                *used |= s.support();
                *c = (*c).max(cost);
            }
            None => layers.push((s.support(), cost)),
        }
    }
    layers.iter().map(|(_, c)| c).sum()
}

/// Depth model for one layer `S(t) * corrections`. An estimate, not a compiled circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthEstimate {
    /// Total two-qubit depth of the layer.
    pub layer_depth: usize,
    /// Entangling depth per layer of the repeated, merged formula.
    pub formula_depth: usize,
    /// Depth of the worst extra rotation.
    pub correction_depth: usize,
    /// Per merged factor.
    pub per_factor: Vec<usize>,
}

pub fn depth_estimate(f: &ProductFormula, extra_paulis: &[PauliString]) -> DepthEstimate {
    let merged = f.merged();
    let per_factor: Vec<usize> = merged.factors.iter().map(|fac| generator_depth(&fac.generator)).collect();
    let mut formula_depth: usize = per_factor.iter().sum();
    // In a repeated layer the last factor merges with the next layer's first.
    let wraps = merged.factors.len() > 1
        && merged.factors.first().map(|x| &x.generator) == merged.factors.last().map(|x| &x.generator);
    if wraps {
        formula_depth -= per_factor[0];
    }
    let correction_depth = extra_paulis
        .iter()
        .map(|p| rotation_depth(p.weight()))
        .max()
        .unwrap_or(0);
    DepthEstimate {
        layer_depth: formula_depth + correction_depth,
        formula_depth,
        correction_depth,
        per_factor,
    }
}

/// Worst-case layer depth `s_k + 2 log2(n)` when the sampled Pauli may span all `n` qubits.
pub fn steer_depth_bound(formula_depth: usize, n_qubits: usize) -> usize {
    formula_depth + 2 * (n_qubits.max(1) as f64).log2().ceil() as usize
}
