//! Sparse algebra of n-qubit Pauli operators.
//!
//! A [`PauliString`] is stored in symplectic form as two bit masks: bit `q`
//! of `x` marks an X component on qubit `q`, bit `q` of `z` a Z component,
//! and both bits together a Y. A [`PauliSum`] is a sorted, duplicate-free
//! list of strings with complex coefficients. Sorting plus an in-order merge
//! keeps every arithmetic result independent of hashing or thread schedule.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are pruned after every arithmetic step.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// Largest register a single-word mask can describe.
pub const MAX_QUBITS: usize = 64;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `i^k` for `k` taken mod 4.
#[inline]
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k & 3 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli string without phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: u32,
    x: u64,
    z: u64,
}

#[inline]
fn mask_for(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCount(n))
    } else {
        Ok(())
    }
}

impl PauliString {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        check_qubits(n_qubits)?;
        let m = mask_for(n_qubits);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(Error::PauliParse(format!(
                "masks {x_mask:#x}/{z_mask:#x} exceed {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits: n_qubits as u32,
            x: x_mask,
            z: z_mask,
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, 0)
    }

    /// Build a string from `(qubit, letter)` pairs; later pairs overwrite earlier ones.
    pub fn from_ops(n_qubits: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        check_qubits(n_qubits)?;
        let (mut x, mut z) = (0u64, 0u64);
        for &(q, p) in ops {
            if q >= n_qubits {
                return Err(Error::PauliParse(format!("qubit {q} >= {n_qubits}")));
            }
            let (bx, bz) = p.bits();
            x = (x & !(1 << q)) | ((bx as u64) << q);
            z = (z & !(1 << q)) | ((bz as u64) << q);
        }
        Self::new(n_qubits, x, z)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Qubits acted on non-trivially.
    #[inline]
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    #[inline]
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Number of Y letters.
    #[inline]
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    /// Two strings commute iff their symplectic product is even.
    #[inline]
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1 == 0
    }

    /// Product without dimension checks: `self * other = phase * result`.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> (Complex64, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // With P = i^{|x&z|} X^x Z^z, moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let k = (self.x & self.z).count_ones() + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        (
            i_pow(k),
            PauliString {
                n_qubits: self.n_qubits,
                x,
                z,
            },
        )
    }

    /// Key ordering strings lexicographically by their text form (qubit 0 first, I < X < Y < Z).
    pub fn text_key(&self) -> u128 {
        let mut key = 0u128;
        for q in 0..self.n_qubits() {
            let code = match self.get(q) {
                Pauli::I => 0u128,
                Pauli::X => 1,
                Pauli::Y => 2,
                Pauli::Z => 3,
            };
            key |= code << (2 * (63 - q));
        }
        key
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_qubits(n).map_err(|_| Error::PauliParse(s.to_string()))?;
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in s.chars().enumerate() {
            let (bx, bz) = match c {
                'I' => Pauli::I.bits(),
                'X' => Pauli::X.bits(),
                'Y' => Pauli::Y.bits(),
                'Z' => Pauli::Z.bits(),
                _ => return Err(Error::PauliParse(s.to_string())),
            };
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Self::new(n, x, z)
    }
}

/// A Pauli string with a complex coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    pub string: PauliString,
    pub coeff: Complex64,
}

impl PauliTerm {
    pub fn new(string: PauliString, coeff: Complex64) -> Self {
        Self { string, coeff }
    }
}

/// Product of two Pauli strings, `p * q = phase * r`.
pub fn multiply(p: &PauliString, q: &PauliString) -> Result<PauliTerm> {
    if p.n_qubits != q.n_qubits {
        return Err(Error::Dimension {
            left: p.n_qubits(),
            right: q.n_qubits(),
        });
    }
    let (phase, r) = p.mul_unchecked(q);
    Ok(PauliTerm::new(r, phase))
}

/// Sparse operator `sum_r c_r P_r`.
#[derive(Clone, PartialEq, Debug)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

/// Sort by string and merge duplicates in their original sequence order.
fn normalize(mut terms: Vec<PauliTerm>) -> Vec<PauliTerm> {
    terms.sort_by(|a, b| a.string.cmp(&b.string));
    let mut out: Vec<PauliTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.string == t.string => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.coeff.norm() >= DROP_TOLERANCE);
    out
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Ok(Self::from_string(PauliString::identity(n_qubits)?, ONE))
    }

    pub fn from_string(string: PauliString, coeff: Complex64) -> Self {
        Self {
            n_qubits: string.n_qubits(),
            terms: normalize(vec![PauliTerm::new(string, coeff)]),
        }
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = PauliTerm>,
    {
        check_qubits(n_qubits)?;
        let terms: Vec<PauliTerm> = terms.into_iter().collect();
        if let Some(bad) = terms.iter().find(|t| t.string.n_qubits() != n_qubits) {
            return Err(Error::Dimension {
                left: n_qubits,
                right: bad.string.n_qubits(),
            });
        }
        Ok(Self {
            n_qubits,
            terms: normalize(terms),
        })
    }

    /// Real-coefficient constructor from text strings, e.g. `[("XZ", 0.5)]`.
    pub fn from_labels(labels: &[(&str, f64)]) -> Result<Self> {
        let first = labels
            .first()
            .ok_or_else(|| Error::PauliParse("empty label list".into()))?;
        let n = first.0.chars().count();
        let terms = labels
            .iter()
            .map(|(s, c)| Ok(PauliTerm::new(s.parse()?, Complex64::new(*c, 0.0))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, terms)
    }

    pub(crate) fn from_raw(n_qubits: usize, terms: Vec<PauliTerm>) -> Self {
        Self {
            n_qubits,
            terms: normalize(terms),
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, string: &PauliString) -> Complex64 {
        self.terms
            .binary_search_by(|t| t.string.cmp(string))
            .map(|i| self.terms[i].coeff)
            .unwrap_or_default()
    }

    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    /// Largest |Im c| over all terms; zero for a Hermitian operator.
    pub fn max_imag(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Real coefficients of a Hermitian sum, failing if any imaginary part exceeds `tol`.
    pub fn real_terms(&self, tol: f64) -> Result<Vec<(PauliString, f64)>> {
        let im = self.max_imag();
        if im > tol {
            return Err(Error::NonHermitian(im));
        }
        Ok(self
            .terms
            .iter()
            .filter(|t| t.coeff.re.abs() >= DROP_TOLERANCE)
            .map(|t| (t.string, t.coeff.re))
            .collect())
    }

    /// Drop imaginary parts (caller has verified Hermiticity).
    pub fn real_part(&self) -> PauliSum {
        Self::from_raw(
            self.n_qubits,
            self.terms
                .iter()
                .map(|t| PauliTerm::new(t.string, Complex64::new(t.coeff.re, 0.0)))
                .collect(),
        )
    }

    pub fn adjoint(&self) -> PauliSum {
        Self {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.string, t.coeff.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        Self::from_raw(
            self.n_qubits,
            self.terms
                .iter()
                .map(|t| PauliTerm::new(t.string, t.coeff * factor))
                .collect(),
        )
    }

    pub fn scale_real(&self, factor: f64) -> PauliSum {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &PauliSum, factor: Complex64) -> PauliSum {
        assert_eq!(self.n_qubits, other.n_qubits, "PauliSum dimension mismatch");
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.terms);
        out.extend(
            other
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.string, t.coeff * factor)),
        );
        Self::from_raw(self.n_qubits, out)
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        self.add_scaled(other, ONE)
    }

    pub fn sub(&self, other: &PauliSum) -> PauliSum {
        self.add_scaled(other, -ONE)
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        assert_eq!(self.n_qubits, other.n_qubits, "PauliSum dimension mismatch");
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                let (phase, s) = a.string.mul_unchecked(&b.string);
                out.push(PauliTerm::new(s, phase * a.coeff * b.coeff));
            }
        }
        Self::from_raw(self.n_qubits, out)
    }

    /// `[self, other]`; only anticommuting pairs contribute, each as `2 * a * b`.
    pub fn commutator(&self, other: &PauliSum) -> PauliSum {
        assert_eq!(self.n_qubits, other.n_qubits, "PauliSum dimension mismatch");
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                if !a.string.commutes_with(&b.string) {
                    let (phase, s) = a.string.mul_unchecked(&b.string);
                    out.push(PauliTerm::new(s, 2.0 * phase * a.coeff * b.coeff));
                }
            }
        }
        Self::from_raw(self.n_qubits, out)
    }

    /// True if every pair of strings commutes.
    pub fn is_mutually_commuting(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, a)| {
            self.terms[i + 1..]
                .iter()
                .all(|b| a.string.commutes_with(&b.string))
        })
    }

    /// Largest coefficient difference against `other`, term by term.
    pub fn max_diff(&self, other: &PauliSum) -> f64 {
        self.sub(other).max_abs()
    }
}

fn check_pair(a: &PauliSum, b: &PauliSum) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        Err(Error::Dimension {
            left: a.n_qubits,
            right: b.n_qubits,
        })
    } else {
        Ok(())
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    check_pair(a, b)?;
    Ok(a.commutator(b))
}

/// `Ad_a^n(b)`, the n-fold nested commutator `[a, [a, ... [a, b]]]`.
pub fn ad_power(a: &PauliSum, b: &PauliSum, n: usize) -> Result<PauliSum> {
    check_pair(a, b)?;
    let mut out = b.clone();
    for _ in 0..n {
        if out.is_empty() {
            break;
        }
        out = a.commutator(&out);
    }
    Ok(out)
}

pub fn one_norm(a: &PauliSum) -> f64 {
    a.one_norm()
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.coeff.im == 0.0 {
                write!(f, "{}*{}", t.coeff.re, t.string)?;
            } else {
                write!(f, "({})*{}", t.coeff, t.string)?;
            }
        }
        Ok(())
    }
}
