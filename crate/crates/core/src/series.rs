//! Truncated operator power series and the error Hamiltonians built from them.
//!
//! For a product formula `S(t) = prod_j exp(i t theta_j h_j)` approximating
//! `U(t) = exp(i t H)`, the exact error unitary `F = S^dagger U` is generated
//! by the time-dependent Hermitian operator
//!
//! ```text
//! A(t) = S^dagger H S - i (d/dt S^dagger) S
//!      = S^dagger H S - sum_k theta_k (E_l^dagger .. E_{k+1}^dagger) h_k (E_{k+1} .. E_l)
//! ```
//!
//! with `E_m = exp(i t theta_m h_m)`. Both pieces are sequences of
//! conjugations, so the whole series follows from the recurrence
//! `acc <- conj_k(acc) - theta_k h_k` starting at `acc = H`, where
//! `conj_k(X) = E_k^dagger X E_k = sum_n (-i t theta_k)^n / n! Ad_{h_k}^n(X)`.
//!
//! All series use absolute powers: `A(t) = sum_j t^j Omega_j`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::formulas::{FormulaSplit, ProductFormula};
use crate::pauli::{PauliString, PauliSum, PauliTerm};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance for certifying that a power vanishes or is Hermitian.
/// The absolute threshold at power `j` is this times `max(1, ||H||_1)^(j+1)`.
pub const CERTIFY_TOLERANCE: f64 = 1e-10;

/// `sum_{j=0}^{max_order} t^j C_j` with Pauli-sum coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSeries {
    n_qubits: usize,
    coeffs: Vec<PauliSum>,
}

impl OperatorSeries {
    pub fn zero(n_qubits: usize, max_order: usize) -> Self {
        Self {
            n_qubits,
            coeffs: vec![PauliSum::zero(n_qubits); max_order + 1],
        }
    }

    pub fn constant(c: &PauliSum, max_order: usize) -> Self {
        let mut s = Self::zero(c.n_qubits(), max_order);
        s.coeffs[0] = c.clone();
        s
    }

    pub fn identity(n_qubits: usize, max_order: usize) -> Result<Self> {
        Ok(Self::constant(&PauliSum::identity(n_qubits)?, max_order))
    }

    pub fn from_coeffs(coeffs: Vec<PauliSum>) -> Result<Self> {
        let n = coeffs
            .first()
            .map(|c| c.n_qubits())
            .ok_or_else(|| Error::Config("series needs at least one coefficient".into()))?;
        if let Some(bad) = coeffs.iter().find(|c| c.n_qubits() != n) {
            return Err(Error::Dimension {
                left: n,
                right: bad.n_qubits(),
            });
        }
        Ok(Self {
            n_qubits: n,
            coeffs,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^j` (zero beyond the truncation order).
    pub fn coeff(&self, j: usize) -> PauliSum {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| PauliSum::zero(self.n_qubits))
    }

    pub fn coeffs(&self) -> &[PauliSum] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_empty())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<PauliSum> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, PauliSum::zero(self.n_qubits));
        Self {
            n_qubits: self.n_qubits,
            coeffs,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&PauliSum, &PauliSum) -> PauliSum) -> Self {
        assert_eq!(self.n_qubits, other.n_qubits, "series dimension mismatch");
        let order = self.max_order().min(other.max_order());
        Self {
            n_qubits: self.n_qubits,
            coeffs: (0..=order)
                .map(|j| f(&self.coeffs[j], &other.coeffs[j]))
                .collect(),
        }
    }

    /// Sum, truncated at the smaller of the two orders.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, PauliSum::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, PauliSum::sub)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            coeffs: self.coeffs.iter().map(|c| c.scale(factor)).collect(),
        }
    }

    /// Coefficient-wise adjoint (t is real).
    pub fn adjoint(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            coeffs: self.coeffs.iter().map(PauliSum::adjoint).collect(),
        }
    }

    fn convolve(&self, other: &Self, op: impl Fn(&PauliSum, &PauliSum) -> PauliSum) -> Self {
        assert_eq!(self.n_qubits, other.n_qubits, "series dimension mismatch");
        let order = self.max_order().min(other.max_order());
        let coeffs = (0..=order)
            .map(|p| {
                let mut acc: Vec<PauliTerm> = Vec::new();
                for i in 0..=p {
                    let (a, b) = (&self.coeffs[i], &other.coeffs[p - i]);
                    if a.is_empty() || b.is_empty() {
                        continue;
                    }
                    acc.extend_from_slice(op(a, b).terms());
                }
                PauliSum::from_raw(self.n_qubits, acc)
            })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            coeffs,
        }
    }

    /// Operator product, discarding powers above the smaller truncation order.
    pub fn mul(&self, other: &Self) -> Self {
        self.convolve(other, PauliSum::mul)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.convolve(other, PauliSum::commutator)
    }

    /// `int_0^t`, raising the truncation order by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(PauliSum::zero(self.n_qubits));
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale_real(1.0 / (j as f64 + 1.0)));
        }
        Self {
            n_qubits: self.n_qubits,
            coeffs,
        }
    }

    /// `d/dt`, lowering the truncation order by one (a constant stays order 0).
    pub fn differentiate(&self) -> Self {
        let coeffs: Vec<PauliSum> = if self.coeffs.len() == 1 {
            vec![PauliSum::zero(self.n_qubits)]
        } else {
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| c.scale_real(j as f64 + 1.0))
                .collect()
        };
        Self {
            n_qubits: self.n_qubits,
            coeffs,
        }
    }

    /// Series of `X(-t)`.
    pub fn reflect(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| if j % 2 == 1 { c.scale_real(-1.0) } else { c.clone() })
                .collect(),
        }
    }

    /// Evaluate at a numeric `t` as a single Pauli sum.
    pub fn evaluate(&self, t: f64) -> PauliSum {
        let mut acc: Vec<PauliTerm> = Vec::new();
        let mut tp = 1.0;
        for c in &self.coeffs {
            acc.extend(c.terms().iter().map(|x| PauliTerm::new(x.string, x.coeff * tp)));
            tp *= t;
        }
        PauliSum::from_raw(self.n_qubits, acc)
    }

    /// Largest coefficient difference over common powers.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let order = self.max_order().max(other.max_order());
        (0..=order)
            .map(|j| self.coeff(j).max_diff(&other.coeff(j)))
            .fold(0.0, f64::max)
    }
}

/// Conjugate every coefficient of `x` by `exp(-i t theta h)` on the left and
/// `exp(i t theta h)` on the right, truncating at `order`.
pub(crate) fn conjugate(h: &PauliSum, theta: f64, x: &OperatorSeries, order: usize) -> OperatorSeries {
    let n = x.n_qubits;
    let mut buckets: Vec<Vec<PauliTerm>> = vec![Vec::new(); order + 1];
    let step = Complex64::new(0.0, -theta);
    for j in 0..=x.max_order().min(order) {
        let mut ad = x.coeffs[j].clone();
        let mut factor = ONE;
        for m in 0..=(order - j) {
            if ad.is_empty() {
                break;
            }
            buckets[j + m].extend(ad.terms().iter().map(|t| PauliTerm::new(t.string, t.coeff * factor)));
            if j + m == order || theta == 0.0 {
                break;
            }
            ad = h.commutator(&ad);
            factor *= step / (m as f64 + 1.0);
        }
    }
    OperatorSeries {
        n_qubits: n,
        coeffs: buckets.into_iter().map(|b| PauliSum::from_raw(n, b)).collect(),
    }
}

/// Series of `exp(-i t theta h) X(t) exp(i t theta h)` truncated at `order`.
pub fn conjugate_series(h: &PauliSum, theta: f64, x: &OperatorSeries, order: usize) -> Result<OperatorSeries> {
    if h.n_qubits() != x.n_qubits {
        return Err(Error::Dimension {
            left: h.n_qubits(),
            right: x.n_qubits,
        });
    }
    Ok(conjugate(h, theta, x, order))
}

/// `exp(-t^p Omega) X exp(t^p Omega)` for a (generally anti-Hermitian) `omega`.
fn conjugate_at_power(omega: &PauliSum, power: usize, x: &OperatorSeries, order: usize) -> OperatorSeries {
    let n = x.n_qubits;
    let mut buckets: Vec<Vec<PauliTerm>> = vec![Vec::new(); order + 1];
    for j in 0..=x.max_order().min(order) {
        let mut ad = x.coeffs[j].clone();
        let mut factor = ONE;
        let mut m = 0usize;
        while j + m * power <= order && !ad.is_empty() {
            buckets[j + m * power].extend(ad.terms().iter().map(|t| PauliTerm::new(t.string, t.coeff * factor)));
            m += 1;
            ad = omega.commutator(&ad);
            factor *= -1.0 / m as f64;
        }
    }
    OperatorSeries {
        n_qubits: n,
        coeffs: buckets.into_iter().map(|b| PauliSum::from_raw(n, b)).collect(),
    }
}

/// Time-ordered exponential `F` with `dF/dt = i A(t) F`, `F(0) = 1`.
pub fn time_ordered_exp(a: &OperatorSeries) -> Result<OperatorSeries> {
    let order = a.max_order();
    let mut f = vec![PauliSum::identity(a.n_qubits)?];
    for p in 1..=order {
        let mut acc: Vec<PauliTerm> = Vec::new();
        for j in 0..p {
            let (aj, fq) = (&a.coeffs[j], &f[p - 1 - j]);
            if aj.is_empty() || fq.is_empty() {
                continue;
            }
            acc.extend_from_slice(aj.mul(fq).terms());
        }
        f.push(PauliSum::from_raw(a.n_qubits, acc).scale(I / p as f64));
    }
    OperatorSeries::from_coeffs(f)
}

/// Certified series of an error generator with vanishing powers below `k`.
#[derive(Clone, Debug)]
pub struct ErrorSeries {
    k: usize,
    omegas: OperatorSeries,
    terms: Vec<Vec<(PauliString, f64)>>,
    lambdas: Vec<f64>,
}

fn power_tolerance(scale: f64, j: usize) -> f64 {
    CERTIFY_TOLERANCE * scale.max(1.0).powi(j as i32 + 1)
}

impl ErrorSeries {
    /// Certify `raw` as a Hermitian series whose powers below `k` vanish.
    pub fn certify(raw: &OperatorSeries, k: usize, scale: f64) -> Result<Self> {
        for j in 0..k.min(raw.max_order() + 1) {
            let norm = raw.coeffs[j].one_norm();
            if norm > power_tolerance(scale, j) {
                return Err(Error::NonVanishingLowOrder { power: j, norm });
            }
        }
        let n = raw.n_qubits;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        let mut terms = Vec::with_capacity(raw.coeffs.len());
        let mut lambdas = Vec::with_capacity(raw.coeffs.len());
        for (j, c) in raw.coeffs.iter().enumerate() {
            if j < k {
                coeffs.push(PauliSum::zero(n));
                terms.push(Vec::new());
                lambdas.push(0.0);
                continue;
            }
            let mut real = c.real_terms(power_tolerance(scale, j))?;
            real.sort_by_key(|(s, _)| s.text_key());
            lambdas.push(real.iter().map(|(_, a)| a.abs()).sum());
            coeffs.push(c.real_part());
            terms.push(real);
        }
        Ok(Self {
            k,
            omegas: OperatorSeries { n_qubits: n, coeffs },
            terms,
            lambdas,
        })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn max_order(&self) -> usize {
        self.omegas.max_order()
    }

    pub fn n_qubits(&self) -> usize {
        self.omegas.n_qubits
    }

    pub fn omegas(&self) -> &OperatorSeries {
        &self.omegas
    }

    pub fn omega(&self, j: usize) -> PauliSum {
        self.omegas.coeff(j)
    }

    /// `(P_r, alpha_jr)` pairs of power `j`, in text order of the strings.
    pub fn terms(&self, j: usize) -> &[(PauliString, f64)] {
        self.terms.get(j).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `lambda_j = sum_r |alpha_jr|`.
    pub fn lambda(&self, j: usize) -> f64 {
        self.lambdas.get(j).copied().unwrap_or(0.0)
    }

    /// `max_j lambda_j`.
    pub fn lambda_tilde(&self) -> f64 {
        self.lambdas.iter().copied().fold(0.0, f64::max)
    }

    /// Powers `k..=max_order`.
    pub fn powers(&self) -> std::ops::RangeInclusive<usize> {
        self.k..=self.max_order()
    }

    /// Powers carrying at least one term.
    pub fn nonzero_powers(&self) -> Vec<usize> {
        self.powers().filter(|&j| !self.terms[j].is_empty()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Vec::is_empty)
    }

    /// Distinct Pauli strings appearing at any power.
    pub fn paulis(&self) -> Vec<PauliString> {
        let mut v: Vec<PauliString> = self.terms.iter().flatten().map(|(s, _)| *s).collect();
        v.sort_by_key(|s| s.text_key());
        v.dedup();
        v
    }

    /// `<power> <pauli-string> <coefficient>` lines, power ascending then string order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for j in self.powers() {
            for (s, a) in &self.terms[j] {
                out.push_str(&format!("{j} {s} {a:.16e}\n"));
            }
        }
        out
    }
}

/// Error Hamiltonian `A_k(t)` of `formula` relative to `exp(i t H)`, up to `t^max_order`.
pub fn error_hamiltonian(formula: &ProductFormula, h: &PauliSum, max_order: usize) -> Result<ErrorSeries> {
    let raw = error_generator_series(formula, h, max_order)?;
    ErrorSeries::certify(&raw, formula.order(), h.one_norm())
}

/// Uncertified series of `A(t)` for any product formula.
pub fn error_generator_series(formula: &ProductFormula, h: &PauliSum, max_order: usize) -> Result<OperatorSeries> {
    if formula.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension {
            left: formula.n_qubits(),
            right: h.n_qubits(),
        });
    }
    let mut acc = OperatorSeries::constant(h, max_order);
    for f in formula.factors() {
        acc = conjugate(&f.generator, f.theta, &acc, max_order);
        acc.coeffs[0] = acc.coeffs[0].add_scaled(&f.generator, Complex64::new(-f.theta, 0.0));
    }
    Ok(acc)
}

/// `A^L(t) = -i (d/dt S_L^dagger) S_L + (1/2) S_L^dagger H S_L`.
fn left_generator(left: &ProductFormula, h: &PauliSum, max_order: usize) -> OperatorSeries {
    let mut acc = OperatorSeries::constant(&h.scale_real(0.5), max_order);
    for f in left.factors() {
        acc = conjugate(&f.generator, f.theta, &acc, max_order);
        acc.coeffs[0] = acc.coeffs[0].add_scaled(&f.generator, Complex64::new(-f.theta, 0.0));
    }
    acc
}

/// `A^R(-t) = -i S_R (d/dt S_R^dagger) + (1/2) S_R H S_R^dagger`, as a series in `t`.
fn right_generator(right: &ProductFormula, h: &PauliSum, max_order: usize) -> OperatorSeries {
    let mut acc = OperatorSeries::constant(&h.scale_real(0.5), max_order);
    for f in right.factors().iter().rev() {
        acc = conjugate(&f.generator, -f.theta, &acc, max_order);
        acc.coeffs[0] = acc.coeffs[0].add_scaled(&f.generator, Complex64::new(-f.theta, 0.0));
    }
    acc
}

/// Effective generator of the error unitary `F` in `U = S_L F S_R`:
/// the fixed point of `A = A^L(t) + F A^R(-t) F^dagger` with `F = T exp(i int A)`.
///
/// Starting from `A^L + A^R(-t)`, each pass fixes at least `k + 1` more powers, so
/// the iteration stops after at most `max_order / (k + 1) + 2` passes.
pub fn symmetric_effective_hamiltonian(split: &FormulaSplit, h: &PauliSum, max_order: usize) -> Result<ErrorSeries> {
    if split.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension {
            left: split.n_qubits(),
            right: h.n_qubits(),
        });
    }
    let left = left_generator(&split.left, h, max_order);
    let right = right_generator(&split.right, h, max_order);
    let scale = h.one_norm();
    let mut current = left.add(&right);
    let tol = power_tolerance(scale, max_order) * 1e-2;
    for _ in 0..max_order + 2 {
        let f = time_ordered_exp(&current)?;
        let next = left.add(&f.mul(&right).mul(&f.adjoint()));
        let diff = next.max_diff(&current);
        current = next;
        if diff <= tol {
            break;
        }
    }
    ErrorSeries::certify(&current, split.order(), scale)
}

/// Generalized Zassenhaus exponents: returns `(j, Omega_j')` for `j = k+1..=n_max`
/// with `exp(i t H) = S(t) prod_j exp(i t^j Omega_j') + O(t^{n_max+1})`, each
/// `Omega_j'` Hermitian.
///
/// The recursion runs on the anti-Hermitian generators `X = i A`: with
/// `F_k = (d/dt S^{-1}) S + S^{-1} (iH) S = i A(t)`,
/// `Omega_n = [t^{n-1}] F_{n-1} / n`, `G_n = F_{n-1} - n t^{n-1} Omega_n`,
/// `F_n = exp(-t^n Omega_n) G_n exp(t^n Omega_n)`.
pub fn zassenhaus(formula: &ProductFormula, h: &PauliSum, n_max: usize) -> Result<Vec<(usize, PauliSum)>> {
    let k = formula.order();
    if n_max < k + 1 {
        return Err(Error::Config(format!("n_max = {n_max} must be at least k + 1 = {}", k + 1)));
    }
    let order = n_max - 1;
    let raw = error_generator_series(formula, h, order)?;
    let scale = h.one_norm();
    ErrorSeries::certify(&raw, k, scale)?;
    let mut f = raw.scale(I);
    let mut out = Vec::with_capacity(n_max - k);
    for n in k + 1..=n_max {
        let omega = f.coeffs[n - 1].scale_real(1.0 / n as f64);
        let hermitian = omega.scale(-I);
        let im = hermitian.max_imag();
        if im > power_tolerance(scale, n) {
            return Err(Error::NonHermitian(im));
        }
        out.push((n, hermitian.real_part()));
        if n == n_max {
            break;
        }
        f.coeffs[n - 1] = f.coeffs[n - 1].add_scaled(&omega, Complex64::new(-(n as f64), 0.0));
        f = conjugate_at_power(&omega, n, &f, order);
    }
    Ok(out)
}

/// Pauli-resolved `int_0^t A(s) ds = sum_j t^{j+1}/(j+1) Omega_j`, in text order.
pub fn integrate_error(e: &ErrorSeries, t: f64) -> Vec<(PauliString, f64)> {
    let mut acc: Vec<(PauliString, f64)> = Vec::new();
    for j in e.powers() {
        let w = t.powi(j as i32 + 1) / (j as f64 + 1.0);
        acc.extend(e.terms(j).iter().map(|(s, a)| (*s, a * w)));
    }
    acc.sort_by_key(|(s, _)| s.text_key());
    let mut out: Vec<(PauliString, f64)> = Vec::with_capacity(acc.len());
    for (s, w) in acc {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 += w,
            _ => out.push((s, w)),
        }
    }
    out
}
