//! Benchmark Hamiltonians with Trotter partitions, initial states, and a
//! loader for Pauli-list files.
//!
//! Sites of a lattice are numbered row-major. Every partition element is a
//! set of mutually commuting Pauli strings, so each exponential in a product
//! formula can be applied as a sequence of rotations.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, PauliTerm};

/// Magnitude below which loaded coefficients are dropped.
pub const LOAD_CUTOFF: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Line,
    Grid,
}

/// Open-boundary rectangular lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
}

/// A nearest-neighbour bond `(a, b)` with `a < b` and its colour class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Bond {
    a: usize,
    b: usize,
    color: usize,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config(format!("lattice {rows}x{cols} has no sites")));
        }
        Ok(Self { rows, cols })
    }

    pub fn line(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    pub fn geometry(&self) -> Geometry {
        if self.rows == 1 || self.cols == 1 {
            Geometry::Line
        } else {
            Geometry::Grid
        }
    }

    pub fn site(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    /// Bonds with a proper edge colouring: on a line, colours 0/1 alternate
    /// along the chain; on a grid, horizontal bonds take 0/1 by column parity
    /// and vertical bonds 2/3 by row parity.
    fn bonds(&self) -> Vec<Bond> {
        let mut out = Vec::new();
        if self.geometry() == Geometry::Line {
            for i in 0..self.sites() - 1 {
                out.push(Bond {
                    a: i,
                    b: i + 1,
                    color: i % 2,
                });
            }
            return out;
        }
        for r in 0..self.rows {
            for c in 0..self.cols - 1 {
                out.push(Bond {
                    a: self.site(r, c),
                    b: self.site(r, c + 1),
                    color: c % 2,
                });
            }
        }
        for r in 0..self.rows - 1 {
            for c in 0..self.cols {
                out.push(Bond {
                    a: self.site(r, c),
                    b: self.site(r + 1, c),
                    color: 2 + r % 2,
                });
            }
        }
        out
    }

    fn n_colors(&self) -> usize {
        match self.geometry() {
            Geometry::Line => 2,
            Geometry::Grid => 4,
        }
    }
}

/// Hamiltonian with the partition used to build product formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub hamiltonian: PauliSum,
    pub partition: Vec<PauliSum>,
}

impl Model {
    fn from_groups(name: String, n_qubits: usize, groups: Vec<Vec<PauliTerm>>) -> Self {
        let partition: Vec<PauliSum> = groups
            .into_iter()
            .map(|g| PauliSum::from_raw(n_qubits, g))
            .filter(|g| !g.is_empty())
            .collect();
        let hamiltonian = PauliSum::from_raw(
            n_qubits,
            partition.iter().flat_map(|g| g.terms().iter().copied()).collect(),
        );
        Self {
            name,
            hamiltonian,
            partition,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }
}

fn term(n: usize, ops: &[(usize, Pauli)], coeff: f64) -> PauliTerm {
    let s = PauliString::from_ops(n, ops).expect("qubit index within register");
    PauliTerm::new(s, Complex64::new(coeff, 0.0))
}

/// `J sum_<ij> X_i X_j + h sum_i Z_i`, partitioned as `[fields, bonds by colour...]`.
pub fn tf_ising(lat: LatticeSpec, j: f64, h: f64) -> Result<Model> {
    let n = lat.sites();
    check_register(n)?;
    let mut groups = vec![Vec::new(); 1 + lat.n_colors()];
    for i in 0..n {
        groups[0].push(term(n, &[(i, Pauli::Z)], h));
    }
    for b in lat.bonds() {
        groups[1 + b.color].push(term(n, &[(b.a, Pauli::X), (b.b, Pauli::X)], j));
    }
    Ok(Model::from_groups(format!("ising_{}x{}", lat.rows, lat.cols), n, groups))
}

/// `sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}) + sum_i h_i Z_i` on a line,
/// partitioned as `[even bonds, odd bonds, fields]`.
pub fn heisenberg(lat: LatticeSpec, fields: &[f64]) -> Result<Model> {
    if lat.geometry() != Geometry::Line {
        return Err(Error::Config("the Heisenberg chain needs a 1D lattice".into()));
    }
    let n = lat.sites();
    check_register(n)?;
    if fields.len() != n {
        return Err(Error::Config(format!("{} fields for {n} sites", fields.len())));
    }
    let mut groups = vec![Vec::new(); 3];
    for b in lat.bonds() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            groups[b.color].push(term(n, &[(b.a, p), (b.b, p)], 1.0));
        }
    }
    for (i, &h) in fields.iter().enumerate() {
        groups[2].push(term(n, &[(i, Pauli::Z)], h));
    }
    Ok(Model::from_groups(format!("heisenberg_{n}"), n, groups))
}

/// Fields `h_i` uniform in `[-1, 1]` drawn from `seed`.
pub fn random_fields(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// [`heisenberg`] with seeded random fields.
pub fn heisenberg_random_field(lat: LatticeSpec, seed: u64) -> Result<Model> {
    heisenberg(lat, &random_fields(lat.sites(), seed))
}

/// Qubit of the fermionic mode at `site` with spin up (`false`) or down (`true`):
/// all spin-up modes come first, then all spin-down modes.
pub fn hubbard_mode(lat: LatticeSpec, site: usize, down: bool) -> usize {
    site + if down { lat.sites() } else { 0 }
}

/// Jordan-Wigner form of `c_a^dagger c_b + c_b^dagger c_a` for modes `a < b`:
/// `(X_a X_b + Y_a Y_b) Z_{a+1} .. Z_{b-1} / 2`.
fn hopping_terms(n: usize, a: usize, b: usize, scale: f64) -> [PauliTerm; 2] {
    let tail: Vec<(usize, Pauli)> = (a + 1..b).map(|q| (q, Pauli::Z)).collect();
    let with = |p: Pauli| {
        let mut ops = vec![(a, p), (b, p)];
        ops.extend_from_slice(&tail);
        term(n, &ops, scale / 2.0)
    };
    [with(Pauli::X), with(Pauli::Y)]
}

/// `-J sum_<ij>,s (c_is^dagger c_js + h.c.) + U sum_i n_i,up n_i,down` under
/// Jordan-Wigner, on `2 * sites` qubits ordered by [`hubbard_mode`].
///
/// The partition holds one hopping element per bond colour (both spins
/// together) followed by the on-site interaction. The interaction keeps its
/// identity component `U/4` per site.
pub fn fermi_hubbard(lat: LatticeSpec, j: f64, u: f64) -> Result<Model> {
    let sites = lat.sites();
    let n = 2 * sites;
    check_register(n)?;
    let mut groups = vec![Vec::new(); lat.n_colors() + 1];
    for b in lat.bonds() {
        for down in [false, true] {
            let (qa, qb) = (hubbard_mode(lat, b.a, down), hubbard_mode(lat, b.b, down));
            groups[b.color].extend(hopping_terms(n, qa, qb, -j));
        }
    }
    let last = lat.n_colors();
    for s in 0..sites {
        let (up, dn) = (hubbard_mode(lat, s, false), hubbard_mode(lat, s, true));
        let q = u / 4.0;
        groups[last].push(term(n, &[], q));
        groups[last].push(term(n, &[(up, Pauli::Z)], -q));
        groups[last].push(term(n, &[(dn, Pauli::Z)], -q));
        groups[last].push(term(n, &[(up, Pauli::Z), (dn, Pauli::Z)], q));
    }
    Ok(Model::from_groups(format!("hubbard_{}x{}", lat.rows, lat.cols), n, groups))
}

/// Checkerboard occupation (spin up where `row + col` is even, spin down
/// elsewhere) with the electron at site `(rows / 2, cols / 2)` removed.
/// Returns the basis index; an occupied mode is qubit state `|1>`.
pub fn neel_minus_center(lat: LatticeSpec) -> usize {
    let center = lat.site(lat.rows / 2, lat.cols / 2);
    let mut index = 0usize;
    for r in 0..lat.rows {
        for c in 0..lat.cols {
            let s = lat.site(r, c);
            if s != center {
                index |= 1 << hubbard_mode(lat, s, (r + c) % 2 == 1);
            }
        }
    }
    index
}

/// Uniformly random computational basis index on `n` qubits.
pub fn random_basis_index<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    rng.gen_range(0..1usize << n)
}

fn check_register(n: usize) -> Result<()> {
    if (1..=crate::pauli::MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCount(n))
    }
}

fn parse_coefficient(text: &str) -> Option<Complex64> {
    let s = text.trim_start_matches('(').trim_end_matches(')');
    if let Ok(x) = s.parse::<f64>() {
        return Some(Complex64::new(x, 0.0));
    }
    let body = s.strip_suffix('j').or_else(|| s.strip_suffix('i'))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().ok()?;
            let im = match &body[i..] {
                "+" => 1.0,
                "-" => -1.0,
                x => x.parse::<f64>().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => Some(Complex64::new(0.0, body.parse::<f64>().ok()?)),
    }
}

/// Parse a Pauli-list Hamiltonian: one `<pauli-string> <coefficient> [group]`
/// per line, `#` starts a comment. Coefficients may be real or `a+bj` with a
/// vanishing imaginary part. Terms below [`LOAD_CUTOFF`] in magnitude are
/// dropped. With a group column on every line, each group is one partition
/// element (ascending group id); without it every term is its own element.
pub fn parse_hamiltonian(name: &str, text: &str) -> Result<Model> {
    let mut n_qubits = None;
    let mut rows: Vec<(PauliString, f64, Option<i64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::HamiltonianParse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected `<pauli> <coefficient> [group]`, got {line:?}")));
        }
        let string: PauliString = fields[0]
            .parse()
            .map_err(|_| err(format!("invalid Pauli string {:?}", fields[0])))?;
        match n_qubits {
            None => n_qubits = Some(string.n_qubits()),
            Some(n) if n != string.n_qubits() => {
                return Err(err(format!("string has {} qubits, expected {n}", string.n_qubits())))
            }
            _ => {}
        }
        let c = parse_coefficient(fields[1]).ok_or_else(|| err(format!("invalid coefficient {:?}", fields[1])))?;
        if c.im.abs() > LOAD_CUTOFF {
            return Err(Error::NonHermitian(c.im.abs()));
        }
        let group = match fields.get(2) {
            Some(g) => Some(g.parse::<i64>().map_err(|_| err(format!("invalid group {g:?}")))?),
            None => None,
        };
        if c.re.abs() >= LOAD_CUTOFF {
            rows.push((string, c.re, group));
        }
    }
    let n = n_qubits.ok_or_else(|| Error::HamiltonianParse {
        line: 0,
        msg: "file contains no terms".into(),
    })?;
    let with_group = rows.iter().filter(|r| r.2.is_some()).count();
    let groups: Vec<Vec<PauliTerm>> = if with_group == 0 {
        rows.iter()
            .map(|(s, c, _)| vec![PauliTerm::new(*s, Complex64::new(*c, 0.0))])
            .collect()
    } else if with_group == rows.len() {
        let mut by_id: BTreeMap<i64, Vec<PauliTerm>> = BTreeMap::new();
        for (s, c, g) in &rows {
            by_id
                .entry(g.expect("all rows grouped"))
                .or_default()
                .push(PauliTerm::new(*s, Complex64::new(*c, 0.0)));
        }
        by_id.into_values().collect()
    } else {
        return Err(Error::HamiltonianParse {
            line: 0,
            msg: "group column must be present on all lines or none".into(),
        });
    };
    let model = Model::from_groups(name.to_string(), n, groups);
    if let Some(bad) = model.partition.iter().position(|g| !g.is_mutually_commuting()) {
        log::warn!("partition element {bad} of {name} is not mutually commuting");
    }
    Ok(model)
}

/// Read a Pauli-list Hamiltonian file (see [`parse_hamiltonian`]).
pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "file".into());
    parse_hamiltonian(&name, &text)
}
