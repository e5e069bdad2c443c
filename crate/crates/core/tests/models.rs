//! Model Hamiltonians against independent constructions.

mod common;

use common::*;
use steer::models::{
    fermi_hubbard, heisenberg, hubbard_mode, load_hamiltonian, neel_minus_center, parse_hamiltonian, tf_ising,
    LatticeSpec, Model,
};
use steer::pauli::PauliSum;
use steer::Error;

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// `c_mode` acting on occupation bitstrings, with the sign from occupied
/// modes of lower index.
fn annihilator(n_modes: usize, mode: usize) -> M {
    let dim = 1usize << n_modes;
    let mut m = M::zeros(dim, dim);
    for b in 0..dim {
        if b >> mode & 1 == 1 {
            let parity = (b & ((1 << mode) - 1)).count_ones();
            m[(b ^ 1 << mode, b)] = c(if parity % 2 == 0 { 1.0 } else { -1.0 });
        }
    }
    m
}

fn hubbard_oracle(lat: LatticeSpec, bonds: &[(usize, usize)], j: f64, u: f64) -> M {
    let n = 2 * lat.sites();
    let ops: Vec<M> = (0..n).map(|q| annihilator(n, q)).collect();
    let dim = 1usize << n;
    let mut h = M::zeros(dim, dim);
    for &(a, b) in bonds {
        for down in [false, true] {
            let (qa, qb) = (hubbard_mode(lat, a, down), hubbard_mode(lat, b, down));
            let hop = ops[qa].adjoint() * &ops[qb];
            h -= (&hop + hop.adjoint()) * c(j);
        }
    }
    for s in 0..lat.sites() {
        let nu = ops[hubbard_mode(lat, s, false)].adjoint() * &ops[hubbard_mode(lat, s, false)];
        let nd = ops[hubbard_mode(lat, s, true)].adjoint() * &ops[hubbard_mode(lat, s, true)];
        h += nu * nd * c(u);
    }
    h
}

fn check_partition(m: &Model) {
    assert!(m.hamiltonian.is_hermitian(1e-14), "{}", m.name);
    let rebuilt = m.partition.iter().skip(1).fold(m.partition[0].clone(), |a, b| a.add(b));
    assert_eq!(rebuilt.max_diff(&m.hamiltonian), 0.0, "{}", m.name);
    assert!(m.partition.iter().all(PauliSum::is_mutually_commuting), "{}", m.name);
}

#[test]
fn hubbard_matches_fock_space_construction() {
    let cases = [
        (LatticeSpec::line(3).unwrap(), vec![(0, 1), (1, 2)]),
        (LatticeSpec::new(2, 2).unwrap(), vec![(0, 1), (2, 3), (0, 2), (1, 3)]),
    ];
    for (lat, bonds) in cases {
        let m = fermi_hubbard(lat, 1.0, 4.0).unwrap();
        check_partition(&m);
        let d = frob(&(dense(&m.hamiltonian) - hubbard_oracle(lat, &bonds, 1.0, 4.0)));
        assert!(d < 1e-12, "{}: {d:e}", m.name);
    }
}

#[test]
fn spin_models_are_partitioned_consistently() {
    for m in [
        tf_ising(LatticeSpec::line(6).unwrap(), 1.0, 0.7).unwrap(),
        tf_ising(LatticeSpec::new(3, 3).unwrap(), 0.5, 1.0).unwrap(),
        heisenberg(LatticeSpec::line(5).unwrap(), &[0.1, -0.2, 0.3, -0.4, 0.5]).unwrap(),
    ] {
        check_partition(&m);
    }
    let ising = tf_ising(LatticeSpec::line(3).unwrap(), 1.0, 0.5).unwrap();
    let want = pauli("XXI") + pauli("IXX") + (pauli("ZII") + pauli("IZI") + pauli("IIZ")) * c(0.5);
    assert!(frob(&(dense(&ising.hamiltonian) - want)) < 1e-14);
    let grid = tf_ising(LatticeSpec::new(3, 3).unwrap(), 1.0, 1.0).unwrap();
    assert_eq!(grid.partition.len(), 5);
    assert_eq!(grid.hamiltonian.len(), 9 + 12);
}

#[test]
fn neel_state_has_one_hole_at_the_centre() {
    let lat = LatticeSpec::new(3, 3).unwrap();
    let index = neel_minus_center(lat);
    assert_eq!(index.count_ones(), 8);
    let centre = lat.site(1, 1);
    for down in [false, true] {
        assert_eq!(index >> hubbard_mode(lat, centre, down) & 1, 0);
    }
    for s in (0..9).filter(|&s| s != centre) {
        let (r, col) = (s / 3, s % 3);
        let down = (r + col) % 2 == 1;
        assert_eq!(index >> hubbard_mode(lat, s, down) & 1, 1);
        assert_eq!(index >> hubbard_mode(lat, s, !down) & 1, 0);
    }
}

#[test]
fn h4_fixture_loads_with_its_term_count_and_spectrum() {
    let m = load_hamiltonian(fixture("h4_sto3g.txt")).unwrap();
    assert_eq!(m.n_qubits(), 8);
    let non_identity = m.hamiltonian.terms().iter().filter(|t| t.string.weight() > 0).count();
    assert_eq!(non_identity, 184);
    check_partition(&m);
    // Full configuration interaction energy of the same molecule.
    let eig = dense(&m.hamiltonian).symmetric_eigenvalues();
    let lowest = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((lowest - -1.026_789_893_316_15).abs() < 1e-9, "{lowest}");
}

#[test]
fn hamiltonian_files_parse_groups_and_reject_garbage() {
    let text = "# two groups\nXX 0.5 0\nZI -1.0 1\nIZ 2e-1+0j 1\nYY 1e-9 0\n";
    let m = parse_hamiltonian("toy", text).unwrap();
    assert_eq!(m.partition.len(), 2);
    assert_eq!(m.hamiltonian.len(), 3);
    assert!(matches!(
        parse_hamiltonian("bad", "XX 1.0\nXQ 2.0\n"),
        Err(Error::HamiltonianParse { line: 2, .. })
    ));
    assert!(parse_hamiltonian("bad", "XX 1.0\nXXX 2.0\n").is_err());
    assert!(parse_hamiltonian("bad", "XX 1+1j\n").is_err());
}
