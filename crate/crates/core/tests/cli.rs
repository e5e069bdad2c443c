//! The `steer` binary end to end.

mod common;

use std::process::{Command, Output};

use common::*;
use steer::formulas::suzuki;
use steer::models::{tf_ising, LatticeSpec};
use steer::pauli::PauliSum;

fn steer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steer")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn derive_listing_matches_dense_series() {
    let out = steer(&["derive", "--model", "ising", "--rows", "1", "--cols", "3", "--formula", "suzuki2", "--seed", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<(usize, String, f64)> = text
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].parse().unwrap(), f[1].to_string(), f[2].parse().unwrap())
        })
        .collect();
    let mut sorted = lines.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    assert_eq!(lines, sorted);
    assert_eq!(lines.first().unwrap().0, 2);
    assert_eq!(lines.last().unwrap().0, 4);

    let model = tf_ising(LatticeSpec::line(3).unwrap(), 1.0, 1.0).unwrap();
    let f = suzuki(2, &model.partition).unwrap();
    let u = MatSeries::exp_i(&dense(&model.hamiltonian), 1.0, 5);
    let want = generator_series(&formula_series(&f, 5), &u, &MatSeries::identity(8, 5));
    for j in 0..=4 {
        let terms: Vec<(&str, f64)> = lines.iter().filter(|l| l.0 == j).map(|l| (l.1.as_str(), l.2)).collect();
        let got = if terms.is_empty() { PauliSum::zero(3) } else { PauliSum::from_labels(&terms).unwrap() };
        assert!(coeff_diff(&want.0[j], &got) < 1e-12, "power {j}");
    }
}

#[test]
fn commuting_model_prints_a_notice_only() {
    let out = steer(&["derive", "--model", "ising", "--cols", "4", "--h", "0", "--seed", "1"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("vanishes"));
}

#[test]
fn usage_errors_exit_with_two() {
    let bad_flag = steer(&["derive", "--model", "ising", "--cols", "3", "--seed", "1", "--frobnicate"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_flag.stderr).contains("Usage"));
    let no_seed = steer(&["derive", "--model", "ising", "--cols", "3"]);
    assert_eq!(no_seed.status.code(), Some(2));
    let no_config = steer(&["run", "--config", "/nonexistent/steer.toml"]);
    assert_eq!(no_config.status.code(), Some(2));
    let bad_formula = steer(&["depth", "--model", "ising", "--cols", "3", "--seed", "1", "--formula", "suzuki3"]);
    assert_eq!(bad_formula.status.code(), Some(2));
}

#[test]
fn run_writes_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.toml");
    std::fs::write(
        &cfg,
        "seed = 9\noutput = \"one.csv\"\n[model]\nkind = \"ising\"\ncols = 3\n[formula]\norder = 2\n\
         [sweep]\nmodes = [\"standard\"]\ntimes = [0.2]\nlayers = [1]\nsamples = [20]\n",
    )
    .unwrap();
    let out = steer(&["run", "--config", cfg.to_str().unwrap(), "--threads", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("ising_1x3,3,standard,2,"));
}

fn depth_rows(args: &[&str]) -> (Vec<(String, usize, usize)>, String) {
    let out = steer(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let rows = text
        .lines()
        .skip(1)
        .take_while(|l| !l.contains(':'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    (rows, text)
}

#[test]
fn depth_table_reports_ratio_and_bound() {
    let (rows, text) = depth_rows(&["depth", "--model", "ising", "--cols", "16", "--seed", "1"]);
    assert_eq!(rows[0], ("trotter".to_string(), 3, 0));
    assert_eq!(rows.len(), 6);
    assert!(text.contains("worst-case single-rotation bound: 11"));
    assert!(text.contains("= 5.000"));
    let (s4, _) = depth_rows(&["depth", "--model", "heisenberg", "--cols", "6", "--seed", "2", "--formula", "suzuki4", "--mode", "standard"]);
    let (s2, text) = depth_rows(&["depth", "--model", "heisenberg", "--cols", "6", "--seed", "2", "--mode", "standard"]);
    assert_eq!(s4[0].1, 5 * s2[0].1);
    assert!(text.contains("= 5.000"));
}

#[test]
fn weight_one_corrections_add_no_depth() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.txt");
    // Error terms of X + Z are single-qubit, so corrections cost nothing.
    std::fs::write(&path, "XI 1.0 0\nIX 1.0 0\nZI 0.5 1\nIZ 0.5 1\n").unwrap();
    let (rows, _) = depth_rows(&["depth", "--model", "file", "--path", path.to_str().unwrap(), "--seed", "0"]);
    assert!(rows.iter().all(|r| r.2 == 0), "{rows:?}");
}
