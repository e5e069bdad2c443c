//! Statevector evolution and experiment plumbing against dense references.

mod common;

use common::*;
use num_complex::Complex64;
use steer::config::{ExperimentConfig, InitialState, Method};
use steer::experiments::{
    concentration_sweep, layers_to_target, run_sweep, run_to_file, write_csv, Experiment, CSV_HEADER,
};
use steer::formulas::{split_symmetric, suzuki};
use steer::models::{heisenberg, tf_ising, LatticeSpec};
use steer::sampler::{stream_rng, SamplerEnsemble, SteerMode};
use steer::series::{error_hamiltonian, symmetric_effective_hamiltonian};
use steer::simulator::{exact_evolve, mean_state, run_layers, StateVector};

fn vector(s: &StateVector) -> nalgebra::DVector<C> {
    nalgebra::DVector::from_column_slice(s.amplitudes())
}

fn rotations(corr: &[(steer::pauli::PauliString, f64)], dim: usize) -> M {
    corr.iter().fold(M::identity(dim, dim), |m, (p, a)| expm_i(&pauli(&p.to_string()), *a) * m)
}

#[test]
fn exact_evolution_matches_matrix_exponential() {
    let mut r = rng(4);
    let h = random_sum(5, 12, &mut r);
    let s0 = StateVector::basis(5, 19).unwrap();
    for t in [0.3, 2.0, 7.5] {
        let got = exact_evolve(&h, t, &s0).unwrap();
        let want = expm_i(&dense(&h), t) * vector(&s0);
        assert!((vector(&got) - want).norm() < 1e-12, "t={t}");
    }
}

#[test]
fn non_commuting_factor_uses_a_converged_series() {
    let mut r = rng(8);
    let h = random_sum(4, 6, &mut r);
    assert!(!h.is_mutually_commuting());
    let mut s = StateVector::basis(4, 3).unwrap();
    let want = expm_i(&dense(&h), 1.7) * vector(&s);
    s.apply_exp_factor(&h, 1.7).unwrap();
    assert!((vector(&s) - want).norm() < 1e-12);
}

#[test]
fn corrected_layers_match_dense_products() {
    let model = heisenberg(LatticeSpec::line(4).unwrap(), &[0.3, -0.1, 0.2, 0.5]).unwrap();
    let f = suzuki(2, &model.partition).unwrap();
    let split = split_symmetric(&f).unwrap();
    let e = error_hamiltonian(&f, &model.hamiltonian, 4).unwrap();
    let es = symmetric_effective_hamiltonian(&split, &model.hamiltonian, 4).unwrap();
    let s0 = StateVector::basis(4, 6).unwrap();
    let (t, layers) = (0.9, 3);
    let dt = t / layers as f64;
    for (mode, series) in [(SteerMode::GreedyQds, &e), (SteerMode::Symmetric, &es)] {
        let ens = SamplerEnsemble::build(series, mode).unwrap();
        let corr: Vec<_> = (0..layers as u64).map(|l| ens.sample(dt, &mut stream_rng(1, l, 0)).unwrap()).collect();
        let got = run_layers(&f, Some(&split), &corr, layers, t, &s0).unwrap();
        let want = corr.iter().fold(vector(&s0), |v, c| {
            let v_c = rotations(&c.rotations, 16);
            let layer = if c.mid_circuit {
                split.left.matrix(dt) * v_c * split.right.matrix(dt)
            } else {
                f.matrix(dt) * v_c
            };
            layer * v
        });
        assert!((vector(&got) - want).norm() < 1e-10, "{mode}");
    }
}

#[test]
fn mean_state_is_thread_count_independent() {
    let make = |i: usize| {
        let mut s = StateVector::basis(6, i % 64).unwrap();
        s.apply_pauli_rotation(&"XYZIXY".parse().unwrap(), 0.01 * i as f64)?;
        Ok(s)
    };
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let a = pool(1).install(|| mean_state(1000, make)).unwrap();
    let b = pool(4).install(|| mean_state(1000, make)).unwrap();
    assert_eq!(a.amplitudes(), b.amplitudes());
    let plain: Vec<Complex64> = (0..64)
        .map(|k| (0..1000).map(|i| make(i).unwrap().amplitudes()[k]).sum::<Complex64>() / 1000.0)
        .collect();
    let diff: f64 = plain.iter().zip(a.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-14);
}

const CONFIG: &str = r#"
seed = 3
output = "out/sweep.csv"
record_wall_time = false
[model]
kind = "ising"
cols = 4
h = 0.8
[formula]
order = 2
[sweep]
modes = ["trotter", "standard", "symmetric"]
time_grid = { start = 0.1, stop = 0.5, points = 3, spacing = "log" }
layers = [1, 2]
samples = [50]
initial_state = "random"
"#;

#[test]
fn sweeps_are_reproducible_and_ordered() {
    let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    let a = run_sweep(&cfg).unwrap();
    let b = run_sweep(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 3 * 3 * 2);
    assert!(a.iter().filter(|r| r.mode == Method::Trotter).all(|r| r.n_samples == 1));
    let mut out = Vec::new();
    write_csv(&a, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == CSV_HEADER.split(',').count()));
}

#[test]
fn config_round_trips_and_writes_its_output() {
    let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(&path, CONFIG).unwrap();
    let loaded = ExperimentConfig::load(&path).unwrap();
    assert_eq!(loaded.output, dir.path().join("out/sweep.csv"));
    let rows = run_to_file(&loaded).unwrap();
    let text = std::fs::read_to_string(&loaded.output).unwrap();
    assert_eq!(text.lines().count(), rows.len() + 1);
    assert!(ExperimentConfig::from_toml("seed = 1\n").is_err());
    assert!(ExperimentConfig::from_toml(&CONFIG.replace("samples = [50]", "samples = [0]")).is_err());
}

#[test]
fn target_search_returns_the_smallest_passing_layer_count() {
    let model = tf_ising(LatticeSpec::line(4).unwrap(), 1.0, 1.0).unwrap();
    let f = suzuki(2, &model.partition).unwrap();
    let exp = Experiment::new(model, f, StateVector::basis(4, 5).unwrap(), 0).unwrap();
    let (t, eps) = (2.0, 1e-3);
    let found = layers_to_target(&exp, Method::Trotter, t, 1, eps, 1000).unwrap();
    let scan = (1..=1000).find(|&n| exp.error(Method::Trotter, t, n, 1).unwrap() <= eps).unwrap();
    assert_eq!(found, scan);
    assert!(layers_to_target(&exp, Method::Trotter, t, 1, eps, found - 1).is_err());
}

#[test]
fn concentration_rows_carry_the_bound() {
    let mut cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    cfg.sweep.initial_state = InitialState::Index(2);
    let rows = concentration_sweep(&cfg, &[10, 40]).unwrap();
    assert!(rows.iter().all(|r| r.row.mode != Method::Trotter && r.lambda_tilde > 0.0 && r.bound > 0.0));
    let pair: Vec<_> = rows.iter().filter(|r| r.row.mode == Method::Steer(SteerMode::Standard)).take(2).collect();
    assert!((pair[0].bound / pair[1].bound - 2.0).abs() < 1e-12);
}
