//! Error campaigns: sweeps over time, layers and samples, target-error
//! searches, log-log slope fits, and CSV output.
//!
//! The error of a run is `|| exp(i t H)|psi> - mean_s X_s |psi> ||_2` for the
//! sample-mean of `n_samples` independently corrected circuits.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::time::Instant;

use crate::config::{ExperimentConfig, InitialState, Method};
use crate::error::{Error, Result};
use crate::formulas::{depth_estimate, rotation_depth, split_symmetric, FormulaSplit, ProductFormula};
use crate::models::{self, Model};
use crate::sampler::{stream_rng, SamplerEnsemble, SteerMode};
use crate::series::{error_hamiltonian, symmetric_effective_hamiltonian};
use crate::simulator::{exact_evolve, mean_state, CompiledLayer, StateVector};

/// CSV header of [`ResultRow`].
pub const CSV_HEADER: &str = "model,n_qubits,mode,k,t_total,n_layers,n_samples,seed,error,depth,wall_time_s";

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub model: String,
    pub n_qubits: usize,
    pub mode: Method,
    pub k: usize,
    pub t_total: f64,
    pub n_layers: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub error: f64,
    /// Two-qubit depth of the whole circuit (layers times layer depth).
    pub depth: usize,
    pub wall_time_s: f64,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.16e},{},{},{},{:.16e},{},{:.16e}",
            self.model,
            self.n_qubits,
            self.mode,
            self.k,
            self.t_total,
            self.n_layers,
            self.n_samples,
            self.seed,
            self.error,
            self.depth,
            self.wall_time_s
        )
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}

/// A model, its product formula, and the sampling tables of every prepared mode.
pub struct Experiment {
    model: Model,
    formula: ProductFormula,
    split: Option<FormulaSplit>,
    /// `None` marks a mode whose error series vanishes: the bare formula is exact.
    ensembles: BTreeMap<SteerMode, Option<SamplerEnsemble>>,
    initial: StateVector,
    seed: u64,
}

impl Experiment {
    pub fn new(model: Model, formula: ProductFormula, initial: StateVector, seed: u64) -> Result<Self> {
        if formula.n_qubits() != model.n_qubits() || initial.n_qubits() != model.n_qubits() {
            return Err(Error::Dimension {
                left: model.n_qubits(),
                right: formula.n_qubits().max(initial.n_qubits()),
            });
        }
        Ok(Self {
            model,
            formula,
            split: None,
            ensembles: BTreeMap::new(),
            initial,
            seed,
        })
    }

    /// Model, formula and initial state of a config, with its STEER modes prepared.
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let model = cfg.model.build(cfg.seed)?;
        let formula = cfg.formula.build(&model)?;
        let n = model.n_qubits();
        let index = match cfg.sweep.initial_state {
            InitialState::Zero => 0,
            InitialState::Index(i) => i,
            InitialState::Random => {
                // A stream no sampling run uses.
                let mut rng = stream_rng(cfg.seed, u64::MAX, u64::MAX);
                models::random_basis_index(n, &mut rng)
            }
            InitialState::Neel => match &cfg.model {
                crate::config::ModelSpec::Hubbard { rows, cols, .. } => {
                    models::neel_minus_center(models::LatticeSpec::new(*rows, *cols)?)
                }
                // Spin models: alternating up/down, odd qubits flipped.
                _ => (0..n).filter(|q| q % 2 == 1).fold(0, |acc, q| acc | 1 << q),
            },
        };
        let initial = StateVector::basis(n, index)?;
        let mut exp = Self::new(model, formula, initial, cfg.seed)?;
        exp.prepare(&cfg.sweep.modes)?;
        Ok(exp)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn formula(&self) -> &ProductFormula {
        &self.formula
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial
    }

    pub fn order(&self) -> usize {
        self.formula.order()
    }

    /// Derive error series and build sampling tables for every STEER method.
    pub fn prepare(&mut self, methods: &[Method]) -> Result<()> {
        let k = self.formula.order();
        let h = &self.model.hamiltonian;
        for m in methods {
            let Method::Steer(mode) = *m else { continue };
            if self.ensembles.contains_key(&mode) {
                continue;
            }
            let series = if mode == SteerMode::Symmetric {
                let split = match &self.split {
                    Some(s) => s.clone(),
                    None => split_symmetric(&self.formula)?,
                };
                let e = symmetric_effective_hamiltonian(&split, h, 2 * k)?;
                self.split = Some(split);
                e
            } else {
                error_hamiltonian(&self.formula, h, 2 * k)?
            };
            let ens = match SamplerEnsemble::build(&series, mode) {
                Ok(e) => Some(e),
                Err(Error::EmptySeries) => {
                    log::info!("{mode}: error series vanishes, using the bare formula");
                    None
                }
                Err(e) => return Err(e),
            };
            self.ensembles.insert(mode, ens);
        }
        Ok(())
    }

    pub fn ensemble(&self, mode: SteerMode) -> Option<&SamplerEnsemble> {
        self.ensembles.get(&mode).and_then(Option::as_ref)
    }

    pub fn exact(&self, t: f64) -> Result<StateVector> {
        exact_evolve(&self.model.hamiltonian, t, &self.initial)
    }

    fn tables(&self, mode: SteerMode) -> Result<&Option<SamplerEnsemble>> {
        self.ensembles
            .get(&mode)
            .ok_or_else(|| Error::Config(format!("mode {mode} was not prepared")))
    }

    /// Sample-mean final state of `n_samples` runs of `n_layers` layers.
    pub fn mean_final_state(&self, method: Method, t: f64, n_layers: usize, n_samples: usize) -> Result<StateVector> {
        if n_layers == 0 || n_samples == 0 {
            return Err(Error::Config("layers and samples must be positive".into()));
        }
        let dt = t / n_layers as f64;
        let ens = match method {
            Method::Trotter => None,
            Method::Steer(mode) => self.tables(mode)?.as_ref(),
        };
        let Some(ens) = ens else {
            let layer = CompiledLayer::from_formula(&self.formula, dt)?;
            let mut s = self.initial.clone();
            for _ in 0..n_layers {
                layer.apply(&mut s, None)?;
            }
            return Ok(s);
        };
        if dt > 1.0 {
            log::warn!("step {dt} exceeds 1; the sampling guarantees assume t <= 1");
        }
        let layer = match ens.mode() {
            SteerMode::Symmetric => CompiledLayer::from_split(self.split.as_ref().expect("prepared"), dt)?,
            _ => CompiledLayer::from_formula(&self.formula, dt)?,
        };
        mean_state(n_samples, |i| {
            let mut s = self.initial.clone();
            for l in 0..n_layers {
                let mut rng = stream_rng(self.seed, l as u64, i as u64);
                let c = ens.sample(dt, &mut rng)?;
                layer.apply(&mut s, Some(&c))?;
            }
            Ok(s)
        })
    }

    pub fn error_against(
        &self,
        exact: &StateVector,
        method: Method,
        t: f64,
        n_layers: usize,
        n_samples: usize,
    ) -> Result<f64> {
        Ok(exact.distance(&self.mean_final_state(method, t, n_layers, n_samples)?))
    }

    pub fn error(&self, method: Method, t: f64, n_layers: usize, n_samples: usize) -> Result<f64> {
        self.error_against(&self.exact(t)?, method, t, n_layers, n_samples)
    }

    /// Two-qubit depth of one layer. Single-draw modes cost their deepest
    /// possible rotation; greedy modes add the deepest rotation of every power.
    pub fn layer_depth(&self, method: Method) -> usize {
        let formula_depth = depth_estimate(&self.formula, &[]).formula_depth;
        let Method::Steer(mode) = method else {
            return formula_depth;
        };
        let Some(ens) = self.ensemble(mode) else {
            return formula_depth;
        };
        let per_power: Vec<usize> = ens
            .entries()
            .iter()
            .map(|e| e.terms.iter().map(|(p, _)| rotation_depth(p.weight())).max().unwrap_or(0))
            .collect();
        let extra = if mode.is_greedy() {
            per_power.iter().sum()
        } else {
            per_power.iter().copied().max().unwrap_or(0)
        };
        formula_depth + extra
    }
}

/// Run `f` on a pool of `threads` workers (the global pool when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn sweep_rows(exp: &Experiment, cfg: &ExperimentConfig, samples: &[usize]) -> Result<Vec<ResultRow>> {
    let times = cfg.sweep.time_values()?;
    let mut exact: HashMap<u64, StateVector> = HashMap::new();
    let mut rows = Vec::new();
    for &method in &cfg.sweep.modes {
        for &t in &times {
            if !exact.contains_key(&t.to_bits()) {
                exact.insert(t.to_bits(), exp.exact(t)?);
            }
            let target = &exact[&t.to_bits()];
            for &n_layers in &cfg.sweep.layers {
                let counts: &[usize] = if method == Method::Trotter { &[1] } else { samples };
                for &n_samples in counts {
                    let start = Instant::now();
                    let error = exp.error_against(target, method, t, n_layers, n_samples)?;
                    let wall = if cfg.record_wall_time {
                        start.elapsed().as_secs_f64()
                    } else {
                        0.0
                    };
                    rows.push(ResultRow {
                        model: exp.model.name.clone(),
                        n_qubits: exp.model.n_qubits(),
                        mode: method,
                        k: exp.order(),
                        t_total: t,
                        n_layers,
                        n_samples,
                        seed: cfg.seed,
                        error,
                        depth: n_layers * exp.layer_depth(method),
                        wall_time_s: wall,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Every grid point of the config, in the order modes, times, layers, samples.
/// The bare formula is deterministic and gets one row with `n_samples = 1`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    with_threads(cfg.threads, || {
        let exp = Experiment::from_config(cfg)?;
        sweep_rows(&exp, cfg, &cfg.sweep.samples)
    })?
}

/// [`run_sweep`] and write the CSV to the configured output path.
pub fn run_to_file(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let rows = run_sweep(cfg)?;
    if let Some(dir) = cfg.output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::fs::File::create(&cfg.output)?;
    write_csv(&rows, std::io::BufWriter::new(file))?;
    Ok(rows)
}

/// Smallest `N` in `[1, n_max]` with `error(N) <= epsilon`.
///
/// Doubles `N` until the target is met, then bisects the last bracket. Error is
/// assumed monotone in `N`; if an evaluated smaller `N` also passed, or one of
/// the two layer counts just below the answer passes on re-evaluation, the
/// smallest passing value wins.
pub fn layers_to_target(
    exp: &Experiment,
    method: Method,
    t: f64,
    n_samples: usize,
    epsilon: f64,
    n_max: usize,
) -> Result<usize> {
    if !(epsilon > 0.0) || n_max == 0 {
        return Err(Error::NotReached { n_max });
    }
    let exact = exp.exact(t)?;
    let mut cache: BTreeMap<usize, bool> = BTreeMap::new();
    let mut passes = |n: usize| -> Result<bool> {
        if let Some(&p) = cache.get(&n) {
            return Ok(p);
        }
        let e = exp.error_against(&exact, method, t, n, n_samples)?;
        log::debug!("{method} t={t} N={n}: error {e:.3e}");
        cache.insert(n, e <= epsilon);
        Ok(e <= epsilon)
    };
    let mut hi = 1;
    while !passes(hi)? {
        if hi >= n_max {
            return Err(Error::NotReached { n_max });
        }
        hi = (2 * hi).min(n_max);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 && lo >= 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut best = hi;
    for n in [hi.saturating_sub(2), hi.saturating_sub(1)] {
        if n >= 1 && n < best && passes(n)? {
            best = n;
        }
    }
    let smallest_cached = cache.iter().find(|(_, &p)| p).map(|(&n, _)| n).unwrap_or(best);
    Ok(best.min(smallest_cached))
}

/// Least-squares line `log e = a + b log t`; returns `(b, a)`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, e)| *t > 0.0 && *e > 0.0)
        .map(|(t, e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientPoints(1));
    }
    let b = sxy / sxx;
    Ok((b, my - b * mx))
}

/// Log-log slope of the points with `t` in `[lo, hi]`.
pub fn fit_slope(points: &[(f64, f64)], window: (f64, f64)) -> Result<f64> {
    let inside: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .collect();
    fit_line(&inside).map(|(b, _)| b)
}

/// Where the lines fitted to the lowest and highest thirds of the time grid meet.
pub fn crossover_thirds(points: &[(f64, f64)]) -> Result<f64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let third = pts.len() / 3;
    if third < 3 {
        return Err(Error::InsufficientPoints(third));
    }
    let (b1, a1) = fit_line(&pts[..third])?;
    let (b2, a2) = fit_line(&pts[pts.len() - third..])?;
    if b1 == b2 {
        return Err(Error::Config("parallel fits have no crossover".into()));
    }
    Ok(((a2 - a1) / (b1 - b2)).exp())
}

/// Time at which the measured error first rises to twice the small-t power
/// law fitted on the lowest third of the grid, interpolated in log-log space.
///
/// For an error made of a fluctuation part and a bias part this is where the
/// two become comparable. Unlike [`crossover_thirds`] it does not need the
/// top of the grid to be free of fluctuation, which fails at small `M`.
pub fn crossover(points: &[(f64, f64)]) -> Result<f64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let third = pts.len() / 3;
    if third < 3 {
        return Err(Error::InsufficientPoints(third));
    }
    let (b, a) = fit_line(&pts[..third])?;
    let excess = |(t, e): (f64, f64)| e.ln() - (a + b * t.ln());
    let target = std::f64::consts::LN_2;
    for w in pts.windows(2).skip(third - 1) {
        let (r0, r1) = (excess(w[0]), excess(w[1]));
        if r1 >= target {
            let (x0, x1) = (w[0].0.ln(), w[1].0.ln());
            let x = if r1 > r0 { x0 + (target - r0) * (x1 - x0) / (r1 - r0) } else { x1 };
            return Ok(x.exp());
        }
    }
    Err(Error::Config("error never departs from the small-t fit".into()))
}

/// Second term of the concentration bound,
/// `2 (k+1) lambda~ / (3M) (T/N)^{k+1} sqrt(M N ln 2^{n+1})` with unit prefactor.
pub fn concentration_bound(k: usize, lambda_tilde: f64, n_samples: usize, t_total: f64, n_layers: usize, n_qubits: usize) -> f64 {
    let m = n_samples as f64;
    let n = n_layers as f64;
    2.0 * (k as f64 + 1.0) * lambda_tilde / (3.0 * m)
        * (t_total / n).powi(k as i32 + 1)
        * (m * n * (n_qubits as f64 + 1.0) * std::f64::consts::LN_2).sqrt()
}

/// A sweep row with the measured `lambda~` and the bound overlay.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationRow {
    pub row: ResultRow,
    pub lambda_tilde: f64,
    pub bound: f64,
}

pub const CONCENTRATION_HEADER: &str =
    "model,n_qubits,mode,k,t_total,n_layers,n_samples,seed,error,depth,wall_time_s,lambda_tilde,bound";

pub fn write_concentration_csv<W: Write>(rows: &[ConcentrationRow], mut out: W) -> Result<()> {
    writeln!(out, "{CONCENTRATION_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{:.16e},{:.16e}", r.row.to_csv(), r.lambda_tilde, r.bound)?;
    }
    Ok(())
}

/// Error against sample count `M` for the config's STEER modes, times and layers.
pub fn concentration_sweep(cfg: &ExperimentConfig, sample_grid: &[usize]) -> Result<Vec<ConcentrationRow>> {
    cfg.validate()?;
    if sample_grid.is_empty() || sample_grid.contains(&0) {
        return Err(Error::Config("sample grid must hold positive counts".into()));
    }
    let mut steer_only = cfg.clone();
    steer_only.sweep.modes.retain(|m| *m != Method::Trotter);
    if steer_only.sweep.modes.is_empty() {
        return Err(Error::Config("concentration sweep needs a STEER mode".into()));
    }
    with_threads(cfg.threads, || {
        let exp = Experiment::from_config(&steer_only)?;
        let rows = sweep_rows(&exp, &steer_only, sample_grid)?;
        Ok(rows
            .into_iter()
            .map(|row| {
                let Method::Steer(mode) = row.mode else { unreachable!() };
                let lambda_tilde = exp.ensemble(mode).map_or(0.0, |e| e.lambda_tilde());
                let bound = concentration_bound(row.k, lambda_tilde, row.n_samples, row.t_total, row.n_layers, row.n_qubits);
                ConcentrationRow {
                    row,
                    lambda_tilde,
                    bound,
                }
            })
            .collect())
    })?
}
