//! Stochastic correction ensembles drawn from a certified error series.
//!
//! Every mode samples Pauli rotations whose expectation reproduces
//! `1 + i int_0^t A(s) ds` to the order covered by the series. Powers are
//! weighted by `w_j(t) = t^{j+1} / (j+1)` and normalized by `W(t)`, the sum of
//! the weights over the powers the mode draws from.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::series::ErrorSeries;

/// Sampling variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SteerMode {
    /// One rotation per layer over all powers `k..=2k`.
    Standard,
    /// One independent rotation per power.
    Greedy,
    /// One qubit-disjoint set of rotations per layer.
    Qds,
    /// One qubit-disjoint set per power.
    GreedyQds,
    /// One rotation between the halves of a palindromic formula.
    Symmetric,
}

impl SteerMode {
    pub const ALL: [SteerMode; 5] = [
        SteerMode::Standard,
        SteerMode::Greedy,
        SteerMode::Qds,
        SteerMode::GreedyQds,
        SteerMode::Symmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SteerMode::Standard => "standard",
            SteerMode::Greedy => "greedy",
            SteerMode::Qds => "qds",
            SteerMode::GreedyQds => "greedy+qds",
            SteerMode::Symmetric => "symmetric",
        }
    }

    pub fn uses_sets(self) -> bool {
        matches!(self, SteerMode::Qds | SteerMode::GreedyQds)
    }

    pub fn is_greedy(self) -> bool {
        matches!(self, SteerMode::Greedy | SteerMode::GreedyQds)
    }
}

impl fmt::Display for SteerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SteerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SteerMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown steer mode {s:?}")))
    }
}

/// Time weight `t^{j+1} / (j+1)` of power `j`.
pub fn time_weight(j: usize, t: f64) -> f64 {
    t.powi(j as i32 + 1) / (j as f64 + 1.0)
}

/// Index of the first cumulative value exceeding `u`; ties go to the lower index.
fn pick(cdf: &[f64], u: f64) -> usize {
    let total = *cdf.last().expect("nonempty distribution");
    let x = u * total;
    cdf.iter().position(|&c| x < c).unwrap_or(cdf.len() - 1)
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    weights
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect()
}

/// A group of terms of one power drawn together.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSet {
    /// Indices into the power's term list.
    pub members: Vec<usize>,
    /// `sum_{r in set} |alpha_r|`.
    pub norm: f64,
}

/// Terms and distributions of one power.
#[derive(Clone, Debug)]
pub struct PowerEntry {
    pub power: usize,
    pub terms: Vec<(PauliString, f64)>,
    pub lambda: f64,
    term_cdf: Vec<f64>,
    sets: Option<(Vec<TermSet>, Vec<f64>)>,
}

impl PowerEntry {
    fn new(power: usize, terms: Vec<(PauliString, f64)>, lambda: f64) -> Self {
        let term_cdf = cumulative(terms.iter().map(|(_, a)| a.abs()));
        Self {
            power,
            terms,
            lambda,
            term_cdf,
            sets: None,
        }
    }

    /// No terms: a draw of this power yields the identity.
    pub fn is_identity_only(&self) -> bool {
        self.terms.is_empty() || self.lambda == 0.0
    }

    /// `p_{r|j} = |alpha_jr| / lambda_j`.
    pub fn term_probabilities(&self) -> Vec<f64> {
        self.terms.iter().map(|(_, a)| a.abs() / self.lambda).collect()
    }

    pub fn sets(&self) -> Option<&[TermSet]> {
        self.sets.as_ref().map(|(s, _)| s.as_slice())
    }

    fn set_rotations(&self, set: &TermSet, scale: f64) -> Vec<(PauliString, f64)> {
        set.members
            .iter()
            .map(|&r| {
                let (p, a) = self.terms[r];
                (p, a * self.lambda / set.norm * scale)
            })
            .collect()
    }

    fn term_rotation(&self, r: usize, scale: f64) -> (PauliString, f64) {
        let (p, a) = self.terms[r];
        (p, a.signum() * self.lambda * scale)
    }
}

/// Which outcome was drawn within a power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Draw {
    /// No rotation (a power without terms).
    Identity { power: usize },
    Term { power: usize, index: usize },
    Set { power: usize, index: usize },
}

/// Rotations `exp(i angle P)` to apply, in order, as one correction.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCorrection {
    pub rotations: Vec<(PauliString, f64)>,
    pub draws: Vec<Draw>,
    /// Belongs between the left and right halves of a split formula.
    pub mid_circuit: bool,
}

impl SampledCorrection {
    pub fn identity() -> Self {
        Self {
            rotations: Vec::new(),
            draws: Vec::new(),
            mid_circuit: false,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rotations.iter().all(|(_, a)| *a == 0.0)
    }

    pub fn paulis(&self) -> Vec<PauliString> {
        self.rotations.iter().map(|(p, _)| *p).collect()
    }
}

/// Immutable sampling tables for one error series and mode.
#[derive(Clone, Debug)]
pub struct SamplerEnsemble {
    k: usize,
    mode: SteerMode,
    entries: Vec<PowerEntry>,
}

/// Qubit-disjoint sets by first-fit over terms sorted by descending `|weight|`
/// and then string order. Returns indices into `terms`.
pub fn qds_partition(terms: &[(PauliString, f64)]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..terms.len()).collect();
    order.sort_by(|&a, &b| {
        terms[b]
            .1
            .abs()
            .total_cmp(&terms[a].1.abs())
            .then(terms[a].0.text_key().cmp(&terms[b].0.text_key()))
    });
    let mut sets: Vec<(u64, Vec<usize>)> = Vec::new();
    for i in order {
        let support = terms[i].0.support();
        match sets.iter_mut().find(|(used, _)| used & support == 0) {
            Some((used, members)) => {
                *used |= support;
                members.push(i);
            }
            None => sets.push((support, vec![i])),
        }
    }
    sets.into_iter().map(|(_, m)| m).collect()
}

impl SamplerEnsemble {
    /// Build tables for `mode`. Set-based modes get the built-in qubit-disjoint
    /// partition of every power.
    ///
    /// Standard, greedy and set modes cover every power `k..=2k` present in the
    /// series, keeping powers without terms as identity outcomes. Symmetric mode
    /// covers only the powers with terms.
    pub fn build(e: &ErrorSeries, mode: SteerMode) -> Result<Self> {
        let mut ens = Self::build_tables(e, mode)?;
        if mode.uses_sets() {
            for entry in &mut ens.entries {
                let sets = qds_partition(&entry.terms);
                install_sets(entry, sets)?;
            }
        }
        Ok(ens)
    }

    /// Build tables with a caller-supplied partition for set-based modes: one
    /// list of sets per power in [`Self::powers`] order, each set a list of
    /// term indices. Sets must cover every term once and be mutually commuting.
    pub fn build_with_sets(e: &ErrorSeries, mode: SteerMode, sets: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut ens = Self::build_tables(e, mode)?;
        if sets.len() != ens.entries.len() {
            return Err(Error::Config(format!(
                "partition covers {} powers, ensemble has {}",
                sets.len(),
                ens.entries.len()
            )));
        }
        for (entry, s) in ens.entries.iter_mut().zip(sets) {
            install_sets(entry, s)?;
        }
        Ok(ens)
    }

    fn build_tables(e: &ErrorSeries, mode: SteerMode) -> Result<Self> {
        let k = e.order();
        let top = (2 * k).min(e.max_order());
        let entries: Vec<PowerEntry> = (k..=top)
            .map(|j| PowerEntry::new(j, e.terms(j).to_vec(), e.lambda(j)))
            .filter(|p| mode != SteerMode::Symmetric || !p.is_identity_only())
            .collect();
        if entries.iter().all(PowerEntry::is_identity_only) {
            return Err(Error::EmptySeries);
        }
        Ok(Self { k, mode, entries })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> SteerMode {
        self.mode
    }

    pub fn entries(&self) -> &[PowerEntry] {
        &self.entries
    }

    pub fn powers(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.power).collect()
    }

    /// `max_j lambda_j` over the covered powers.
    pub fn lambda_tilde(&self) -> f64 {
        self.entries.iter().map(|e| e.lambda).fold(0.0, f64::max)
    }

    /// `W(t)`, the sum of time weights over the covered powers.
    pub fn normalizer(&self, t: f64) -> f64 {
        self.entries.iter().map(|e| time_weight(e.power, t)).sum()
    }

    /// `(j, p_j(t))` for every covered power.
    pub fn power_probabilities(&self, t: f64) -> Vec<(usize, f64)> {
        let w = self.normalizer(t);
        self.entries
            .iter()
            .map(|e| (e.power, time_weight(e.power, t) / w))
            .collect()
    }

    /// Draw according to the ensemble's mode.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Result<SampledCorrection> {
        match self.mode {
            SteerMode::Standard => Ok(self.sample_standard(t, rng)),
            SteerMode::Greedy => Ok(self.sample_greedy(t, rng)),
            SteerMode::Qds => self.sample_qds(t, rng),
            SteerMode::GreedyQds => self.sample_greedy_qds(t, rng),
            SteerMode::Symmetric => Ok(self.sample_symmetric(t, rng)),
        }
    }

    fn draw_power<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> &PowerEntry {
        let cdf = cumulative(self.entries.iter().map(|e| time_weight(e.power, t)));
        &self.entries[pick(&cdf, rng.gen::<f64>())]
    }

    fn draw_term<R: Rng + ?Sized>(entry: &PowerEntry, scale: f64, rng: &mut R) -> (Draw, Option<(PauliString, f64)>) {
        if entry.is_identity_only() {
            // Consume the same number of draws as a regular outcome.
            let _ = rng.gen::<f64>();
            return (Draw::Identity { power: entry.power }, None);
        }
        let r = pick(&entry.term_cdf, rng.gen::<f64>());
        (
            Draw::Term {
                power: entry.power,
                index: r,
            },
            Some(entry.term_rotation(r, scale)),
        )
    }

    fn draw_set<R: Rng + ?Sized>(entry: &PowerEntry, scale: f64, rng: &mut R) -> Result<(Draw, Vec<(PauliString, f64)>)> {
        if entry.is_identity_only() {
            let _ = rng.gen::<f64>();
            return Ok((Draw::Identity { power: entry.power }, Vec::new()));
        }
        let (sets, cdf) = entry
            .sets
            .as_ref()
            .ok_or_else(|| Error::Config("ensemble was built without a set partition".into()))?;
        let s = pick(cdf, rng.gen::<f64>());
        Ok((
            Draw::Set {
                power: entry.power,
                index: s,
            },
            entry.set_rotations(&sets[s], scale),
        ))
    }

    /// One rotation: power `j ~ p_j(t)`, term `r ~ p_{r|j}`, angle `sign(alpha_jr) W(t) lambda_j`.
    pub fn sample_standard<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> SampledCorrection {
        let scale = self.normalizer(t);
        let entry = self.draw_power(t, rng);
        let (draw, rot) = Self::draw_term(entry, scale, rng);
        SampledCorrection {
            rotations: rot.into_iter().collect(),
            draws: vec![draw],
            mid_circuit: false,
        }
    }

    /// One rotation per power with terms, ascending in power, angle `w_j(t) sign(alpha_jr) lambda_j`.
    pub fn sample_greedy<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> SampledCorrection {
        let mut out = SampledCorrection::identity();
        for entry in self.entries.iter().filter(|e| !e.is_identity_only()) {
            let (draw, rot) = Self::draw_term(entry, time_weight(entry.power, t), rng);
            out.draws.push(draw);
            out.rotations.extend(rot);
        }
        out
    }

    /// Power `j ~ p_j(t)`, then a set with probability `s_set / lambda_j`; every
    /// member rotates by `alpha_r lambda_j / s_set * W(t)`.
    pub fn sample_qds<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Result<SampledCorrection> {
        let scale = self.normalizer(t);
        let entry = self.draw_power(t, rng);
        let (draw, rotations) = Self::draw_set(entry, scale, rng)?;
        Ok(SampledCorrection {
            rotations,
            draws: vec![draw],
            mid_circuit: false,
        })
    }

    /// One independent set per power with terms, member angles `alpha_r lambda_j / s_set * w_j(t)`.
    pub fn sample_greedy_qds<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Result<SampledCorrection> {
        let mut out = SampledCorrection::identity();
        for entry in self.entries.iter().filter(|e| !e.is_identity_only()) {
            let (draw, rot) = Self::draw_set(entry, time_weight(entry.power, t), rng)?;
            out.draws.push(draw);
            out.rotations.extend(rot);
        }
        Ok(out)
    }

    /// Standard draw over the nonzero powers, placed between the formula halves.
    pub fn sample_symmetric<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> SampledCorrection {
        let mut c = self.sample_standard(t, rng);
        c.mid_circuit = true;
        c
    }

    /// Every possible correction with its probability, for exhaustive
    /// expectations on small instances. Greedy modes enumerate the product of
    /// per-power outcomes.
    pub fn outcomes(&self, t: f64) -> Result<Vec<(f64, Vec<(PauliString, f64)>)>> {
        let per_power = |entry: &PowerEntry, scale: f64| -> Result<Vec<(f64, Vec<(PauliString, f64)>)>> {
            if entry.is_identity_only() {
                return Ok(vec![(1.0, Vec::new())]);
            }
            if self.mode.uses_sets() {
                let (sets, _) = entry
                    .sets
                    .as_ref()
                    .ok_or_else(|| Error::Config("ensemble was built without a set partition".into()))?;
                Ok(sets
                    .iter()
                    .map(|s| (s.norm / entry.lambda, entry.set_rotations(s, scale)))
                    .collect())
            } else {
                Ok((0..entry.terms.len())
                    .map(|r| (entry.terms[r].1.abs() / entry.lambda, vec![entry.term_rotation(r, scale)]))
                    .collect())
            }
        };
        if self.mode.is_greedy() {
            let mut acc: Vec<(f64, Vec<(PauliString, f64)>)> = vec![(1.0, Vec::new())];
            for entry in self.entries.iter().filter(|e| !e.is_identity_only()) {
                let options = per_power(entry, time_weight(entry.power, t))?;
                acc = acc
                    .iter()
                    .flat_map(|(p, rots)| {
                        options.iter().map(move |(q, more)| {
                            let mut r = rots.clone();
                            r.extend_from_slice(more);
                            (p * q, r)
                        })
                    })
                    .collect();
            }
            Ok(acc)
        } else {
            let scale = self.normalizer(t);
            let mut out = Vec::new();
            for (entry, (_, pj)) in self.entries.iter().zip(self.power_probabilities(t)) {
                for (q, rots) in per_power(entry, scale)? {
                    out.push((pj * q, rots));
                }
            }
            Ok(out)
        }
    }
}

fn install_sets(entry: &mut PowerEntry, sets: Vec<Vec<usize>>) -> Result<()> {
    let mut seen = vec![false; entry.terms.len()];
    for &i in sets.iter().flatten() {
        match seen.get_mut(i) {
            Some(s) if !*s => *s = true,
            _ => {
                return Err(Error::Config(format!(
                    "power {}: term index {i} missing or repeated in partition",
                    entry.power
                )))
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Config(format!("power {}: partition misses terms", entry.power)));
    }
    for set in &sets {
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                if !entry.terms[i].0.commutes_with(&entry.terms[j].0) {
                    return Err(Error::Config(format!(
                        "power {}: set members {} and {} do not commute",
                        entry.power, entry.terms[i].0, entry.terms[j].0
                    )));
                }
            }
        }
    }
    let sets: Vec<TermSet> = sets
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|members| {
            let norm = members.iter().map(|&r| entry.terms[r].1.abs()).sum();
            TermSet { members, norm }
        })
        .collect();
    let cdf = cumulative(sets.iter().map(|s| s.norm));
    entry.sets = Some((sets, cdf));
    Ok(())
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent stream for one `(layer, sample)` pair, fixed by the master seed
/// regardless of evaluation order.
pub fn stream_rng(master_seed: u64, layer: u64, sample: u64) -> ChaCha8Rng {
    let key = splitmix(splitmix(splitmix(master_seed) ^ layer) ^ sample.rotate_left(32));
    let mut seed = [0u8; 32];
    for (i, chunk) in seed.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&splitmix(key.wrapping_add(i as u64)).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
