//! Storage-network simulator and Monte-Carlo harness.
//!
//! A trial encodes a random payload, marks each live node Byzantine with
//! probability `p_byz`, corrupts every symbol held by a Byzantine node, and
//! runs the collector against the result. Trials are seeded independently
//! from a master seed, run in parallel and are aggregated in index order,
//! so a summary depends only on its inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::AccessPmf;
use crate::codec::{encode_group, frame_payload, CodeParams};
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::retrieval::{progressive_retrieve, RetrievalReport};

/// How a Byzantine node's symbols are altered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corruption {
    /// XOR with an independent uniform nonzero element, so every corrupted
    /// symbol is actually wrong.
    #[default]
    XorNonzero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureModel {
    pub p_byz: f64,
    pub crash_set: Vec<usize>,
    pub corruption: Corruption,
    pub master_seed: u64,
}

impl FailureModel {
    pub fn new(p_byz: f64, master_seed: u64) -> Self {
        Self { p_byz, crash_set: Vec::new(), corruption: Corruption::XorNonzero, master_seed }
    }

    pub fn with_crashes(mut self, crash_set: Vec<usize>) -> Self {
        self.crash_set = crash_set;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_byz) {
            return Err(Error::OutOfRange(format!("p_byz = {} is not a probability", self.p_byz)));
        }
        let mut seen = vec![false; n];
        for &j in &self.crash_set {
            if j >= n {
                return Err(Error::OutOfRange(format!("crashed node {j} >= n = {n}")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::DuplicatePosition(j));
            }
        }
        Ok(())
    }

    fn live_nodes(&self, n: usize) -> Vec<usize> {
        let mut crashed = vec![false; n];
        for &j in &self.crash_set {
            crashed[j] = true;
        }
        (0..n).filter(|&j| !crashed[j]).collect()
    }
}

/// Seed of trial `index` under `master_seed`: the first word of the
/// ChaCha stream numbered `index`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Payload size used by default: as many whole bytes as one group holds.
pub fn default_payload_len(params: &CodeParams) -> Result<u64> {
    Ok((params.group_data_bits()? / 8).max(1) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub index: u64,
    pub seed: u64,
    pub byzantine: usize,
    /// Success whose payload differs from what was stored.
    pub silent_corruption: bool,
    pub report: RetrievalReport,
}

/// One trial with the default payload size.
pub fn run_trial(params: &CodeParams, model: &FailureModel, index: u64) -> Result<TrialOutcome> {
    run_trial_with_payload(params, model, index, default_payload_len(params)?)
}

pub fn run_trial_with_payload(
    params: &CodeParams,
    model: &FailureModel,
    index: u64,
    payload_len: u64,
) -> Result<TrialOutcome> {
    let n = params.n();
    model.validate(n)?;
    let seed = trial_seed(model.master_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut payload = vec![0u8; payload_len as usize];
    rng.fill_bytes(&mut payload);
    let groups = frame_payload(&payload, params)?;
    let mut shards: Vec<Vec<Elem>> = vec![Vec::with_capacity(groups.len()); n];
    for u in &groups {
        for (j, c) in encode_group(u, params).0.into_iter().enumerate() {
            shards[j].push(c);
        }
    }

    let live = model.live_nodes(n);
    let top = n as Elem;
    let mut byzantine = 0;
    for &j in &live {
        if rng.gen_bool(model.p_byz) {
            byzantine += 1;
            match model.corruption {
                Corruption::XorNonzero => shards[j].iter_mut().for_each(|s| *s ^= rng.gen_range(1..=top)),
            }
        }
    }

    let report = progressive_retrieve(|j| Some(shards[j].clone()), &live, params, payload_len, rng.next_u64())?;
    let silent_corruption = report.payload.as_ref().is_some_and(|p| *p != payload);
    Ok(TrialOutcome { index, seed, byzantine, silent_corruption, report })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub live_nodes: usize,
    /// Mean reads with failures charged every live node.
    pub mean_accesses: f64,
    /// Mean reads actually performed.
    pub mean_raw_accesses: f64,
    pub success_rate: f64,
    pub failures: usize,
    pub silent_corruptions: usize,
    /// Normalized read count -> number of trials (failures included).
    pub histogram: BTreeMap<usize, usize>,
    pub seeds: Vec<u64>,
}

impl MonteCarloSummary {
    pub fn from_outcomes(outcomes: &[TrialOutcome], live_nodes: usize) -> Self {
        let trials = outcomes.len();
        let mut histogram = BTreeMap::new();
        let (mut norm, mut raw, mut failures, mut silent) = (0usize, 0usize, 0usize, 0usize);
        for o in outcomes {
            let r = &o.report;
            *histogram.entry(r.normalized_accesses).or_insert(0) += 1;
            norm += r.normalized_accesses;
            raw += r.nodes_accessed;
            failures += usize::from(!r.is_success());
            silent += usize::from(o.silent_corruption);
        }
        let t = trials.max(1) as f64;
        Self {
            trials,
            live_nodes,
            mean_accesses: norm as f64 / t,
            mean_raw_accesses: raw as f64 / t,
            success_rate: (trials - failures) as f64 / t,
            failures,
            silent_corruptions: silent,
            histogram,
            seeds: outcomes.iter().map(|o| o.seed).collect(),
        }
    }

    /// L1 distance between the empirical outcome distribution and `pmf`.
    /// Successes are compared per read count and failures against the
    /// terminal mass.
    pub fn l1_distance(&self, pmf: &AccessPmf) -> f64 {
        let t = self.trials as f64;
        let mut empirical: BTreeMap<usize, f64> = self.histogram.iter().map(|(&a, &c)| (a, c as f64 / t)).collect();
        if self.failures > 0 {
            if let Some(q) = empirical.get_mut(&self.live_nodes) {
                *q -= self.failures as f64 / t;
            }
        }
        let keys: std::collections::BTreeSet<usize> = empirical.keys().chain(pmf.success.keys()).copied().collect();
        let success: f64 = keys
            .into_iter()
            .map(|a| (empirical.get(&a).copied().unwrap_or(0.0) - pmf.success.get(&a).copied().unwrap_or(0.0)).abs())
            .sum();
        success + (self.failures as f64 / t - pmf.terminal).abs()
    }

    /// `accesses,frequency` rows, ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("accesses,frequency\n");
        for (a, c) in &self.histogram {
            let _ = writeln!(out, "{a},{c}");
        }
        out
    }
}

/// Run `trials` independent trials in parallel with the default payload size.
pub fn run_monte_carlo(params: &CodeParams, model: &FailureModel, trials: usize) -> Result<MonteCarloSummary> {
    run_monte_carlo_with_payload(params, model, trials, default_payload_len(params)?)
}

pub fn run_monte_carlo_with_payload(
    params: &CodeParams,
    model: &FailureModel,
    trials: usize,
    payload_len: u64,
) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::OutOfRange("at least one trial is required".into()));
    }
    model.validate(params.n())?;
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial_with_payload(params, model, i, payload_len))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonteCarloSummary::from_outcomes(&outcomes, params.n() - model.crash_set.len()))
}
