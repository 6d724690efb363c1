//! Per-phase decode timing.
//!
//! Each trial draws one instance (a CRC-framed group, its codeword with
//! Byzantine positions corrupted, and a random read order) and hands the
//! same instance to every algorithm. An algorithm runs the full
//! progressive loop on it: interpolate and check the CRC, and on failure
//! move to the next stage. Time is split into locator search (`elp`), root
//! search (`chien`) and interpolation of the message (`inv_mat`).

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, RngCore, SeedableRng};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use prs_core::baseline::{judge_at_most, restart_locator};
use prs_core::codec::{crc_test, encode_group, frame_payload};
use prs_core::ird::{erasure_decode, judge, DecoderState, SyndromeFrame};
use prs_core::sim::{default_payload_len, trial_seed};
use prs_core::{CodeParams, Elem, GroupVector, Verdict};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown algorithm {0:?} (expected ird, restart or genie)")]
    UnknownAlgorithm(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Core(#[from] prs_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Incremental decoder.
    Ird,
    /// Everything recomputed at every stage.
    Restart,
    /// Told the Byzantine count; decodes once.
    Genie,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ird, Algorithm::Restart, Algorithm::Genie];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ird => "ird",
            Algorithm::Restart => "restart",
            Algorithm::Genie => "genie",
        }
    }

    pub fn decode(self, inst: &Instance) -> PhaseTimes {
        match self {
            Algorithm::Ird => decode_ird(inst),
            Algorithm::Restart => decode_restart(inst),
            Algorithm::Genie => decode_genie(inst),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| BenchError::UnknownAlgorithm(s.to_string()))
    }
}

/// One decoding problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub params: CodeParams,
    pub original: GroupVector,
    /// Received symbol at every position, in read order.
    pub reads: Vec<(usize, Elem)>,
    /// Byzantine nodes in the whole network.
    pub byzantine: usize,
}

impl Instance {
    pub fn generate(params: &CodeParams, p: f64, seed: u64) -> Result<Self, BenchError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut payload = vec![0u8; default_payload_len(params)? as usize];
        rng.fill_bytes(&mut payload);
        let original = frame_payload(&payload, params)?.swap_remove(0);
        let mut word = encode_group(&original, params).0;
        let n = params.n();
        let mut byzantine = 0;
        for s in word.iter_mut() {
            if rng.gen_bool(p) {
                *s ^= rng.gen_range(1..=n as Elem);
                byzantine += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let reads = order.into_iter().map(|j| (j, word[j])).collect();
        Ok(Self { params: params.clone(), original, reads, byzantine })
    }

    fn k(&self) -> usize {
        self.params.k_hat()
    }
}

/// Wall time of one decode, split by phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub elp: Duration,
    pub chien: Duration,
    pub inv_mat: Duration,
    pub total: Duration,
    pub stages: usize,
    pub success: bool,
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot += start.elapsed();
    out
}

/// Interpolate from `trusted` and check the CRC.
fn interpolate(inst: &Instance, trusted: &[(usize, Elem)], t: &mut PhaseTimes) -> bool {
    timed(&mut t.inv_mat, || {
        let u = erasure_decode(&inst.params, trusted).expect("trusted positions are distinct");
        crc_test(&u, &inst.params) && u == inst.original
    })
}

pub fn decode_ird(inst: &Instance) -> PhaseTimes {
    let start = Instant::now();
    let mut t = PhaseTimes::default();
    let k = inst.k();
    t.success = interpolate(inst, &inst.reads[..k], &mut t);
    if !t.success {
        let mut state = timed(&mut t.elp, || {
            let positions: Vec<usize> = inst.reads[..k].iter().map(|r| r.0).collect();
            let symbols: Vec<Elem> = inst.reads[..k].iter().map(|r| r.1).collect();
            let frame = SyndromeFrame::new(&inst.params, &positions).expect("valid read order");
            DecoderState::with_frame(frame, &symbols).expect("k_hat symbols")
        });
        while !t.success && k + 2 * (t.stages + 1) <= inst.reads.len() {
            t.stages += 1;
            let (a, b) = (inst.reads[k + 2 * t.stages - 2], inst.reads[k + 2 * t.stages - 1]);
            timed(&mut t.elp, || state.absorb_pair(a, b).expect("fresh positions"));
            if let Verdict::Success(trusted) = timed(&mut t.chien, || state.verdict()) {
                t.success = interpolate(inst, &trusted, &mut t);
            }
        }
    }
    t.total = start.elapsed();
    t
}

pub fn decode_restart(inst: &Instance) -> PhaseTimes {
    let start = Instant::now();
    let mut t = PhaseTimes::default();
    let k = inst.k();
    t.success = interpolate(inst, &inst.reads[..k], &mut t);
    while !t.success && k + 2 * (t.stages + 1) <= inst.reads.len() {
        t.stages += 1;
        let accessed = &inst.reads[..k + 2 * t.stages];
        let wb = timed(&mut t.elp, || restart_locator(&inst.params, accessed, t.stages).expect("within budget"));
        if let Verdict::Success(trusted) = timed(&mut t.chien, || judge(&inst.params, &wb.lambda, accessed, t.stages)) {
            t.success = interpolate(inst, &trusted, &mut t);
        }
    }
    t.total = start.elapsed();
    t
}

pub fn decode_genie(inst: &Instance) -> PhaseTimes {
    let start = Instant::now();
    let mut t = PhaseTimes::default();
    let k = inst.k();
    let v = inst.byzantine;
    if k + 2 * v <= inst.reads.len() {
        t.stages = v;
        let accessed = &inst.reads[..k + 2 * v];
        if v == 0 {
            t.success = interpolate(inst, accessed, &mut t);
        } else {
            let state = timed(&mut t.elp, || {
                let mut st = DecoderState::new(&inst.params, &accessed[..k]).expect("valid read order");
                for pair in accessed[k..].chunks_exact(2) {
                    st.absorb_pair(pair[0], pair[1]).expect("fresh positions");
                }
                st
            });
            let verdict = timed(&mut t.chien, || judge_at_most(&inst.params, state.lambda(), state.accessed(), v));
            if let Verdict::Success(trusted) = verdict {
                t.success = interpolate(inst, &trusted, &mut t);
            }
        }
    }
    t.total = start.elapsed();
    t
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub m: u32,
    pub k_hat: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Means are in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmStats {
    pub algorithm: Algorithm,
    pub trials: usize,
    pub elp: f64,
    pub chien: f64,
    pub inv_mat: f64,
    pub total: f64,
    pub median_total: f64,
    pub mean_stages: f64,
    pub success_rate: f64,
}

impl AlgorithmStats {
    fn from_times(algorithm: Algorithm, times: &[PhaseTimes]) -> Self {
        let t = times.len() as f64;
        let mean = |f: fn(&PhaseTimes) -> Duration| times.iter().map(|x| f(x).as_secs_f64()).sum::<f64>() / t;
        let mut totals: Vec<f64> = times.iter().map(|x| x.total.as_secs_f64()).collect();
        totals.sort_by(f64::total_cmp);
        let mid = totals.len() / 2;
        let median_total = if totals.len() % 2 == 1 { totals[mid] } else { (totals[mid - 1] + totals[mid]) / 2.0 };
        Self {
            algorithm,
            trials: times.len(),
            elp: mean(|x| x.elp),
            chien: mean(|x| x.chien),
            inv_mat: mean(|x| x.inv_mat),
            total: mean(|x| x.total),
            median_total,
            mean_stages: times.iter().map(|x| x.stages as f64).sum::<f64>() / t,
            success_rate: times.iter().filter(|x| x.success).count() as f64 / t,
        }
    }
}

/// Time every algorithm on `cfg.trials` shared instances, after one
/// discarded warm-up trial. Runs sequentially so timings do not compete.
pub fn run_bench(cfg: &BenchConfig, algorithms: &[Algorithm]) -> Result<Vec<AlgorithmStats>, BenchError> {
    if cfg.trials == 0 {
        return Err(BenchError::NoTrials);
    }
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(prs_core::Error::OutOfRange(format!("p = {} is not a probability", cfg.p)).into());
    }
    let params = CodeParams::with_width(cfg.m, cfg.k_hat)?;
    let warm = Instance::generate(&params, cfg.p, trial_seed(cfg.seed, u64::MAX))?;
    for &a in algorithms {
        std::hint::black_box(a.decode(&warm));
    }
    let mut times = vec![Vec::with_capacity(cfg.trials); algorithms.len()];
    for i in 0..cfg.trials as u64 {
        let inst = Instance::generate(&params, cfg.p, trial_seed(cfg.seed, i))?;
        for (slot, &a) in times.iter_mut().zip(algorithms) {
            slot.push(std::hint::black_box(a.decode(&inst)));
        }
    }
    Ok(algorithms.iter().zip(&times).map(|(&a, t)| AlgorithmStats::from_times(a, t)).collect())
}

pub const CSV_HEADER: &str =
    "algorithm,n,k_hat,m,p,trials,elp_time,chien_time,inv_mat_time,total_time,median_total_time,mean_stages,success_rate";

pub fn to_csv(cfg: &BenchConfig, stats: &[AlgorithmStats]) -> String {
    let n = (1usize << cfg.m) - 1;
    let mut out = format!("{CSV_HEADER}\n");
    for s in stats {
        let _ = writeln!(
            out,
            "{},{n},{},{},{},{},{:.9},{:.9},{:.9},{:.9},{:.9},{:.3},{:.4}",
            s.algorithm, cfg.k_hat, cfg.m, cfg.p, s.trials, s.elp, s.chien, s.inv_mat, s.total, s.median_total, s.mean_stages, s.success_rate
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!(matches!("bma".parse::<Algorithm>(), Err(BenchError::UnknownAlgorithm(_))));
    }

    #[test]
    fn all_algorithms_decode_the_same_instances() {
        let params = CodeParams::with_width(8, 60).unwrap();
        for seed in 0..20 {
            let inst = Instance::generate(&params, 0.05, seed).unwrap();
            let ird = decode_ird(&inst);
            let restart = decode_restart(&inst);
            let genie = decode_genie(&inst);
            assert_eq!(ird.success, restart.success);
            assert_eq!(ird.stages, restart.stages);
            assert!(genie.success, "seed {seed}");
            assert_eq!(genie.stages, inst.byzantine);
        }
    }

    #[test]
    fn stage_count_follows_error_count() {
        let params = CodeParams::with_width(7, 30).unwrap();
        for seed in 0..20 {
            let inst = Instance::generate(&params, 0.1, seed).unwrap();
            let bad: Vec<bool> = inst.reads.iter().map(|&(j, r)| r != encode_group(&inst.original, &params).0[j]).collect();
            let count = |len: usize| bad[..len].iter().filter(|&&b| b).count();
            let expected = (0..=(127 - 30) / 2).find(|&l| count(30 + 2 * l) <= l);
            let t = decode_ird(&inst);
            assert_eq!(t.success, expected.is_some());
            if let Some(l) = expected {
                assert_eq!(t.stages, l);
            }
        }
    }

    #[test]
    fn csv_has_one_row_per_algorithm() {
        let cfg = BenchConfig { m: 6, k_hat: 20, p: 0.05, trials: 3, seed: 1 };
        let stats = run_bench(&cfg, &Algorithm::ALL).unwrap();
        let csv = to_csv(&cfg, &stats);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("ird,63,20,6,0.05,3,"));
        assert!(stats.iter().all(|s| s.total >= s.elp));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = BenchConfig { m: 6, k_hat: 20, p: 0.05, trials: 0, seed: 1 };
        assert!(matches!(run_bench(&cfg, &[Algorithm::Ird]), Err(BenchError::NoTrials)));
        let cfg = BenchConfig { m: 6, k_hat: 70, p: 0.05, trials: 1, seed: 1 };
        assert!(run_bench(&cfg, &[Algorithm::Ird]).is_err());
    }
}
