//! The data collector: progressive retrieval across stages and groups.
//!
//! One random permutation of the live nodes fixes the access order. The
//! first `k_hat` nodes are read up front; whenever a group fails its CRC the
//! next two nodes in the order are read and that group's decoder moves to
//! the next stage. Shards are fetched whole and cached, so a node read for
//! one group costs nothing for the others. Groups are handled in index
//! order, which means the lowest-indexed failing group drives fetching.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::{CodeParams, GroupVector};
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::ird::{erasure_decode, DecoderState, Reject, SyndromeFrame, Verdict};

pub use crate::codec::{crc_test, unframe_payload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Fail,
}

/// What happened to one group at one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StageVerdict {
    /// Interpolated from a trusted set and ran the CRC.
    Decoded { crc_ok: bool },
    /// The decoder declined to name a trusted set.
    Rejected { reject: Reject },
    /// Not enough live nodes left for another stage.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub group: usize,
    pub stage: usize,
    /// Nodes read from storage for this step (empty when already cached).
    pub fetched: Vec<usize>,
    pub verdict: StageVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetrievalReport {
    pub outcome: Outcome,
    /// Nodes actually read.
    pub nodes_accessed: usize,
    /// Same as `nodes_accessed`, except that a failure counts every live
    /// node, which is how the closed-form analysis books it.
    pub normalized_accesses: usize,
    pub live_nodes: usize,
    /// Final stage reached by each group.
    pub stages: Vec<usize>,
    pub crc_checks: usize,
    pub trace: Vec<TraceEntry>,
    #[serde(skip)]
    pub payload: Option<Vec<u8>>,
}

impl RetrievalReport {
    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }

    /// Largest stage over all groups.
    pub fn max_stage(&self) -> usize {
        self.stages.iter().copied().max().unwrap_or(0)
    }
}

/// Fetch order and cache over the live nodes.
struct Collector<F> {
    fetch: F,
    order: Vec<usize>,
    next: usize,
    /// Successfully read nodes, in read order.
    accessed: Vec<usize>,
    cache: Vec<Option<Vec<Elem>>>,
    group_count: usize,
}

impl<F> Collector<F>
where
    F: FnMut(usize) -> Option<Vec<Elem>>,
{
    /// Read nodes until `count` are cached. Returns the newly read
    /// positions, or `None` when the live set runs out first.
    fn ensure(&mut self, count: usize) -> Result<Option<Vec<usize>>> {
        let mut fresh = Vec::new();
        while self.accessed.len() < count {
            let Some(&j) = self.order.get(self.next) else {
                return Ok(None);
            };
            self.next += 1;
            // A node that turns out to be down is skipped; it never counts.
            let Some(symbols) = (self.fetch)(j) else {
                continue;
            };
            if symbols.len() != self.group_count {
                return Err(Error::ShardFormat(format!(
                    "node {j} holds {} symbols, expected {}",
                    symbols.len(),
                    self.group_count
                )));
            }
            self.cache[j] = Some(symbols);
            self.accessed.push(j);
            fresh.push(j);
        }
        Ok(Some(fresh))
    }

    fn symbol(&self, j: usize, group: usize) -> Elem {
        self.cache[j].as_ref().expect("position was fetched")[group]
    }

    fn pairs(&self, group: usize, positions: &[usize]) -> Vec<(usize, Elem)> {
        positions.iter().map(|&j| (j, self.symbol(j, group))).collect()
    }

    /// Live nodes not yet tried.
    fn untried(&self) -> usize {
        self.order.len() - self.next
    }
}

/// Run the collector against storage.
///
/// `fetch(j)` returns node `j`'s symbols (one per group) or `None` if the
/// node turns out to be down. `live` lists the nodes believed up.
pub fn progressive_retrieve<F>(
    fetch: F,
    live: &[usize],
    params: &CodeParams,
    payload_len: u64,
    seed: u64,
) -> Result<RetrievalReport>
where
    F: FnMut(usize) -> Option<Vec<Elem>>,
{
    let k = params.k_hat();
    let n = params.n();
    if live.len() < k {
        return Err(Error::InsufficientLiveNodes { live: live.len(), needed: k });
    }
    let mut seen = vec![false; n];
    for &j in live {
        if j >= n {
            return Err(Error::OutOfRange(format!("live node {j} >= n = {n}")));
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::DuplicatePosition(j));
        }
    }
    let group_count = params.group_count(payload_len)?;
    let mut order = live.to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut col = Collector { fetch, order, next: 0, accessed: Vec::new(), cache: vec![None; n], group_count };
    let mut report = RetrievalReport {
        outcome: Outcome::Fail,
        nodes_accessed: 0,
        normalized_accesses: live.len(),
        live_nodes: live.len(),
        stages: vec![0; group_count],
        crc_checks: 0,
        trace: Vec::new(),
        payload: None,
    };

    let Some(first) = col.ensure(k)? else {
        report.nodes_accessed = col.accessed.len();
        return Ok(report);
    };
    let initial: Vec<usize> = col.accessed[..k].to_vec();
    let mut first_fetch = Some(first);
    let mut frame: Option<Arc<SyndromeFrame>> = None;
    let mut groups = Vec::with_capacity(group_count);

    for g in 0..group_count {
        let init_pairs = col.pairs(g, &initial);
        let u = erasure_decode(params, &init_pairs)?;
        report.crc_checks += 1;
        let ok = crc_test(&u, params);
        report.trace.push(TraceEntry {
            group: g,
            stage: 0,
            fetched: first_fetch.take().unwrap_or_default(),
            verdict: StageVerdict::Decoded { crc_ok: ok },
        });
        if ok {
            groups.push(u);
            continue;
        }

        let frame = match &frame {
            Some(f) => Arc::clone(f),
            None => frame.insert(SyndromeFrame::new(params, &initial)?).clone(),
        };
        let symbols: Vec<Elem> = init_pairs.iter().map(|&(_, r)| r).collect();
        let mut state = DecoderState::with_frame(frame, &symbols)?;
        match advance_group(&mut col, &mut state, g, params, &mut report)? {
            Some(u) => groups.push(u),
            None => {
                report.nodes_accessed = col.accessed.len();
                return Ok(report);
            }
        }
    }

    report.nodes_accessed = col.accessed.len();
    report.normalized_accesses = report.nodes_accessed;
    report.payload = Some(unframe_payload(&groups, params, payload_len)?);
    report.outcome = Outcome::Success;
    Ok(report)
}

/// Stages 1, 2, ... for one group until its CRC passes or nodes run out.
fn advance_group<F>(
    col: &mut Collector<F>,
    state: &mut DecoderState,
    g: usize,
    params: &CodeParams,
    report: &mut RetrievalReport,
) -> Result<Option<GroupVector>>
where
    F: FnMut(usize) -> Option<Vec<Elem>>,
{
    let k = params.k_hat();
    loop {
        let stage = state.ell() + 1;
        let need = k + 2 * stage;
        // A lone remaining node cannot raise the error budget, so stop
        // as soon as a full pair is out of reach.
        let reachable = col.accessed.len() >= need || col.accessed.len() + col.untried() >= need;
        let fetched = if reachable { col.ensure(need)? } else { None };
        let Some(fetched) = fetched else {
            report.stages[g] = stage - 1;
            report.trace.push(TraceEntry { group: g, stage, fetched: Vec::new(), verdict: StageVerdict::Exhausted });
            return Ok(None);
        };
        let (a, b) = (col.accessed[need - 2], col.accessed[need - 1]);
        let verdict = state.step((a, col.symbol(a, g)), (b, col.symbol(b, g)))?;
        report.stages[g] = stage;
        match verdict {
            Verdict::Success(trusted) => {
                let u = erasure_decode(params, &trusted)?;
                report.crc_checks += 1;
                let ok = crc_test(&u, params);
                report.trace.push(TraceEntry { group: g, stage, fetched, verdict: StageVerdict::Decoded { crc_ok: ok } });
                if ok {
                    return Ok(Some(u));
                }
            }
            Verdict::ContinueNeeded(reject) => {
                report.trace.push(TraceEntry { group: g, stage, fetched, verdict: StageVerdict::Rejected { reject } });
            }
        }
    }
}
