//! Non-incremental reference decoders.
//!
//! [`restart_decode`] recomputes everything for a stage from the raw
//! accessed symbols: the erasure polynomial, every `F_j`, every syndrome
//! sample and the whole Welch-Berlekamp recursion. It shares the
//! interpolation code with the incremental decoder, so the two differ only
//! in what they recompute, and its output must match stage for stage.
//!
//! [`genie_decode`] knows the number of Byzantine nodes up front and
//! decodes once.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codec::{CodeParams, GroupVector};
use crate::error::{Error, Result};
use crate::gf::{Elem, Poly};
use crate::ird::{chien_search, erasure_decode, judge, trusted_subset, DecoderState, Reject, Verdict, WbState};

/// Outcome of decoding a stage from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartResult {
    pub wb: WbState,
    pub verdict: Verdict,
}

fn check_accessed(params: &CodeParams, accessed: &[(usize, Elem)], expected: usize) -> Result<()> {
    if accessed.len() != expected {
        return Err(Error::WrongCount { expected, actual: accessed.len() });
    }
    let mut seen = vec![false; params.n()];
    for &(j, _) in accessed {
        if j >= params.n() {
            return Err(Error::PositionNotErased(j));
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::DuplicatePosition(j));
        }
    }
    Ok(())
}

/// Locator search for stage `ell` from scratch. The first `k_hat` entries of
/// `accessed` play the role of the initial access set; the rest are taken
/// as sample points in order.
pub fn restart_locator(params: &CodeParams, accessed: &[(usize, Elem)], ell: usize) -> Result<WbState> {
    let k = params.k_hat();
    let n = params.n();
    if 2 * ell > n - k {
        return Err(Error::ExhaustedPositions);
    }
    check_accessed(params, accessed, k + 2 * ell)?;
    let f = params.field();
    let (initial, fresh) = accessed.split_at(k);

    let mut erased = vec![true; n];
    for &(j, _) in initial {
        erased[j] = false;
    }
    let t = Poly::from_roots(f, (0..n).filter(|&j| erased[j]).map(|j| f.alpha_pow(j)));
    let dt = t.derivative();
    let weights: Vec<(Elem, Elem)> = initial
        .iter()
        .map(|&(j, r)| {
            let x = f.alpha_pow(j);
            (x, f.mul(f.mul(r, x), t.eval(f, x)))
        })
        .collect();

    let mut wb = WbState::new();
    for &(i, r) in fresh {
        let xi = f.alpha_pow(i);
        let mut y = f.mul(f.mul(r, xi), dt.eval(f, xi));
        for &(xj, fj) in &weights {
            y ^= f.div(fj, xj ^ xi);
        }
        wb.update(f, xi, y);
    }
    Ok(wb)
}

/// Stage `ell` verdict recomputed from the `k_hat + 2 ell` accessed symbols.
pub fn restart_decode(params: &CodeParams, accessed: &[(usize, Elem)], ell: usize) -> Result<RestartResult> {
    let wb = restart_locator(params, accessed, ell)?;
    let verdict = judge(params, &wb.lambda, accessed, ell);
    Ok(RestartResult { wb, verdict })
}

/// Verdict when at most `v` errors are known to be present: the locator may
/// have any degree up to `v` but must split over the accessed positions.
pub fn judge_at_most(params: &CodeParams, lambda: &Poly, accessed: &[(usize, Elem)], v: usize) -> Verdict {
    let deg = match lambda.degree() {
        Some(d) if d <= v => d,
        found => return Verdict::ContinueNeeded(Reject::DegreeMismatch { expected: v, found }),
    };
    let roots = chien_search(params.field(), lambda, accessed.iter().map(|&(j, _)| j));
    if roots.len() != deg {
        return Verdict::ContinueNeeded(Reject::RootCount { expected: deg, found: roots.len() });
    }
    Verdict::Success(trusted_subset(params, accessed, &roots))
}

/// Single error-erasure decode over `k_hat + 2v` accessed symbols.
pub fn one_shot_decode(params: &CodeParams, accessed: &[(usize, Elem)], v: usize) -> Result<Option<GroupVector>> {
    let k = params.k_hat();
    check_accessed(params, accessed, k + 2 * v)?;
    let mut state = DecoderState::new(params, &accessed[..k])?;
    for pair in accessed[k..].chunks_exact(2) {
        state.absorb_pair(pair[0], pair[1])?;
    }
    match judge_at_most(params, state.lambda(), state.accessed(), v) {
        Verdict::Success(trusted) => erasure_decode(params, &trusted).map(Some),
        Verdict::ContinueNeeded(_) => Ok(None),
    }
}

/// Decoder that is told the Byzantine count `v`. `received[j]` is `None`
/// for crashed nodes. Reads `k_hat + 2v` random live symbols and decodes
/// once; `None` means the count is beyond what the live nodes can correct.
pub fn genie_decode(params: &CodeParams, received: &[Option<Elem>], v: usize, seed: u64) -> Result<Option<GroupVector>> {
    if received.len() != params.n() {
        return Err(Error::WrongCount { expected: params.n(), actual: received.len() });
    }
    let mut live: Vec<(usize, Elem)> = received.iter().enumerate().filter_map(|(j, r)| r.map(|r| (j, r))).collect();
    let need = params.k_hat() + 2 * v;
    if need > live.len() {
        return Ok(None);
    }
    live.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    live.truncate(need);
    one_shot_decode(params, &live, v)
}
