//! Closed-form access statistics for progressive retrieval.
//!
//! Each of `n` live nodes is Byzantine independently with probability `p`,
//! and nodes are read in uniformly random order. `A_v` is the event that
//! exactly `v` nodes are Byzantine; `B_i` is the event that retrieval
//! succeeds at stage `i`, i.e. after `k_hat + 2i` reads. Given `A_v`, the
//! read order is a uniformly random arrangement of `v` bad and `n - v` good
//! nodes, and `Pr(B_i | A_v)` counts the arrangements whose first stage with
//! at most `i` bad nodes among the first `k_hat + 2i` is stage `i`.
//!
//! A failed retrieval is charged `n` reads. Crashed nodes simply shrink
//! `n` to `n - s`.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// `ln k!` for `k = 0..=n`.
struct LnFact(Vec<f64>);

impl LnFact {
    fn new(n: usize) -> Self {
        Self((0..=n as u64).map(ln_factorial).collect())
    }

    fn ln_binom(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

fn ln_pr_av(lf: &LnFact, n: usize, v: usize, p: f64) -> f64 {
    if p == 0.0 {
        return if v == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p == 1.0 {
        return if v == n { 0.0 } else { f64::NEG_INFINITY };
    }
    lf.ln_binom(n, v) + v as f64 * p.ln() + (n - v) as f64 * (-p).ln_1p()
}

/// `Pr(A_v)`: binomial probability of exactly `v` Byzantine nodes among `n`.
pub fn pr_av(n: usize, v: usize, p: f64) -> f64 {
    if v > n {
        return 0.0;
    }
    ln_pr_av(&LnFact::new(n), n, v, p).exp()
}

/// Largest stage index with a nonzero success probability given `v` bad
/// nodes, or `None` when even stage 0 is impossible.
pub fn stage_limit(n: usize, k_hat: usize, v: usize) -> Option<usize> {
    let cap = v.min((n - k_hat) / 2);
    let healthy_slack = (n - k_hat).checked_sub(v)?;
    Some(cap.min(healthy_slack))
}

fn ln_pr_bi(lf: &LnFact, n: usize, k: usize, i: usize, v: usize) -> f64 {
    // Hypergeometric: the first k + 2i - 1 reads hold exactly i bad nodes.
    // Ballot factor: no earlier stage already succeeded. Last factor: the
    // next read is good.
    let head = i + k - 1;
    let len = 2 * i + k - 1;
    lf.ln_binom(n - v, head) + lf.ln_binom(v, i) - lf.ln_binom(n, len)
        + (k as f64 / (i + k) as f64).ln()
        + ((n - v - head) as f64 / (n - len) as f64).ln()
}

/// `Pr(B_i | A_v)`: probability that retrieval first succeeds at stage `i`
/// when exactly `v` of the `n` nodes are Byzantine.
pub fn pr_bi_given_av(n: usize, k_hat: usize, i: usize, v: usize) -> Result<f64> {
    if k_hat == 0 || k_hat >= n || v > n {
        return Err(Error::OutOfRange(format!("need 1 <= k_hat < n and v <= n (n={n}, k_hat={k_hat}, v={v})")));
    }
    match stage_limit(n, k_hat, v) {
        Some(limit) if i <= limit => Ok(ln_pr_bi(&LnFact::new(n), n, k_hat, i, v).exp()),
        _ => Err(Error::OutOfRange(format!("stage {i} out of range for n={n}, k_hat={k_hat}, v={v}"))),
    }
}

/// Distribution of the number of reads: successful retrievals keyed by
/// read count, plus the total failure mass (charged `terminal_accesses`).
#[derive(Debug, Clone, PartialEq)]
pub struct AccessPmf {
    pub success: BTreeMap<usize, f64>,
    pub terminal: f64,
    pub terminal_accesses: usize,
}

impl AccessPmf {
    pub fn total(&self) -> f64 {
        self.success.values().sum::<f64>() + self.terminal
    }

    pub fn success_probability(&self) -> f64 {
        self.success.values().sum()
    }

    pub fn mean(&self) -> f64 {
        self.success.iter().map(|(&a, &q)| a as f64 * q).sum::<f64>() + self.terminal * self.terminal_accesses as f64
    }
}

/// Serialized as a single map: read counts in ascending order, then
/// `"terminal"`.
impl Serialize for AccessPmf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.success.len() + 1))?;
        for (a, q) in &self.success {
            map.serialize_entry(&a.to_string(), q)?;
        }
        map.serialize_entry("terminal", &self.terminal)?;
        map.end()
    }
}

fn check(n: usize, k_hat: usize, p: f64) -> Result<()> {
    if k_hat == 0 || k_hat >= n {
        return Err(Error::OutOfRange(format!("need 1 <= k_hat < n, got n={n}, k_hat={k_hat}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} is not a probability")));
    }
    Ok(())
}

/// Full read-count distribution.
pub fn access_pmf(n: usize, k_hat: usize, p: f64) -> Result<AccessPmf> {
    check(n, k_hat, p)?;
    let lf = LnFact::new(n);
    let mut success = BTreeMap::new();
    let mut succeeded = 0.0;
    for v in 0..=(n - k_hat) {
        let la = ln_pr_av(&lf, n, v, p);
        if la == f64::NEG_INFINITY {
            continue;
        }
        let Some(limit) = stage_limit(n, k_hat, v) else { continue };
        for i in 0..=limit {
            let q = (la + ln_pr_bi(&lf, n, k_hat, i, v)).exp();
            *success.entry(k_hat + 2 * i).or_insert(0.0) += q;
            succeeded += q;
        }
    }
    Ok(AccessPmf { success, terminal: (1.0 - succeeded).max(0.0), terminal_accesses: n })
}

/// Probability that retrieval succeeds before the live nodes run out.
pub fn pr_success(n: usize, k_hat: usize, p: f64) -> Result<f64> {
    Ok(access_pmf(n, k_hat, p)?.success_probability())
}

/// Expected number of reads, a failure counting as `n`.
pub fn avg_accesses(n: usize, k_hat: usize, p: f64) -> Result<f64> {
    Ok(access_pmf(n, k_hat, p)?.mean())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticResult {
    pub n: usize,
    pub k_hat: usize,
    pub p: f64,
    pub s: usize,
    pub avg_accesses: f64,
    pub pr_success: f64,
    pub access_pmf: AccessPmf,
}

/// All statistics for `n` nodes of which `s` are known to have crashed.
pub fn analyze(n: usize, k_hat: usize, p: f64, s: usize) -> Result<AnalyticResult> {
    let live = n
        .checked_sub(s)
        .ok_or_else(|| Error::OutOfRange(format!("{s} crashes exceed n = {n}")))?;
    let pmf = access_pmf(live, k_hat, p)?;
    Ok(AnalyticResult {
        n,
        k_hat,
        p,
        s,
        avg_accesses: pmf.mean(),
        pr_success: pmf.success_probability(),
        access_pmf: pmf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact `Pr(B_i | A_v)` by listing every placement of the `v` bad
    /// nodes in the read order and running the stage rule on it.
    fn enumerate(n: usize, k: usize, v: usize) -> Vec<f64> {
        let mut counts = vec![0u64; n + 1];
        let mut total = 0u64;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != v {
                continue;
            }
            total += 1;
            let bad = |len: usize| (mask & ((1u32 << len) - 1)).count_ones() as usize;
            if let Some(i) = (0..=(n - k) / 2).find(|&i| bad(k + 2 * i) <= i) {
                counts[i] += 1;
            }
        }
        counts.iter().map(|&c| c as f64 / total as f64).collect()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(pr_av(10, 0, 0.0), 1.0);
        assert_eq!(pr_av(10, 3, 0.0), 0.0);
        assert!((pr_av(4, 2, 0.5) - 0.375).abs() < 1e-12);
        assert_eq!(pr_av(5, 5, 1.0), 1.0);
    }

    #[test]
    fn matches_enumeration_for_small_n() {
        for n in 2..=9 {
            for k in 1..n {
                for v in 0..=n {
                    let exact = enumerate(n, k, v);
                    let limit = stage_limit(n, k, v);
                    for (i, &e) in exact.iter().enumerate() {
                        match limit {
                            Some(l) if i <= l => {
                                let got = pr_bi_given_av(n, k, i, v).unwrap();
                                assert!((got - e).abs() < 1e-12, "n={n} k={k} v={v} i={i}: {got} vs {e}");
                            }
                            _ => {
                                assert_eq!(e, 0.0, "n={n} k={k} v={v} i={i}");
                                assert!(pr_bi_given_av(n, k, i, v).is_err());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stage_zero_closed_form() {
        for (n, k, v) in [(127, 15, 20), (1023, 401, 7), (31, 10, 0)] {
            let lf = LnFact::new(n);
            let direct = (lf.ln_binom(n - v, k) - lf.ln_binom(n, k)).exp();
            assert!((pr_bi_given_av(n, k, 0, v).unwrap() - direct).abs() < 1e-12);
        }
        assert_eq!(pr_bi_given_av(20, 5, 0, 0).unwrap(), 1.0);
        assert!(pr_bi_given_av(20, 5, 1, 0).is_err());
    }

    #[test]
    fn no_failures_means_k_hat_reads() {
        for (n, k) in [(15, 7), (127, 30), (1023, 401)] {
            let r = analyze(n, k, 0.0, 0).unwrap();
            assert_eq!(r.avg_accesses, k as f64);
            assert_eq!(r.pr_success, 1.0);
        }
        let all_bad = analyze(63, 20, 1.0, 0).unwrap();
        assert_eq!(all_bad.pr_success, 0.0);
        assert_eq!(all_bad.avg_accesses, 63.0);
    }

    #[test]
    fn published_operating_points() {
        let avg = avg_accesses(1023, 401, 0.01).unwrap();
        assert!((avg - 409.2).abs() < 0.3, "{avg}");
        assert_eq!(((avg - 401.0) / 2.0).ceil(), 5.0);
        let ps = pr_success(1023, 401, 0.3).unwrap();
        assert!((ps - 0.60).abs() < 0.05, "{ps}");
    }

    #[test]
    fn grid_invariants() {
        for n in [15usize, 127, 1023] {
            for k in [1, n / 8, n / 3, n / 2, n - 2].into_iter().filter(|&k| k >= 1) {
                let mut prev = f64::NEG_INFINITY;
                for step in 0..=6 {
                    let p = step as f64 * 0.05;
                    let pmf = access_pmf(n, k, p).unwrap();
                    assert!((pmf.total() - 1.0).abs() < 1e-9, "n={n} k={k} p={p}");
                    assert!(pmf.success.values().all(|&q| (0.0..=1.0 + 1e-12).contains(&q)));
                    let avg = pmf.mean();
                    assert!(avg >= k as f64 - 1e-9 && avg <= n as f64 + 1e-9);
                    assert!(avg >= prev - 1e-9, "not monotone at n={n} k={k} p={p}");
                    prev = avg;
                }
            }
        }
    }

    #[test]
    fn crashes_shrink_n() {
        let a = analyze(127, 30, 0.1, 17).unwrap();
        let b = analyze(110, 30, 0.1, 0).unwrap();
        assert_eq!(a.avg_accesses, b.avg_accesses);
        assert_eq!(a.pr_success, b.pr_success);
        assert_eq!(a.access_pmf, b.access_pmf);
        assert!(analyze(20, 5, 0.1, 21).is_err());
        assert!(analyze(20, 5, 0.1, 15).is_err());
    }

    #[test]
    fn pmf_serializes_as_single_map() {
        let r = analyze(15, 7, 0.1, 0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let pmf = v["access_pmf"].as_object().unwrap();
        assert!(pmf.contains_key("7") && pmf.contains_key("terminal"));
        for key in ["n", "k_hat", "p", "s", "avg_accesses", "pr_success"] {
            assert!(v.get(key).is_some());
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(access_pmf(10, 10, 0.1).is_err());
        assert!(access_pmf(10, 0, 0.1).is_err());
        assert!(access_pmf(10, 3, 1.5).is_err());
        assert!(pr_bi_given_av(10, 3, 0, 11).is_err());
    }
}
