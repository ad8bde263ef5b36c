//! Decide and count zero-sum subsequences of exact length `L`.
//!
//! Two engines share the same contract:
//!
//! * colex enumeration of all `C(N, L)` index subsets, and
//! * a subset-sum DP whose state is `(chosen so far, partial sum)`, stored
//!   sparsely per chosen-count layer.
//!
//! Both return the lowest colex witness, so their reports agree exactly.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::types::{sum_of, ElementCodec, GSequence, GroupParams};

/// Above this many subsets the DP is selected.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Default cap on `L · n^r` for the DP.
pub const DEFAULT_STATE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumeration,
    Dp,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Method::Enumeration => "enumeration",
            Method::Dp => "dp",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Forces an engine instead of [`select_algorithm`].
    pub method: Option<Method>,
    pub state_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            method: None,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub method: Method,
    pub has_zero_sum: bool,
    /// Sorted indices of the lowest colex zero-sum subset, when one exists.
    pub witness_indices: Option<Vec<usize>>,
    pub states_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub method: Method,
    pub total: BigUint,
    pub length: usize,
    pub sequence_len: usize,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub(crate) fn binomial_saturating(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = (n - i) as u128;
        match acc.checked_mul(num) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

pub fn select_algorithm(seq_len: usize, length: usize, _params: &GroupParams) -> Method {
    if binomial_saturating(seq_len, length) <= ENUMERATION_LIMIT {
        Method::Enumeration
    } else {
        Method::Dp
    }
}

fn check_length(seq: &GSequence, length: usize) -> Result<()> {
    if length > seq.len() {
        return Err(Error::LengthExceedsSequence {
            length,
            len: seq.len(),
        });
    }
    Ok(())
}

pub fn has_zero_sum_subsequence(seq: &GSequence, length: usize) -> Result<VerifyReport> {
    has_zero_sum_subsequence_with(seq, length, &VerifyOptions::default())
}

pub fn has_zero_sum_subsequence_with(
    seq: &GSequence,
    length: usize,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    check_length(seq, length)?;
    let method = opts
        .method
        .unwrap_or_else(|| select_algorithm(seq.len(), length, seq.params()));
    let report = match method {
        Method::Enumeration => decide_by_enumeration(seq, length),
        Method::Dp => decide_by_dp(seq, length, opts.state_budget)?,
    };
    if let Some(w) = &report.witness_indices {
        debug_assert_eq!(w.len(), length);
        debug_assert!(crate::types::is_zero(&sum_of(seq, w)?));
    }
    Ok(report)
}

pub fn count_zero_sum_subsequences(seq: &GSequence, length: usize) -> Result<CountReport> {
    count_zero_sum_subsequences_with(seq, length, &VerifyOptions::default())
}

pub fn count_zero_sum_subsequences_with(
    seq: &GSequence,
    length: usize,
    opts: &VerifyOptions,
) -> Result<CountReport> {
    check_length(seq, length)?;
    let method = opts
        .method
        .unwrap_or_else(|| select_algorithm(seq.len(), length, seq.params()));
    let total = match method {
        Method::Enumeration => count_by_enumeration(seq, length),
        Method::Dp => count_by_dp(seq, length, opts.state_budget)?,
    };
    Ok(CountReport {
        method,
        total,
        length,
        sequence_len: seq.len(),
    })
}

/// Index subsets of size `k` from `0..n` in colexicographic order.
struct Colex {
    idx: Vec<usize>,
    n: usize,
    started: bool,
    done: bool,
}

impl Colex {
    fn new(n: usize, k: usize) -> Self {
        Colex {
            idx: (0..k).collect(),
            n,
            started: false,
            done: k > n,
        }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        for i in 0..k {
            let bound = if i + 1 < k { self.idx[i + 1] } else { self.n };
            if self.idx[i] + 1 < bound {
                self.idx[i] += 1;
                for (j, v) in self.idx[..i].iter_mut().enumerate() {
                    *v = j;
                }
                return Some(&self.idx);
            }
        }
        self.done = true;
        None
    }
}

/// Visits every size-`length` subset in colex order; `visit` returns `false` to stop.
fn for_each_zero_subset(
    seq: &GSequence,
    length: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> u64 {
    let n = u64::from(seq.params().n());
    let r = seq.params().r();
    let items = seq.items();
    let mut acc = vec![0u64; r];
    let mut visited = 0u64;
    let mut colex = Colex::new(seq.len(), length);
    while let Some(subset) = colex.advance() {
        visited += 1;
        acc.iter_mut().for_each(|a| *a = 0);
        for &i in subset {
            for (a, &c) in acc.iter_mut().zip(items[i].coords()) {
                *a += u64::from(c);
            }
        }
        if acc.iter().all(|a| a % n == 0) && !visit(subset) {
            break;
        }
    }
    visited
}

fn decide_by_enumeration(seq: &GSequence, length: usize) -> VerifyReport {
    let mut witness = None;
    let states = for_each_zero_subset(seq, length, |s| {
        witness = Some(s.to_vec());
        false
    });
    VerifyReport {
        method: Method::Enumeration,
        has_zero_sum: witness.is_some(),
        witness_indices: witness,
        states_explored: states,
    }
}

fn count_by_enumeration(seq: &GSequence, length: usize) -> BigUint {
    let mut total = 0u64;
    for_each_zero_subset(seq, length, |_| {
        total += 1;
        true
    });
    BigUint::from(total)
}

fn dp_codec(seq: &GSequence, length: usize, budget: u64) -> Result<ElementCodec> {
    let order = seq.params().group_order();
    let needed = order
        .map(|o| o as u128 * length as u128)
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::StateBudget {
            needed,
            cap: budget,
        });
    }
    // order is Some here since needed <= budget
    Ok(ElementCodec::new(seq.params()).expect("group order fits"))
}

/// Chosen-count layers worth updating after seeing item `j` of `n_items`:
/// a state with `c` chosen must still be able to reach `length`.
fn live_layers(j: usize, n_items: usize, length: usize) -> std::ops::RangeInclusive<usize> {
    let remaining_after = n_items - 1 - j;
    let lo = length.saturating_sub(remaining_after).max(1);
    let hi = (j + 1).min(length);
    lo..=hi
}

fn decide_by_dp(seq: &GSequence, length: usize, budget: u64) -> Result<VerifyReport> {
    if length == 0 {
        return Ok(VerifyReport {
            method: Method::Dp,
            has_zero_sum: true,
            witness_indices: Some(Vec::new()),
            states_explored: 1,
        });
    }
    let codec = dp_codec(seq, length, budget)?;
    let enc: Vec<u64> = seq.items().iter().map(|v| codec.encode(v)).collect();
    // layers[c]: partial sum -> first item index that made it reachable
    let mut layers: Vec<HashMap<u64, usize>> = vec![HashMap::new(); length + 1];
    layers[0].insert(0, usize::MAX);
    let mut states = 1u64;
    let n_items = enc.len();

    for (j, &x) in enc.iter().enumerate() {
        for c in live_layers(j, n_items, length).rev() {
            let (lower, upper) = layers.split_at_mut(c);
            let prev = &lower[c - 1];
            let cur = &mut upper[0];
            for &s in prev.keys() {
                let t = codec.add(s, x);
                cur.entry(t).or_insert_with(|| {
                    states += 1;
                    j
                });
            }
        }
        if layers[length].contains_key(&0) {
            let mut witness = Vec::with_capacity(length);
            let mut sum = 0u64;
            for c in (1..=length).rev() {
                let item = layers[c][&sum];
                witness.push(item);
                sum = codec.add(sum, codec.neg(enc[item]));
            }
            witness.reverse();
            return Ok(VerifyReport {
                method: Method::Dp,
                has_zero_sum: true,
                witness_indices: Some(witness),
                states_explored: states,
            });
        }
    }
    Ok(VerifyReport {
        method: Method::Dp,
        has_zero_sum: false,
        witness_indices: None,
        states_explored: states,
    })
}

fn count_by_dp(seq: &GSequence, length: usize, budget: u64) -> Result<BigUint> {
    if length == 0 {
        return Ok(BigUint::one());
    }
    let codec = dp_codec(seq, length, budget)?;
    let enc: Vec<u64> = seq.items().iter().map(|v| codec.encode(v)).collect();
    let mut layers: Vec<HashMap<u64, BigUint>> = vec![HashMap::new(); length + 1];
    layers[0].insert(0, BigUint::one());
    let n_items = enc.len();

    for (j, &x) in enc.iter().enumerate() {
        for c in live_layers(j, n_items, length).rev() {
            let (lower, upper) = layers.split_at_mut(c);
            let prev = &lower[c - 1];
            let cur = &mut upper[0];
            for (&s, cnt) in prev {
                *cur.entry(codec.add(s, x)).or_insert_with(BigUint::zero) += cnt;
            }
        }
    }
    Ok(layers[length].remove(&0).unwrap_or_default())
}
