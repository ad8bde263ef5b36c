//! Exhaustive computation of `s_kn(C_n^r)` for tiny groups.
//!
//! Multisets are grown in canonical order (each new element is `>=` the
//! previous one in the lexicographic element order). A multiset holding a
//! zero-sum `kn`-subsequence is never extended, since every superset holds it
//! too. For each surviving multiset the search keeps, per chosen-count
//! `c < kn`, the set of sums of its `c`-element sub-multisets; adding `x`
//! creates a zero-sum `kn`-subsequence iff `-x` is a sum of `kn - 1` of the
//! existing elements.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::types::{ElementCodec, GSequence, GroupParams};
use crate::verifier::has_zero_sum_subsequence;

pub const DEFAULT_WORK_BUDGET: u64 = 10_000_000;

/// Largest `n^r` the oracle accepts.
pub const MAX_GROUP_ORDER: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleValue {
    Exact(usize),
    /// Some sequence of length `cap` has no zero-sum `kn`-subsequence.
    ExceedsCap,
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub params: GroupParams,
    pub value: OracleValue,
    pub cap: usize,
    /// Longest zero-sum-free sequence found (length `value - 1`, or `cap`),
    /// canonically smallest by element count vector.
    pub extremal_sequence: GSequence,
    /// Extension checks performed.
    pub work_counter: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub work_budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            work_budget: DEFAULT_WORK_BUDGET,
        }
    }
}

/// Sub-multiset sums, one bitset over the group per chosen-count.
#[derive(Clone)]
struct ReachTable {
    words: usize,
    layers: Vec<Vec<u64>>,
}

impl ReachTable {
    fn new(layers: usize, order: usize) -> Self {
        let words = order.div_ceil(64);
        let mut t = ReachTable {
            words,
            layers: vec![vec![0; words]; layers],
        };
        t.set(0, 0);
        t
    }

    fn get(&self, c: usize, s: u64) -> bool {
        self.layers[c][(s / 64) as usize] >> (s % 64) & 1 == 1
    }

    fn set(&mut self, c: usize, s: u64) {
        self.layers[c][(s / 64) as usize] |= 1 << (s % 64);
    }

    fn extended(&self, x: u64, codec: &ElementCodec) -> Self {
        let mut next = self.clone();
        for c in (1..self.layers.len()).rev() {
            for w in 0..self.words {
                let mut bits = self.layers[c - 1][w];
                while bits != 0 {
                    let s = w as u64 * 64 + u64::from(bits.trailing_zeros());
                    bits &= bits - 1;
                    next.set(c, codec.add(s, x));
                }
            }
        }
        next
    }
}

struct Search<'a> {
    codec: &'a ElementCodec,
    order: u64,
    length: usize,
    cap: usize,
    budget: u64,
    work: u64,
    counts: Vec<usize>,
    best_size: usize,
    best_counts: Vec<usize>,
}

impl Search<'_> {
    fn record(&mut self, size: usize) {
        let better = match size.cmp(&self.best_size) {
            Ordering::Greater => true,
            Ordering::Equal => self.counts < self.best_counts,
            Ordering::Less => false,
        };
        if better {
            self.best_size = size;
            self.best_counts.clone_from(&self.counts);
        }
    }

    fn explore(&mut self, first: u64, size: usize, reach: &ReachTable) -> Result<()> {
        self.record(size);
        if size == self.cap {
            return Ok(());
        }
        for x in first..self.order {
            self.work += 1;
            if self.work > self.budget {
                return Err(Error::WorkBudget {
                    budget: self.budget,
                    lower_bound: self.best_size,
                });
            }
            if size + 1 >= self.length && reach.get(self.length - 1, self.codec.neg(x)) {
                continue;
            }
            let next = reach.extended(x, self.codec);
            self.counts[x as usize] += 1;
            let res = self.explore(x, size + 1, &next);
            self.counts[x as usize] -= 1;
            res?;
        }
        Ok(())
    }
}

pub fn egz_constant(params: &GroupParams, cap: usize) -> Result<OracleResult> {
    egz_constant_with(params, cap, &OracleOptions::default())
}

/// `s_kn(C_n^r)` if it is at most `cap`, with an extremal sequence either way.
pub fn egz_constant_with(
    params: &GroupParams,
    cap: usize,
    opts: &OracleOptions,
) -> Result<OracleResult> {
    let length = params.subsequence_len();
    if cap < length {
        return Err(Error::InvalidParams(format!(
            "cap {cap} is below the subsequence length {length}"
        )));
    }
    let codec = ElementCodec::new(params)
        .filter(|c| c.order() <= MAX_GROUP_ORDER)
        .ok_or_else(|| {
            Error::SizeLimit(format!(
                "group C_{}^{} too large for the oracle",
                params.n(),
                params.r()
            ))
        })?;
    let order = codec.order();

    let mut search = Search {
        codec: &codec,
        order,
        length,
        cap,
        budget: opts.work_budget,
        work: 0,
        counts: vec![0; order as usize],
        best_size: 0,
        best_counts: vec![0; order as usize],
    };
    search.explore(0, 0, &ReachTable::new(length, order as usize))?;

    let items = search
        .best_counts
        .iter()
        .enumerate()
        .flat_map(|(e, &c)| std::iter::repeat_n(codec.decode(e as u64), c))
        .collect();
    let extremal = GSequence::new(*params, items)?;
    if extremal.len() >= length && has_zero_sum_subsequence(&extremal, length)?.has_zero_sum {
        return Err(Error::Malformed(
            "oracle extremal sequence rejected by the verifier".into(),
        ));
    }
    let value = if search.best_size >= cap {
        OracleValue::ExceedsCap
    } else {
        OracleValue::Exact(search.best_size + 1)
    };
    Ok(OracleResult {
        params: *params,
        value,
        cap,
        extremal_sequence: extremal,
        work_counter: search.work,
    })
}

/// A longest sequence of length `<= cap` with no zero-sum `kn`-subsequence.
pub fn longest_zero_sum_free(params: &GroupParams, cap: usize) -> Result<GSequence> {
    Ok(egz_constant(params, cap)?.extremal_sequence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(n: u32, r: usize, k: u32) -> GroupParams {
        GroupParams::new(n, r, k).unwrap()
    }

    fn rows(seq: &GSequence) -> Vec<Vec<u32>> {
        seq.items().iter().map(|v| v.coords().to_vec()).collect()
    }

    #[test]
    fn egz_cyclic() {
        for n in 2..=6u32 {
            let res = egz_constant(&gp(n, 1, 1), 2 * n as usize).unwrap();
            assert_eq!(res.value, OracleValue::Exact(2 * n as usize - 1), "n={n}");
            assert_eq!(res.extremal_sequence.len(), 2 * n as usize - 2);
        }
    }

    #[test]
    fn kemnitz_small() {
        assert_eq!(
            egz_constant(&gp(2, 2, 1), 6).unwrap().value,
            OracleValue::Exact(5)
        );
        assert_eq!(
            egz_constant(&gp(3, 2, 1), 10).unwrap().value,
            OracleValue::Exact(9)
        );
    }

    #[test]
    fn pinned_extremal_sequences() {
        // smallest count vectors, cross-checked by an independent brute force
        assert_eq!(
            rows(&longest_zero_sum_free(&gp(2, 1, 1), 4).unwrap()),
            vec![vec![0], vec![1]]
        );
        assert_eq!(
            rows(&longest_zero_sum_free(&gp(3, 1, 1), 6).unwrap()),
            vec![vec![1], vec![1], vec![2], vec![2]]
        );
        assert_eq!(
            rows(&longest_zero_sum_free(&gp(4, 1, 1), 8).unwrap()),
            vec![vec![2], vec![2], vec![2], vec![3], vec![3], vec![3]]
        );
        assert_eq!(
            rows(&longest_zero_sum_free(&gp(2, 2, 1), 6).unwrap()),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn higher_multiples() {
        let r = egz_constant(&gp(2, 1, 2), 8).unwrap();
        assert_eq!(r.value, OracleValue::Exact(5));
        assert_eq!(
            rows(&r.extremal_sequence),
            vec![vec![0], vec![1], vec![1], vec![1]]
        );
        assert_eq!(
            egz_constant(&gp(3, 1, 2), 10).unwrap().value,
            OracleValue::Exact(8)
        );
        let r = egz_constant(&gp(2, 2, 2), 10).unwrap();
        assert_eq!(r.value, OracleValue::Exact(6));
        assert_eq!(
            rows(&r.extremal_sequence),
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 1], vec![1, 1]]
        );
    }

    #[test]
    fn exceeds_cap() {
        let r = egz_constant(&gp(3, 2, 1), 7).unwrap();
        assert_eq!(r.value, OracleValue::ExceedsCap);
        assert_eq!(r.extremal_sequence.len(), 7);
        assert!(
            !has_zero_sum_subsequence(&r.extremal_sequence, 3)
                .unwrap()
                .has_zero_sum
        );
    }

    #[test]
    fn trivial_group() {
        // every element is zero in C_1
        let r = egz_constant(&gp(1, 2, 3), 5).unwrap();
        assert_eq!(r.value, OracleValue::Exact(3));
    }

    #[test]
    fn budget_and_input_errors() {
        let err =
            egz_constant_with(&gp(3, 2, 1), 10, &OracleOptions { work_budget: 50 }).unwrap_err();
        assert!(matches!(err, Error::WorkBudget { budget: 50, .. }));
        assert!(egz_constant(&gp(3, 2, 2), 5).is_err());
        assert!(egz_constant(&gp(100, 4, 1), 200).unwrap_err().is_resource());
    }

    #[test]
    fn monotone_in_rank() {
        let v = |r| match egz_constant(&gp(2, r, 1), 12).unwrap().value {
            OracleValue::Exact(v) => v,
            OracleValue::ExceedsCap => usize::MAX,
        };
        let (a, b, c) = (v(1), v(2), v(3));
        assert!(a <= b && b <= c);
        assert_eq!(c, 9);
    }

    #[test]
    fn both_halves_certified() {
        // every multiset of size s contains a zero-sum 3-subsequence in C_3
        let p = gp(3, 1, 1);
        let res = egz_constant(&p, 6).unwrap();
        let OracleValue::Exact(s) = res.value else {
            panic!()
        };
        let mut idx = vec![0u32; s];
        loop {
            let seq =
                GSequence::from_rows(p, &idx.iter().map(|&e| [e]).collect::<Vec<_>>()).unwrap();
            assert!(has_zero_sum_subsequence(&seq, 3).unwrap().has_zero_sum);
            // next nondecreasing tuple
            let Some(pos) = idx.iter().rposition(|&e| e < 2) else {
                break;
            };
            let v = idx[pos] + 1;
            idx[pos..].iter_mut().for_each(|e| *e = v);
        }
    }
}
