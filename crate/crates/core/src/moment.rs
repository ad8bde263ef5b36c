//! Exact first-moment calculations for random `{0,1}^r` sequences.
//!
//! Each coordinate of each of the `N` vectors is 1 with probability `q`. A
//! fixed `kn`-subsequence is zero-sum iff each coordinate holds a multiple of
//! `n` ones, which happens with probability
//!
//! ```text
//! Q = sum_{i=0..k} C(kn, in) q^(in) (1-q)^((k-i)n)
//! ```
//!
//! independently across the `r` coordinates, so the expected number of
//! zero-sum `kn`-subsequences is exactly `E[Z] = C(N, kn) Q^r`. Whenever
//! `E[Z] < 1` some length-`N` sequence has none. Everything here is exact;
//! floats only appear in [`paper_reference_bound`], which is display-only.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::types::GroupParams;

/// `C(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn probability_parts(q: &Rational) -> Result<(BigUint, BigUint)> {
    q.probability_parts()
        .ok_or_else(|| Error::ProbabilityOutOfRange(q.clone()))
}

/// Distribution of the number of ones, restricted to multiples of `n`, in one
/// coordinate of a random `kn`-subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateDistribution {
    pub params: GroupParams,
    pub q: Rational,
    /// `probs[i] = P(exactly i·n ones)` for `i = 0..=k`.
    pub probs: Vec<Rational>,
}

impl CoordinateDistribution {
    pub fn new(params: &GroupParams, q: &Rational) -> Result<Self> {
        let (numers, denom) = term_numerators(params, q)?;
        let probs = numers
            .into_iter()
            .map(|t| Rational::from_biguint(t, denom.clone()))
            .collect();
        Ok(CoordinateDistribution {
            params: *params,
            q: q.clone(),
            probs,
        })
    }

    /// `Q`, the probability that the coordinate sums to zero mod `n`.
    pub fn zero_sum_probability(&self) -> Rational {
        self.probs.iter().fold(Rational::zero(), |acc, p| &acc + p)
    }
}

/// Numerators of `P_0..P_k` over the common denominator `d^(kn)` where `q = a/d`.
fn term_numerators(params: &GroupParams, q: &Rational) -> Result<(Vec<BigUint>, BigUint)> {
    let (a, d) = probability_parts(q)?;
    let b = &d - &a;
    let n = params.n();
    let k = params.k();
    let len = params.subsequence_len();
    let a_n = num_traits::pow(a, n as usize);
    let b_n = num_traits::pow(b, n as usize);
    // a^(in) ascending, b^((k-i)n) descending
    let mut a_pows = Vec::with_capacity(k as usize + 1);
    let mut b_pows = Vec::with_capacity(k as usize + 1);
    let (mut ap, mut bp) = (BigUint::one(), BigUint::one());
    for _ in 0..=k {
        a_pows.push(ap.clone());
        b_pows.push(bp.clone());
        ap *= &a_n;
        bp *= &b_n;
    }
    let terms = (0..=k as usize)
        .map(|i| binomial(len, i * n as usize) * &a_pows[i] * &b_pows[k as usize - i])
        .collect();
    Ok((terms, num_traits::pow(d, len)))
}

/// `Q(q)` as an unreduced fraction `(numerator, denominator)`.
fn zero_prob_parts(params: &GroupParams, q: &Rational) -> Result<(BigUint, BigUint)> {
    let (terms, denom) = term_numerators(params, q)?;
    let numer: BigUint = terms.iter().sum();
    let g = numer.gcd(&denom);
    Ok((numer / &g, denom / g))
}

pub fn coordinate_zero_prob(params: &GroupParams, q: &Rational) -> Result<Rational> {
    let (num, den) = zero_prob_parts(params, q)?;
    Ok(Rational::from_biguint(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub params: GroupParams,
    pub q: Rational,
    pub sequence_len: usize,
    /// `Q`, per-coordinate zero-sum probability.
    pub q_zero: Rational,
    /// `E[Z] = C(N, kn) · Q^r`.
    pub expected_zero_sums: Rational,
}

pub fn expected_zero_sum_count(
    params: &GroupParams,
    q: &Rational,
    sequence_len: usize,
) -> Result<MomentReport> {
    let q_zero = coordinate_zero_prob(params, q)?;
    let r = exponent(params)?;
    let count = binomial(sequence_len, params.subsequence_len());
    let expected = &Rational::from_biguint(count, BigUint::one()) * &q_zero.pow(r);
    Ok(MomentReport {
        params: *params,
        q: q.clone(),
        sequence_len,
        q_zero,
        expected_zero_sums: expected,
    })
}

fn exponent(params: &GroupParams) -> Result<u32> {
    u32::try_from(params.r())
        .map_err(|_| Error::SizeLimit(format!("rank r={} too large", params.r())))
}

/// Largest `N` with `C(N, kn) · Q^r < 1`.
///
/// Never less than `kn - 1`, where no `kn`-subsequence exists at all. Fails
/// with [`Error::VacuousBound`] when `Q = 1`, since then only that vacuous
/// range qualifies.
pub fn max_admissible_n(params: &GroupParams, q: &Rational) -> Result<usize> {
    let (num, den) = zero_prob_parts(params, q)?;
    let len = params.subsequence_len();
    if num >= den {
        return Err(Error::VacuousBound {
            q_zero: Rational::from_biguint(num, den),
            length: len,
        });
    }
    let r = exponent(params)?;
    let num_r = num_traits::pow(num, r as usize);
    let den_r = num_traits::pow(den, r as usize);
    let below_one = |n: usize| binomial(n, len) * &num_r < den_r;

    // len - 1 always qualifies; gallop, then bisect on the monotone predicate
    let mut good = len - 1;
    let mut step = 1usize;
    while below_one(good + step) {
        good += step;
        step = step
            .checked_mul(2)
            .ok_or_else(|| Error::SizeLimit("admissible length overflows".into()))?;
    }
    let mut bad = good + step;
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if below_one(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// `(N, den, num)` ordering: larger `N` first, then simpler fractions.
fn better(a: &(Rational, usize), b: &(Rational, usize)) -> bool {
    if a.1 != b.1 {
        return a.1 > b.1;
    }
    if a.0.denom() != b.0.denom() {
        return a.0.denom() < b.0.denom();
    }
    a.0.numer() < b.0.numer()
}

/// Reduced fractions `a/b` with `b <= max_den` strictly inside `(lo, hi)`.
fn fractions_between(lo: &Rational, hi: &Rational, max_den: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for b in 1..=max_den {
        let bb = Rational::from_integer(b);
        let lo_b: BigInt = (lo * &bb).as_big().floor().to_integer();
        let hi_b: BigInt = (hi * &bb).as_big().ceil().to_integer();
        let b_big = BigInt::from(b);
        let mut a: BigInt = lo_b + 1;
        while a < hi_b {
            if a.gcd(&b_big).is_one() {
                out.push(Rational::new(a.clone(), b).expect("nonzero denominator"));
            }
            a += 1;
        }
    }
    out
}

/// Best rational `q` with denominator at most `denominator_budget`.
///
/// Scans the grid `i / budget`, then runs two refinement rounds that try every
/// fraction with denominator `<= budget` within one grid step of the current
/// best. Returns `(q*, max_admissible_n(q*))`; ties go to the smaller
/// denominator, then the smaller numerator.
pub fn optimize_q(params: &GroupParams, denominator_budget: u64) -> Result<(Rational, usize)> {
    if denominator_budget < 2 {
        return Err(Error::InvalidParams(format!(
            "denominator budget must be >= 2 (got {denominator_budget})"
        )));
    }
    let mut cache: HashMap<Rational, Option<usize>> = HashMap::new();
    let mut evaluate = |cands: Vec<Rational>| -> Result<Vec<(Rational, usize)>> {
        let fresh: Vec<Rational> = cands
            .iter()
            .filter(|c| !cache.contains_key(*c))
            .cloned()
            .collect();
        let results: Vec<Result<Option<usize>>> = fresh
            .par_iter()
            .map(|q| match max_admissible_n(params, q) {
                Ok(n) => Ok(Some(n)),
                Err(Error::VacuousBound { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect();
        for (q, res) in fresh.into_iter().zip(results) {
            cache.insert(q, res?);
        }
        Ok(cands
            .into_iter()
            .filter_map(|q| cache[&q].map(|n| (q, n)))
            .collect())
    };

    let pick = |scored: Vec<(Rational, usize)>, best: Option<(Rational, usize)>| {
        scored.into_iter().fold(best, |acc, cand| match acc {
            Some(b) if !better(&cand, &b) => Some(b),
            _ => Some(cand),
        })
    };

    let grid: Vec<Rational> = (1..denominator_budget)
        .map(|i| Rational::new(i, denominator_budget).expect("nonzero denominator"))
        .collect();
    let mut best = pick(evaluate(grid)?, None);

    let step = Rational::new(1, denominator_budget).expect("nonzero denominator");
    for _ in 0..2 {
        let Some((q, _)) = best.clone() else { break };
        let lo = &q - &step;
        let hi = &q + &step;
        let local = fractions_between(&lo, &hi, denominator_budget)
            .into_iter()
            .filter(|c| c.is_positive() && *c < 1)
            .collect();
        best = pick(evaluate(local)?, best);
    }

    best.ok_or_else(|| Error::VacuousBound {
        q_zero: Rational::one(),
        length: params.subsequence_len(),
    })
}

/// Leading-order lower bound from the asymptotic theorems, for display.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceBound {
    pub value: f64,
}

impl ReferenceBound {
    pub const LABEL: &'static str = "asymptotic reference, not a guarantee at finite n";
}

impl std::fmt::Display for ReferenceBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", format_significant(self.value, 6), Self::LABEL)
    }
}

/// `(n/2)(5/4)^r` for `k = 2`, otherwise `(kn/4)(1 + 1/(ek))^r`.
pub fn paper_reference_bound(params: &GroupParams) -> ReferenceBound {
    let n = f64::from(params.n());
    let k = f64::from(params.k());
    let r = params.r() as f64;
    let value = if params.k() == 2 {
        n / 2.0 * 1.25f64.powf(r)
    } else {
        k * n / 4.0 * (1.0 + 1.0 / (std::f64::consts::E * k)).powf(r)
    };
    ReferenceBound { value }
}

/// Decimal rendering with `digits` significant digits.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Exact test of `A^(kn) · Q < 1`.
///
/// When it holds, `N ≈ c·A^r` keeps `E[Z] < 1` for all ranks `r`, so the
/// admissible length grows at least geometrically with ratio `A`.
pub fn per_coordinate_certificate(
    params: &GroupParams,
    q: &Rational,
    a: &Rational,
) -> Result<bool> {
    if !a.is_positive() {
        return Err(Error::InvalidParams(format!(
            "A must be positive (got {a})"
        )));
    }
    let len = u32::try_from(params.subsequence_len())
        .map_err(|_| Error::SizeLimit("kn too large".into()))?;
    let q_zero = coordinate_zero_prob(params, q)?;
    Ok(&a.pow(len) * &q_zero < 1)
}
