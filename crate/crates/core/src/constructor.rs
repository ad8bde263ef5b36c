//! Random `{0,1}^r` sequences, witness search and certificates, plus
//! Harborth's deterministic construction.
//!
//! # Random source
//!
//! Attempt `a` under seed `s` reads ChaCha20 (`rand_chacha`, 20 rounds) keyed
//! with the 8 little-endian bytes of `s` followed by 24 zero bytes, on stream
//! number `a`, starting at block 0. Entries are drawn row-major, one
//! `next_u64` per Bernoulli trial plus rejections. The stream is
//! platform-independent, so a certificate can be regenerated anywhere from
//! `(seed, attempt_index)`.
//!
//! # Exact Bernoulli draws
//!
//! For `q = a/d` with `d < 2^64`, a uniform residue `u mod d` is obtained by
//! rejecting 64-bit words at or above the largest multiple of `d`, and the
//! entry is 1 iff the residue is below `a`. The success probability is
//! exactly `a/d`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moment::expected_zero_sum_count;
use crate::rational::Rational;
use crate::types::{GSequence, GroupParams, ZVector};
use crate::verifier::{count_zero_sum_subsequences, has_zero_sum_subsequence, Method};

pub const CERTIFICATE_FORMAT_VERSION: u32 = 1;

/// Longest sequence any constructor will materialise.
pub const MAX_SEQUENCE_LEN: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub params: GroupParams,
    pub q: Rational,
    pub sequence_len: usize,
    pub seed: u64,
    pub max_attempts: u64,
}

impl SamplerConfig {
    pub fn new(
        params: GroupParams,
        q: Rational,
        sequence_len: usize,
        seed: u64,
        max_attempts: u64,
    ) -> Result<Self> {
        if max_attempts == 0 {
            return Err(Error::InvalidParams("max_attempts must be >= 1".into()));
        }
        BernoulliSampler::new(&q)?;
        check_size(sequence_len, params.r())?;
        Ok(SamplerConfig {
            params,
            q,
            sequence_len,
            seed,
            max_attempts,
        })
    }
}

fn check_size(len: usize, r: usize) -> Result<()> {
    match len.checked_mul(r) {
        Some(cells) if len <= MAX_SEQUENCE_LEN && cells <= MAX_SEQUENCE_LEN * 8 => Ok(()),
        _ => Err(Error::SizeLimit(format!(
            "sequence of {len} vectors of rank {r} is too large"
        ))),
    }
}

#[derive(Clone, Copy, Debug)]
struct BernoulliSampler {
    numer: u64,
    denom: u64,
    /// Largest multiple of `denom` not exceeding 2^64.
    zone: u128,
}

impl BernoulliSampler {
    fn new(q: &Rational) -> Result<Self> {
        let (a, d) = q
            .probability_parts()
            .ok_or_else(|| Error::ProbabilityOutOfRange(q.clone()))?;
        let (Some(numer), Some(denom)) = (a.to_u64(), d.to_u64()) else {
            return Err(Error::InvalidParams(format!(
                "denominator of q = {q} must be below 2^64 for sampling"
            )));
        };
        let span = 1u128 << 64;
        let zone = span - span % u128::from(denom);
        Ok(BernoulliSampler { numer, denom, zone })
    }

    fn draw(&self, rng: &mut impl RngCore) -> bool {
        loop {
            let u = rng.next_u64();
            if u128::from(u) < self.zone {
                return u % self.denom < self.numer;
            }
        }
    }
}

fn attempt_rng(seed: u64, attempt: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(attempt);
    rng
}

/// Raw 0/1 rows for one attempt.
fn sample_rows(config: &SamplerConfig, attempt: u64) -> Result<Vec<Vec<u32>>> {
    let bern = BernoulliSampler::new(&config.q)?;
    let mut rng = attempt_rng(config.seed, attempt);
    let r = config.params.r();
    Ok((0..config.sequence_len)
        .map(|_| (0..r).map(|_| u32::from(bern.draw(&mut rng))).collect())
        .collect())
}

fn rows_to_sequence(params: GroupParams, rows: &[Vec<u32>]) -> Result<GSequence> {
    let items = rows
        .iter()
        .map(|row| {
            let coords: Vec<i64> = row.iter().map(|&c| i64::from(c)).collect();
            ZVector::reduced(&params, &coords)
        })
        .collect::<Result<Vec<_>>>()?;
    GSequence::new(params, items)
}

/// Draws `N` vectors with i.i.d. Bernoulli(`q`) entries for the given attempt.
pub fn sample_sequence(config: &SamplerConfig, attempt: u64) -> Result<GSequence> {
    if attempt >= config.max_attempts {
        return Err(Error::InvalidParams(format!(
            "attempt {attempt} outside [0, {})",
            config.max_attempts
        )));
    }
    rows_to_sequence(config.params, &sample_rows(config, attempt)?)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateParams {
    pub n: u32,
    pub r: usize,
    pub k: u32,
}

/// A sampled sequence together with everything needed to regenerate and
/// re-verify it. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WitnessCertificate {
    pub format_version: u32,
    pub params: CertificateParams,
    pub q: Rational,
    pub seed: u64,
    pub attempt_index: u64,
    #[serde(rename = "N")]
    pub sequence_len: usize,
    pub sequence: Vec<Vec<u32>>,
    pub verifier_method: Method,
    pub verified_no_zero_sum: bool,
    pub subsequence_length: usize,
}

impl WitnessCertificate {
    pub fn group_params(&self) -> Result<GroupParams> {
        GroupParams::new(self.params.n, self.params.r, self.params.k)
    }

    /// Pretty JSON with one line per sequence row.
    pub fn to_json(&self) -> String {
        fn enc<T: serde::Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("certificate field serializes")
        }
        let rows: Vec<String> = self
            .sequence
            .iter()
            .map(|row| format!("    {}", enc(row)))
            .collect();
        let sequence = if rows.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        let fields = [
            ("format_version", enc(&self.format_version)),
            ("params", enc(&self.params)),
            ("q", enc(&self.q)),
            ("seed", enc(&self.seed)),
            ("attempt_index", enc(&self.attempt_index)),
            ("N", enc(&self.sequence_len)),
            ("sequence", sequence),
            ("verifier_method", enc(&self.verifier_method)),
            ("verified_no_zero_sum", enc(&self.verified_no_zero_sum)),
            ("subsequence_length", enc(&self.subsequence_length)),
        ];
        let body: Vec<String> = fields
            .iter()
            .map(|(k, v)| format!("  \"{k}\": {v}"))
            .collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn sequence(&self) -> Result<GSequence> {
        rows_to_sequence(self.group_params()?, &self.sequence)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    /// The verifier reproduced `verified_no_zero_sum`.
    pub verdict_matches: bool,
    /// The sampler regenerated the embedded sequence from `(seed, attempt_index)`.
    pub regenerates: bool,
    pub has_zero_sum: bool,
    pub witness_indices: Option<Vec<usize>>,
}

impl CertificateCheck {
    pub fn ok(&self) -> bool {
        self.verdict_matches && self.regenerates
    }
}

/// Re-checks a certificate from its own contents only.
pub fn check_certificate(cert: &WitnessCertificate) -> Result<CertificateCheck> {
    let params = cert.group_params()?;
    if cert.format_version != CERTIFICATE_FORMAT_VERSION {
        return Err(Error::Malformed(format!(
            "unsupported certificate format_version {}",
            cert.format_version
        )));
    }
    let consistent = cert.sequence.len() == cert.sequence_len
        && cert
            .sequence
            .iter()
            .all(|row| row.len() == params.r() && row.iter().all(|&c| c <= 1))
        && cert.subsequence_length == params.subsequence_len();
    if !consistent {
        return Ok(CertificateCheck {
            verdict_matches: false,
            regenerates: false,
            has_zero_sum: false,
            witness_indices: None,
        });
    }
    let seq = cert.sequence()?;
    let (has_zero_sum, witness_indices) = if seq.len() < cert.subsequence_length {
        (false, None)
    } else {
        let rep = has_zero_sum_subsequence(&seq, cert.subsequence_length)?;
        (rep.has_zero_sum, rep.witness_indices)
    };
    let config = SamplerConfig {
        params,
        q: cert.q.clone(),
        sequence_len: cert.sequence_len,
        seed: cert.seed,
        max_attempts: cert.attempt_index.saturating_add(1),
    };
    let regenerates = sample_rows(&config, cert.attempt_index)? == cert.sequence;
    Ok(CertificateCheck {
        verdict_matches: has_zero_sum != cert.verified_no_zero_sum,
        regenerates,
        has_zero_sum,
        witness_indices,
    })
}

/// Rows of a zero-sum-free sample and the engine that cleared it.
type Cleared = Option<(Vec<Vec<u32>>, Method)>;

fn verify_attempt(config: &SamplerConfig, attempt: u64) -> Result<Cleared> {
    let len = config.params.subsequence_len();
    let rows = sample_rows(config, attempt)?;
    if rows.len() < len {
        return Ok(Some((rows, Method::Enumeration)));
    }
    let seq = rows_to_sequence(config.params, &rows)?;
    let rep = has_zero_sum_subsequence(&seq, len).map_err(|e| Error::Verifier {
        n: config.params.n(),
        r: config.params.r(),
        k: config.params.k(),
        len: config.sequence_len,
        source: Box::new(e),
    })?;
    Ok((!rep.has_zero_sum).then_some((rows, rep.method)))
}

/// Samples attempts `0, 1, ...` and certifies the lowest-indexed one with no
/// zero-sum `kn`-subsequence.
///
/// Attempts are verified in parallel batches sized to the current rayon pool;
/// the winner does not depend on the pool size.
pub fn find_witness(config: &SamplerConfig) -> Result<WitnessCertificate> {
    let batch = rayon::current_num_threads().max(1) as u64;
    let mut start = 0u64;
    while start < config.max_attempts {
        let end = start.saturating_add(batch).min(config.max_attempts);
        let results: Vec<Result<Cleared>> = (start..end)
            .into_par_iter()
            .map(|a| verify_attempt(config, a))
            .collect();
        for (attempt, res) in (start..end).zip(results) {
            if let Some((rows, method)) = res? {
                let p = config.params;
                return Ok(WitnessCertificate {
                    format_version: CERTIFICATE_FORMAT_VERSION,
                    params: CertificateParams {
                        n: p.n(),
                        r: p.r(),
                        k: p.k(),
                    },
                    q: config.q.clone(),
                    seed: config.seed,
                    attempt_index: attempt,
                    sequence_len: config.sequence_len,
                    sequence: rows,
                    verifier_method: method,
                    verified_no_zero_sum: true,
                    subsequence_length: p.subsequence_len(),
                });
            }
        }
        start = end;
    }
    let moment = expected_zero_sum_count(&config.params, &config.q, config.sequence_len)?;
    Err(Error::WitnessNotFound {
        attempts: config.max_attempts,
        expected_zero_sums: moment.expected_zero_sums,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    /// Sum of `Z` over all trials.
    pub total: BigUint,
    pub sum_of_squares: BigUint,
    pub mean: Rational,
    /// Standard error of the mean from the unbiased sample variance.
    pub std_error: f64,
    pub expected_zero_sums: Rational,
}

impl MonteCarloReport {
    /// `|mean - E[Z]|` in units of the standard error.
    pub fn z_score(&self) -> f64 {
        let diff = (&self.mean - &self.expected_zero_sums).to_f64().abs();
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

/// Sample mean of `Z` over `trials` sequences; trial `t` uses stream `t`.
pub fn estimate_zero_sum_mean(config: &SamplerConfig, trials: u64) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let len = config.params.subsequence_len();
    let counts: Vec<Result<BigUint>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let rows = sample_rows(config, t)?;
            if rows.len() < len {
                return Ok(BigUint::zero());
            }
            let seq = rows_to_sequence(config.params, &rows)?;
            Ok(count_zero_sum_subsequences(&seq, len)?.total)
        })
        .collect();
    let mut total = BigUint::zero();
    let mut sum_of_squares = BigUint::zero();
    for c in counts {
        let c = c?;
        sum_of_squares += &c * &c;
        total += c;
    }
    let t = Rational::from_integer(trials);
    let mean = Rational::from_biguint(total.clone(), BigUint::from(trials));
    let std_error = if trials > 1 {
        // (sum x^2 - T mean^2) / (T - 1) / T
        let sq = Rational::from_biguint(sum_of_squares.clone(), 1u32.into());
        let var = &(&sq - &(&t * &(&mean * &mean))) * &Rational::new(1, trials - 1)?;
        (var.to_f64() / trials as f64).max(0.0).sqrt()
    } else {
        0.0
    };
    let expected = expected_zero_sum_count(&config.params, &config.q, config.sequence_len)?;
    Ok(MonteCarloReport {
        trials,
        total,
        sum_of_squares,
        mean,
        std_error,
        expected_zero_sums: expected.expected_zero_sums,
    })
}

/// Every vector of `{0,1}^r` repeated `p - 1` times, in binary counting order.
pub fn harborth_construction(p: u32, r: usize) -> Result<GSequence> {
    if p < 2 {
        return Err(Error::InvalidParams(format!("p must be >= 2 (got {p})")));
    }
    let params = GroupParams::new(p, r, 1)?;
    let too_big = || Error::SizeLimit(format!("2^{r}·({p}-1) vectors"));
    let vectors = u32::try_from(r)
        .ok()
        .and_then(|r| 1usize.checked_shl(r))
        .filter(|_| r < usize::BITS as usize)
        .ok_or_else(too_big)?;
    let len = vectors.checked_mul(p as usize - 1).ok_or_else(too_big)?;
    check_size(len, r).map_err(|_| too_big())?;
    let mut items = Vec::with_capacity(len);
    for v in 0..vectors {
        let coords: Vec<u32> = (0..r).rev().map(|bit| ((v >> bit) & 1) as u32).collect();
        let z = ZVector::from_raw(coords);
        items.extend(std::iter::repeat_n(z, p as usize - 1));
    }
    Ok(GSequence::from_trusted(params, items))
}
