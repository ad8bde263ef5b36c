//! Zero-sum subsequences of prescribed length in `C_n^r`.
//!
//! The crate is organised around four capabilities:
//!
//! * [`verifier`] decides and counts zero-sum subsequences of length exactly
//!   `L = kn` in a concrete sequence (colex enumeration or a sparse subset-sum DP).
//! * [`moment`] computes, in exact rational arithmetic, the first moment of the
//!   number of zero-sum `kn`-subsequences in a random `{0,1}^r` sequence and the
//!   largest length at which that moment stays below one.
//! * [`constructor`] samples such random sequences reproducibly, searches for a
//!   verified zero-sum-free witness and wraps it in a re-checkable certificate.
//!   It also builds Harborth's deterministic construction.
//! * [`oracle`] computes `s_kn(C_n^r)` by exhaustive multiset search for tiny
//!   parameters.
//!
//! [`cli`] wires all of them behind the `egz` binary.

pub mod cli;
pub mod constructor;
pub mod error;
pub mod moment;
pub mod oracle;
pub mod rational;
pub mod seqfile;
pub mod types;
pub mod verifier;

pub use constructor::{
    find_witness, harborth_construction, sample_sequence, MonteCarloReport, SamplerConfig,
    WitnessCertificate,
};
pub use error::{Error, Result};
pub use moment::{
    coordinate_zero_prob, expected_zero_sum_count, max_admissible_n, optimize_q,
    paper_reference_bound, per_coordinate_certificate, CoordinateDistribution, MomentReport,
};
pub use oracle::{egz_constant, longest_zero_sum_free, OracleResult, OracleValue};
pub use rational::Rational;
pub use types::{is_zero, sum_of, GSequence, GroupParams, ZVector};
pub use verifier::{
    count_zero_sum_subsequences, has_zero_sum_subsequence, select_algorithm, CountReport, Method,
    VerifyOptions, VerifyReport,
};
