//! The `egz` command line.
//!
//! Exit codes: 0 success, 1 negative outcome (certificate mismatch, no
//! witness found), 2 input or parse error, 3 resource budget exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::constructor::{
    check_certificate, estimate_zero_sum_mean, find_witness, harborth_construction, SamplerConfig,
    WitnessCertificate,
};
use crate::error::{Error, Result};
use crate::moment::{
    expected_zero_sum_count, format_significant, max_admissible_n, optimize_q,
    paper_reference_bound, ReferenceBound,
};
use crate::oracle::{egz_constant_with, OracleOptions, OracleValue};
use crate::rational::Rational;
use crate::seqfile::{format_sequence, parse_sequence};
use crate::types::{GSequence, GroupParams};
use crate::verifier::has_zero_sum_subsequence;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

const DEFAULT_BUDGET: u64 = 100;

#[derive(Debug, Parser)]
#[command(
    name = "egz",
    version,
    about = "Zero-sum kn-subsequences in C_n^r: bounds, witnesses, oracle"
)]
pub struct CliInvocation {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "EGZ_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
}

impl GroupArgs {
    fn params(&self) -> Result<GroupParams> {
        GroupParams::new(self.n, self.r, self.k)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Re-check a certificate, or test a sequence file for a zero-sum subsequence.
    Verify {
        file: PathBuf,
        /// Subsequence length for sequence files (default k·n from the header).
        #[arg(long)]
        length: Option<usize>,
    },
    /// Sample random {0,1}^r sequences until one has no zero-sum kn-subsequence.
    Sample {
        #[command(flatten)]
        group: GroupArgs,
        /// Bernoulli probability as num/den (default: optimized).
        #[arg(long)]
        q: Option<Rational>,
        /// Sequence length (default: largest N with E[Z] < 1).
        #[arg(long = "N")]
        len: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        attempts: u64,
        /// Denominator budget when q is optimized.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Q, E[Z] and the largest admissible N.
    Bound {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: Option<Rational>,
        #[arg(long = "N")]
        len: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search q with bounded denominator maximizing the admissible N.
    Optimize {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Brute-force s_kn(C_n^r) for tiny groups.
    Oracle {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = crate::oracle::DEFAULT_WORK_BUDGET)]
        work_budget: u64,
    },
    /// Monte Carlo mean of Z next to the exact expectation.
    Estimate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: Rational,
        #[arg(long = "N")]
        len: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every vector of {0,1}^r repeated p-1 times.
    Harborth {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: usize,
        /// Also verify that no zero-sum p-subsequence exists.
        #[arg(long)]
        check: bool,
    },
}

/// What a subcommand produced: a text rendering, a JSON rendering, and a code.
struct Outcome {
    text: String,
    doc: Value,
    code: i32,
}

impl Outcome {
    fn ok(text: String, doc: Value) -> Self {
        Outcome {
            text,
            doc,
            code: EXIT_OK,
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    if err.is_resource() {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

/// Parses `args` and runs the command, writing to the given streams.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliInvocation::try_parse_from(args) {
        Ok(inv) => run(&inv, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            code
        }
    }
}

pub fn run(inv: &CliInvocation, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(inv.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_RESOURCE;
        }
    };
    let result = pool.install(|| dispatch(&inv.command));
    match result {
        Ok(outcome) => {
            let written = if inv.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&outcome.doc).expect("json")
                )
            } else {
                write!(out, "{}", outcome.text)
            };
            if written.is_err() {
                return EXIT_INPUT;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::WitnessNotFound { .. } => EXIT_NEGATIVE,
                ref other => exit_code_for(other),
            }
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Verify { file, length } => verify(file, *length),
        Command::Sample {
            group,
            q,
            len,
            seed,
            attempts,
            budget,
            out,
        } => sample(
            group,
            q.as_ref(),
            *len,
            *seed,
            *attempts,
            *budget,
            out.as_deref(),
        ),
        Command::Bound {
            group,
            q,
            len,
            budget,
        } => bound(group, q.as_ref(), *len, *budget),
        Command::Optimize { group, budget } => optimize(group, *budget),
        Command::Oracle {
            group,
            cap,
            work_budget,
        } => oracle(group, *cap, *work_budget),
        Command::Estimate {
            group,
            q,
            len,
            trials,
            seed,
        } => estimate(group, q, *len, *trials, *seed),
        Command::Harborth { p, r, check } => harborth(*p, *r, *check),
    }
}

fn rows_json(seq: &GSequence) -> Value {
    Value::Array(
        seq.items()
            .iter()
            .map(|v| Value::Array(v.coords().iter().map(|&c| json!(c.to_string())).collect()))
            .collect(),
    )
}

fn indices_text(idx: &[usize]) -> String {
    idx.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn verify(path: &std::path::Path, length: Option<usize>) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let cert = WitnessCertificate::from_json(&text)?;
        let check = check_certificate(&cert)?;
        let mut t = String::new();
        t += &format!("certificate       {}\n", path.display());
        t += &format!("params            {}\n", cert.group_params()?);
        t += &format!("length            {}\n", cert.subsequence_length);
        t += &format!("has_zero_sum      {}\n", check.has_zero_sum);
        if let Some(w) = &check.witness_indices {
            t += &format!("witness           {}\n", indices_text(w));
        }
        t += &format!("verdict_matches   {}\n", check.verdict_matches);
        t += &format!("regenerates       {}\n", check.regenerates);
        t += &format!(
            "result            {}\n",
            if check.ok() { "OK" } else { "MISMATCH" }
        );
        let doc = json!({
            "kind": "certificate",
            "has_zero_sum": check.has_zero_sum,
            "witness_indices": check.witness_indices.as_ref().map(|w| w.iter().map(|i| i.to_string()).collect::<Vec<_>>()),
            "verdict_matches": check.verdict_matches,
            "regenerates": check.regenerates,
            "ok": check.ok(),
        });
        return Ok(Outcome {
            text: t,
            doc,
            code: if check.ok() { EXIT_OK } else { EXIT_NEGATIVE },
        });
    }
    let seq = parse_sequence(&text)?;
    let length = length.unwrap_or(seq.params().subsequence_len());
    let rep = has_zero_sum_subsequence(&seq, length)?;
    let mut t = format!(
        "sequence          {} ({} vectors, n={} r={})\nlength            {}\nmethod            {}\nhas_zero_sum      {}\n",
        path.display(),
        seq.len(),
        seq.params().n(),
        seq.params().r(),
        length,
        rep.method,
        rep.has_zero_sum
    );
    if let Some(w) = &rep.witness_indices {
        t += &format!("witness           {}\n", indices_text(w));
    }
    let doc = json!({
        "kind": "sequence",
        "length": length.to_string(),
        "sequence_len": seq.len().to_string(),
        "method": rep.method.to_string(),
        "has_zero_sum": rep.has_zero_sum,
        "witness_indices": rep.witness_indices.as_ref().map(|w| w.iter().map(|i| i.to_string()).collect::<Vec<_>>()),
        "states_explored": rep.states_explored.to_string(),
    });
    Ok(Outcome::ok(t, doc))
}

/// `q` as given, or the optimized one; `N` as given, or the largest admissible.
fn resolve_q_and_len(
    params: &GroupParams,
    q: Option<&Rational>,
    len: Option<usize>,
    budget: u64,
) -> Result<(Rational, usize)> {
    let q = match q {
        Some(q) => q.clone(),
        None => optimize_q(params, budget)?.0,
    };
    let len = match len {
        Some(l) => l,
        None => max_admissible_n(params, &q)?,
    };
    Ok((q, len))
}

#[allow(clippy::too_many_arguments)]
fn sample(
    group: &GroupArgs,
    q: Option<&Rational>,
    len: Option<usize>,
    seed: u64,
    attempts: u64,
    budget: u64,
    out: Option<&std::path::Path>,
) -> Result<Outcome> {
    let params = group.params()?;
    let (q, len) = resolve_q_and_len(&params, q, len, budget)?;
    let config = SamplerConfig::new(params, q, len, seed, attempts)?;
    let cert = find_witness(&config)?;
    let body = cert.to_json();
    let (text, doc) = match out {
        Some(path) => {
            std::fs::write(path, &body)?;
            (
                format!(
                    "witness found at attempt {} (N={}, q={}); certificate written to {}\n",
                    cert.attempt_index,
                    cert.sequence_len,
                    cert.q,
                    path.display()
                ),
                json!({
                    "certificate": path.display().to_string(),
                    "attempt_index": cert.attempt_index.to_string(),
                    "N": cert.sequence_len.to_string(),
                    "q": cert.q.to_string(),
                }),
            )
        }
        None => (body, serde_json::to_value(&cert)?),
    };
    Ok(Outcome::ok(text, doc))
}

fn bound(
    group: &GroupArgs,
    q: Option<&Rational>,
    len: Option<usize>,
    budget: u64,
) -> Result<Outcome> {
    let params = group.params()?;
    let q = match q {
        Some(q) => q.clone(),
        None => optimize_q(&params, budget)?.0,
    };
    let reference = paper_reference_bound(&params);
    let admissible = match max_admissible_n(&params, &q) {
        Ok(n) => Some(n),
        Err(Error::VacuousBound { .. }) => None,
        Err(e) => return Err(e),
    };
    let default_len = len.or(admissible).unwrap_or(params.subsequence_len());
    let moment = expected_zero_sum_count(&params, &q, default_len)?;

    let admissible_text = admissible.map_or_else(
        || "unbounded only vacuously (Q >= 1)".to_string(),
        |n| n.to_string(),
    );
    let text = format!(
        "params = {params}\nq = {q}\nQ = {}\nN = {default_len}\nE[Z] = {} (~{})\nmax_admissible_N = {admissible_text}\nreference_bound = {}\n",
        moment.q_zero,
        moment.expected_zero_sums,
        format_significant(moment.expected_zero_sums.to_f64(), 6),
        reference,
    );
    let doc = json!({
        "n": params.n().to_string(),
        "r": params.r().to_string(),
        "k": params.k().to_string(),
        "q": q.to_string(),
        "Q": moment.q_zero.to_string(),
        "N": default_len.to_string(),
        "expected_Z": moment.expected_zero_sums.to_string(),
        "max_admissible_N": admissible.map_or(Value::Null, |n| json!(n.to_string())),
        "reference_bound": {
            "value": format_significant(reference.value, 6),
            "label": ReferenceBound::LABEL,
        },
    });
    Ok(Outcome::ok(text, doc))
}

fn optimize(group: &GroupArgs, budget: u64) -> Result<Outcome> {
    let params = group.params()?;
    let (q, n) = optimize_q(&params, budget)?;
    let text = format!("params = {params}\nbudget = {budget}\nq* = {q}\nN* = {n}\n");
    let doc = json!({ "q": q.to_string(), "N": n.to_string(), "budget": budget.to_string() });
    Ok(Outcome::ok(text, doc))
}

fn oracle(group: &GroupArgs, cap: usize, work_budget: u64) -> Result<Outcome> {
    let params = group.params()?;
    let res = egz_constant_with(&params, cap, &OracleOptions { work_budget })?;
    let value = match res.value {
        OracleValue::Exact(v) => v.to_string(),
        OracleValue::ExceedsCap => format!("> {cap} (exceeds cap)"),
    };
    let text = format!(
        "params = {params}\ncap = {cap}\ns = {value}\nwork = {}\nextremal sequence ({} vectors):\n{}",
        res.work_counter,
        res.extremal_sequence.len(),
        format_sequence(&res.extremal_sequence)
    );
    let doc = json!({
        "n": params.n().to_string(),
        "r": params.r().to_string(),
        "k": params.k().to_string(),
        "cap": cap.to_string(),
        "value": match res.value {
            OracleValue::Exact(v) => json!(v.to_string()),
            OracleValue::ExceedsCap => json!("exceeds cap"),
        },
        "extremal_sequence": rows_json(&res.extremal_sequence),
        "work_counter": res.work_counter.to_string(),
    });
    Ok(Outcome::ok(text, doc))
}

fn estimate(
    group: &GroupArgs,
    q: &Rational,
    len: usize,
    trials: u64,
    seed: u64,
) -> Result<Outcome> {
    let params = group.params()?;
    let config = SamplerConfig::new(params, q.clone(), len, seed, trials.max(1))?;
    let mc = estimate_zero_sum_mean(&config, trials)?;
    let text = format!(
        "params = {params}\nq = {q}\nN = {len}\ntrials = {trials}\nmean Z = {} +- {} (std error)\nexact E[Z] = {} (~{})\nz = {}\n",
        format_significant(mc.mean.to_f64(), 6),
        format_significant(mc.std_error, 6),
        mc.expected_zero_sums,
        format_significant(mc.expected_zero_sums.to_f64(), 6),
        format_significant(mc.z_score(), 3),
    );
    let doc = json!({
        "trials": trials.to_string(),
        "mean": mc.mean.to_string(),
        "sum_of_squares": mc.sum_of_squares.to_string(),
        "std_error": format_significant(mc.std_error, 6),
        "expected_Z": mc.expected_zero_sums.to_string(),
    });
    Ok(Outcome::ok(text, doc))
}

fn harborth(p: u32, r: usize, check: bool) -> Result<Outcome> {
    let seq = harborth_construction(p, r)?;
    let mut text = format_sequence(&seq);
    let mut doc = json!({
        "p": p.to_string(),
        "r": r.to_string(),
        "length": seq.len().to_string(),
        "sequence": rows_json(&seq),
    });
    let mut code = EXIT_OK;
    if check {
        let rep = has_zero_sum_subsequence(&seq, p as usize)?;
        text += &format!(
            "# check: length {} zero-sum {}-subsequence {} ({})\n",
            seq.len(),
            p,
            if rep.has_zero_sum { "FOUND" } else { "absent" },
            rep.method
        );
        doc["has_zero_sum"] = json!(rep.has_zero_sum);
        if rep.has_zero_sum {
            code = EXIT_NEGATIVE;
        }
    }
    Ok(Outcome { text, doc, code })
}
