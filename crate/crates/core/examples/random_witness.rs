// Sample until a sequence with no zero-sum 2n-subsequence turns up, then
// re-check the certificate from its JSON alone.
//
// Run with `cargo run --release --example random_witness`.

use egz::constructor::check_certificate;
use egz::{
    expected_zero_sum_count, find_witness, optimize_q, GroupParams, SamplerConfig,
    WitnessCertificate,
};

fn main() -> Result<(), egz::Error> {
    let params = GroupParams::new(3, 10, 2)?;
    let (q, len) = optimize_q(&params, 100)?;
    let moment = expected_zero_sum_count(&params, &q, len)?;
    println!(
        "q = {q}, N = {len}, E[Z] = {:.4} (failure probability per attempt <= E[Z])",
        moment.expected_zero_sums.to_f64()
    );

    let config = SamplerConfig::new(params, q, len, 2024, 100)?;
    let cert = find_witness(&config)?;
    let json = cert.to_json();
    println!("witness at attempt {}:\n{json}", cert.attempt_index);

    let reloaded = WitnessCertificate::from_json(&json)?;
    let check = check_certificate(&reloaded)?;
    println!(
        "re-verified: {} (regenerated from seed: {})",
        check.verdict_matches, check.regenerates
    );
    Ok(())
}
