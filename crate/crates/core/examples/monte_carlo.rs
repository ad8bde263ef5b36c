// Compare the sampled mean of Z with its exact expectation.
//
// Run with `cargo run --release --example monte_carlo`.

use egz::constructor::estimate_zero_sum_mean;
use egz::{GroupParams, SamplerConfig};

fn main() -> Result<(), egz::Error> {
    let params = GroupParams::new(3, 3, 2)?;
    for len in [8, 10, 12] {
        let config = SamplerConfig::new(params, "3/4".parse()?, len, 1, 1)?;
        let mc = estimate_zero_sum_mean(&config, 20_000)?;
        println!(
            "N={len}: mean Z = {:.4} +- {:.4}, exact E[Z] = {:.4} ({:.2} SE apart)",
            mc.mean.to_f64(),
            mc.std_error,
            mc.expected_zero_sums.to_f64(),
            mc.z_score()
        );
    }
    Ok(())
}
