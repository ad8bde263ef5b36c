// Decide and count zero-sum subsequences of a fixed length.
//
// Run with `cargo run --example verify_sequence`.

use egz::seqfile::parse_sequence;
use egz::verifier::{count_zero_sum_subsequences_with, has_zero_sum_subsequence_with};
use egz::{Method, VerifyOptions};

const SEQUENCE: &str = "\
# n=3 r=2
0,0
0,1
1,2
2,2
1,1
2,0
0,2
";

fn main() -> Result<(), egz::Error> {
    let seq = parse_sequence(SEQUENCE)?;
    println!("{} vectors in C_3^2", seq.len());

    for length in [3, 6] {
        for method in [Method::Enumeration, Method::Dp] {
            let opts = VerifyOptions {
                method: Some(method),
                ..Default::default()
            };
            let decision = has_zero_sum_subsequence_with(&seq, length, &opts)?;
            let count = count_zero_sum_subsequences_with(&seq, length, &opts)?;
            println!(
                "L={length} {method:<11} zero-sum: {:<5} witness: {:?} count: {}",
                decision.has_zero_sum, decision.witness_indices, count.total
            );
        }
    }
    Ok(())
}
