// Exact first-moment numbers for the random {0,1}^r construction.
//
// Run with `cargo run --example first_moment`.

use egz::moment::CoordinateDistribution;
use egz::{
    expected_zero_sum_count, max_admissible_n, paper_reference_bound, per_coordinate_certificate,
    GroupParams, Rational,
};

fn main() -> Result<(), egz::Error> {
    let params = GroupParams::new(5, 8, 2)?;
    let q: Rational = "1/5".parse()?;

    let dist = CoordinateDistribution::new(&params, &q)?;
    for (i, p) in dist.probs.iter().enumerate() {
        println!("P({} ones) = {:.6e}", i * params.n() as usize, p.to_f64());
    }
    let q_zero = dist.zero_sum_probability();
    println!("Q = {q_zero}");

    let n_max = max_admissible_n(&params, &q)?;
    for len in [n_max, n_max + 1] {
        let m = expected_zero_sum_count(&params, &q, len)?;
        println!("N = {len:>3}: E[Z] = {:.6}", m.expected_zero_sums.to_f64());
    }
    println!("largest N with E[Z] < 1: {n_max}");
    println!("reference: {}", paper_reference_bound(&params));

    for a in ["11/10", "6/5", "5/4"] {
        let a: Rational = a.parse()?;
        println!(
            "A = {a}: A^(kn) Q < 1 is {}",
            per_coordinate_certificate(&params, &q, &a)?
        );
    }
    Ok(())
}
