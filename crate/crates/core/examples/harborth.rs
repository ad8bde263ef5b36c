// Harborth's construction: every 0/1 vector repeated p-1 times.
//
// Run with `cargo run --example harborth`.

use egz::{harborth_construction, has_zero_sum_subsequence};

fn main() -> Result<(), egz::Error> {
    for p in [2u32, 3, 5, 7] {
        for r in 1..=3 {
            let seq = harborth_construction(p, r)?;
            let rep = has_zero_sum_subsequence(&seq, p as usize)?;
            println!(
                "p={p} r={r}: length {:>3}, zero-sum {p}-subsequence: {}  => s_p(C_p^r) > {}",
                seq.len(),
                rep.has_zero_sum,
                seq.len()
            );
        }
    }
    Ok(())
}
