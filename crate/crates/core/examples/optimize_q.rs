// Tune the Bernoulli parameter q for the largest certified length.
//
// Run with `cargo run --release --example optimize_q`.

use egz::{optimize_q, GroupParams};

fn main() -> Result<(), egz::Error> {
    for k in [2, 3] {
        for r in [5, 10, 20] {
            let params = GroupParams::new(7, r, k)?;
            let (q, n) = optimize_q(&params, 200)?;
            println!("k={k} r={r:>2}: q* = {q:<6} (~{:.4})  N* = {n}", q.to_f64());
        }
    }
    Ok(())
}
