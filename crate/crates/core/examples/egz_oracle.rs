// Exact generalized EGZ constants for tiny groups.
//
// Run with `cargo run --release --example egz_oracle`.

use egz::seqfile::format_sequence;
use egz::{egz_constant, GroupParams, OracleValue};

fn main() -> Result<(), egz::Error> {
    let cases = [
        (2, 1, 1, 4),
        (5, 1, 1, 10),
        (2, 2, 1, 6),
        (3, 2, 1, 10),
        (2, 3, 1, 10),
        (2, 1, 2, 8),
        (3, 1, 2, 10),
        (2, 2, 2, 10),
    ];
    for (n, r, k, cap) in cases {
        let params = GroupParams::new(n, r, k)?;
        let res = egz_constant(&params, cap)?;
        let value = match res.value {
            OracleValue::Exact(v) => v.to_string(),
            OracleValue::ExceedsCap => format!("> {cap}"),
        };
        println!(
            "s_{}(C_{n}^{r}) = {value}  [{} extension checks]",
            k * n,
            res.work_counter
        );
        print!("{}", format_sequence(&res.extremal_sequence));
    }
    Ok(())
}
