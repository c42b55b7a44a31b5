//! One-shot reproduction of the two e_F benchmark tables at the CI budget
//! (3 seeds, h = 0.02). Rows/columns should be monotone: error falls with
//! more directions, higher top frequency, finer frequency steps and less
//! noise.
//!
//! ```bash
//! cargo run --release --example table_reproduction
//! # pass `full` for the 10-seed, h = 0.01 profile (slow)
//! ```

use farfield::driver::{cmd_tables, TableProfile};

fn main() -> farfield::Result<()> {
    let profile = match std::env::args().nth(1).as_deref() {
        Some("full") => TableProfile::Full,
        _ => TableProfile::Ci,
    };
    let out = std::env::temp_dir().join("farfield-tables-example");
    let (t1, t2) = cmd_tables(profile, 0, &out)?;
    println!("e_F vs (omega_max, L), delta = 0.3:\n{}", t1.to_csv());
    println!("e_F vs (delta_omega, delta), L = 51, omega_max = 40:\n{}", t2.to_csv());
    println!(
        "all trends monotone: {}, CSVs in {}",
        t1.all_monotone() && t2.all_monotone(),
        out.display()
    );
    Ok(())
}
