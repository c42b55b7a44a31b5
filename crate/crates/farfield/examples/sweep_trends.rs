//! Parameter sweeps with trend verdicts: reconstruction error should fall
//! as directions are added, as the top frequency grows, and as the
//! frequency step shrinks.
//!
//! ```bash
//! cargo run --release --example sweep_trends
//! ```

use farfield::driver::cmd_sweep;
use farfield::forward::ProblemKind;
use farfield::io::RunConfig;
use farfield::metrics::TrendAxis;

fn main() -> farfield::Result<()> {
    let mut cfg = RunConfig::defaults(ProblemKind::Elastic2);
    cfg.freq_count = 60; // omega up to 30
    cfg.grid_h = 0.05;
    cfg.seeds_count = 3;
    cfg.output_dir = std::env::temp_dir().join("farfield-sweep-example");

    for (axis, values) in [
        (TrendAxis::DirectionCount, vec![31.0, 51.0, 71.0]),
        (TrendAxis::NoiseDelta, vec![0.05, 0.15, 0.30]),
    ] {
        let sweep = cmd_sweep(&cfg, axis, &values)?;
        println!("sweep over {}:", axis.as_str());
        for (v, r) in sweep.values.iter().zip(&sweep.reports) {
            println!(
                "  {} = {v:6}: e_F = {:.4} ± {:.4} ({} seeds)",
                axis.as_str(),
                r.e_f,
                r.e_f_std,
                r.n_seeds
            );
        }
        println!("  verdict: {:?}", sweep.verdict);
    }
    println!(
        "CSV tables written under {}",
        cfg.output_dir.display()
    );
    Ok(())
}
