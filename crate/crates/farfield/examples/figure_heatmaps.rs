//! Heatmap emission: reconstructs the two-annulus source, then writes the
//! plotted scalar as an authoritative CSV matrix plus a 16-bit PGM raster
//! with a sidecar describing the linear gray mapping.
//!
//! ```bash
//! cargo run --release --example figure_heatmaps
//! # view out/.../*.pgm with any image viewer, or convert to PNG
//! ```

use farfield::forward::{apply_noise, synthesize_dataset, PhysicsParams};
use farfield::geometry::{cartesian_grid, frequency_grid, theta_circle};
use farfield::indicators::indicator_f_2d;
use farfield::io::figure::{write_figure, PlotScalar};
use farfield::sources;

fn main() -> farfield::Result<()> {
    let spec = sources::example_two();
    let physics = PhysicsParams::elastic(1.0, 1.0)?;
    let clean = synthesize_dataset(&spec, &physics, &theta_circle(51)?, &frequency_grid(0.5, 80)?)?;
    let noisy = apply_noise(&clean, 0.3, 0)?;
    let grid = cartesian_grid([-3.0, -3.0], [3.0, 3.0], 0.02)?;
    let field = indicator_f_2d(&noisy, &grid)?;

    let dir = std::env::temp_dir().join("farfield-figures");
    for component in [1usize, 2] {
        let stem = dir.join(format!("annuli_if_c{component}"));
        let out = write_figure(&field, component, PlotScalar::Real, None, &stem)?;
        println!(
            "component {component}: {} (gray range {:.3} .. {:.3})",
            out.pgm.display(),
            out.vmin,
            out.vmax
        );
    }

    // the reconstruction error image: |S - Re I_f| per node, as a CSV+PGM
    // pair rendered from the magnitude of the difference field
    let diff_values: Vec<_> = field
        .values()
        .chunks_exact(2)
        .enumerate()
        .flat_map(|(idx, v)| {
            let z = field.grid.node(idx);
            let s = spec.eval(z);
            [
                farfield::math::C64::new(v[0].re - s[0], 0.0),
                farfield::math::C64::new(v[1].re - s[1], 0.0),
            ]
        })
        .collect();
    let diff = farfield::indicators::IndicatorField::from_parts(
        field.grid.clone(),
        field.kind,
        diff_values,
        field.provenance.clone(),
    )?;
    let out = write_figure(&diff, 1, PlotScalar::Magnitude, None, &dir.join("annuli_diff_c1"))?;
    println!("difference image: {}", out.pgm.display());
    Ok(())
}
