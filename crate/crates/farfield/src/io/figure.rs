//! Figure emission: the plotted scalar as an authoritative CSV matrix, a
//! 16-bit binary PGM raster, and a sidecar recording the linear mapping.
//!
//! The raster maps values linearly onto `0..=65535`; the sidecar is the
//! ground truth for the mapping (including a degenerate-range marker when
//! the field is constant). The CSV matrix holds the exact values in
//! shortest round-trip decimals, row per slower axis, column per faster
//! axis, so re-reading it reproduces the plotted scalar bitwise.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::indicators::IndicatorField;

use super::config::fmt_f64;
use super::write_atomic;

/// Which scalar of the complex field gets plotted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlotScalar {
    #[default]
    Real,
    Imag,
    Magnitude,
}

impl PlotScalar {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlotScalar::Real => "real",
            PlotScalar::Imag => "imag",
            PlotScalar::Magnitude => "magnitude",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(PlotScalar::Real),
            "imag" => Ok(PlotScalar::Imag),
            "magnitude" | "abs" => Ok(PlotScalar::Magnitude),
            other => Err(Error::Config(format!("unknown plot scalar `{other}`"))),
        }
    }
}

/// Paths produced by a figure emission.
#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub csv: PathBuf,
    pub pgm: PathBuf,
    pub sidecar: PathBuf,
    pub vmin: f64,
    pub vmax: f64,
}

/// Extracts the plotted scalar of one component, in node order.
pub fn plotted_scalar(field: &IndicatorField, component: usize, scalar: PlotScalar) -> Result<Vec<f64>> {
    if component == 0 || component > field.arity() {
        return Err(Error::invalid(format!(
            "component must be 1..={}, got {component}",
            field.arity()
        )));
    }
    let c = component - 1;
    Ok((0..field.node_count())
        .map(|i| {
            let v = field.value(i)[c];
            match scalar {
                PlotScalar::Real => v.re,
                PlotScalar::Imag => v.im,
                PlotScalar::Magnitude => v.norm(),
            }
        })
        .collect())
}

/// Writes CSV + PGM + sidecar next to `stem` (suffixes `.csv`, `.pgm`,
/// `.txt`). `range` pins the raster mapping; by default it spans the data.
pub fn write_figure(
    field: &IndicatorField,
    component: usize,
    scalar: PlotScalar,
    range: Option<(f64, f64)>,
    stem: &Path,
) -> Result<FigureOutput> {
    let values = plotted_scalar(field, component, scalar)?;
    let axes = field.grid.free_axes();
    if axes.len() != 2 {
        return Err(Error::invalid(
            "figures need a 2D grid or a plane slice",
        ));
    }
    let rows = field.grid.axis_count(axes[0]);
    let cols = field.grid.axis_count(axes[1]);
    debug_assert_eq!(rows * cols, values.len());

    let csv_path = stem.with_extension("csv");
    let mut csv = String::new();
    for r in 0..rows {
        let row: Vec<String> = (0..cols)
            .map(|c| fmt_f64(values[r * cols + c]))
            .collect();
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    write_atomic(&csv_path, csv.as_bytes())?;

    let (vmin, vmax) = match range {
        Some((a, b)) => (a, b),
        None => values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            }),
    };
    let degenerate = !(vmax > vmin);
    let pgm_path = stem.with_extension("pgm");
    let mut pgm: Vec<u8> = format!("P5\n{cols} {rows}\n65535\n").into_bytes();
    for v in &values {
        let level: u16 = if degenerate {
            0
        } else {
            (((v - vmin) / (vmax - vmin) * 65535.0).round().clamp(0.0, 65535.0)) as u16
        };
        pgm.extend_from_slice(&level.to_be_bytes());
    }
    write_atomic(&pgm_path, &pgm)?;

    let sidecar_path = stem.with_extension("txt");
    let (lo, hi) = field.grid.bounds();
    let mut sc = String::new();
    sc.push_str("farfield figure sidecar v1\n");
    sc.push_str(&format!("kind: {}\n", field.kind.as_str()));
    sc.push_str(&format!("component: {component}\n"));
    sc.push_str(&format!("scalar: {}\n", scalar.as_str()));
    sc.push_str(&format!("rows: {rows}\ncols: {cols}\n"));
    sc.push_str(&format!(
        "row_axis: z{} from {} to {}\n",
        axes[0] + 1,
        fmt_f64(lo[axes[0]]),
        fmt_f64(hi[axes[0]])
    ));
    sc.push_str(&format!(
        "col_axis: z{} from {} to {}\n",
        axes[1] + 1,
        fmt_f64(lo[axes[1]]),
        fmt_f64(hi[axes[1]])
    ));
    sc.push_str(&format!("vmin: {}\nvmax: {}\n", fmt_f64(vmin), fmt_f64(vmax)));
    sc.push_str(&format!("degenerate_range: {degenerate}\n"));
    sc.push_str("mapping: level = round((value - vmin) / (vmax - vmin) * 65535), big-endian u16\n");
    write_atomic(&sidecar_path, sc.as_bytes())?;

    Ok(FigureOutput {
        csv: csv_path,
        pgm: pgm_path,
        sidecar: sidecar_path,
        vmin,
        vmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{synthesize_dataset, PhysicsParams};
    use crate::geometry::{frequency_grid, theta_circle, SamplingGrid};
    use crate::indicators::indicator_f_2d;
    use crate::sources;

    fn sample_field() -> IndicatorField {
        let physics = PhysicsParams::elastic(1.0, 1.0).unwrap();
        let dirs = theta_circle(5).unwrap();
        let freqs = frequency_grid(0.5, 6).unwrap();
        let ds = synthesize_dataset(&sources::example_two(), &physics, &dirs, &freqs).unwrap();
        let grid = SamplingGrid::cartesian2([-2.0, -2.0], [2.0, 2.0], 0.5).unwrap();
        indicator_f_2d(&ds, &grid).unwrap()
    }

    #[test]
    fn csv_matrix_reproduces_the_scalar_bitwise() {
        let field = sample_field();
        let dir = std::env::temp_dir().join("farfield-figure-test");
        let out = write_figure(&field, 1, PlotScalar::Real, None, &dir.join("fig")).unwrap();
        let text = std::fs::read_to_string(&out.csv).unwrap();
        let mut back = Vec::new();
        for line in text.lines() {
            for v in line.split(',') {
                back.push(v.parse::<f64>().unwrap());
            }
        }
        let want = plotted_scalar(&field, 1, PlotScalar::Real).unwrap();
        assert_eq!(back, want);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn raster_has_correct_shape_and_range() {
        let field = sample_field();
        let dir = std::env::temp_dir().join("farfield-figure-test-pgm");
        let out = write_figure(&field, 2, PlotScalar::Real, None, &dir.join("fig")).unwrap();
        let bytes = std::fs::read(&out.pgm).unwrap();
        let header = String::from_utf8_lossy(&bytes[..20]).to_string();
        assert!(header.starts_with("P5\n9 9\n65535\n"));
        let data = &bytes[header.find("65535\n").unwrap() + 6..];
        assert_eq!(data.len(), 9 * 9 * 2);
        assert!(out.vmax >= out.vmin);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn constant_field_yields_degenerate_sidecar() {
        let field = sample_field();
        let zeros = IndicatorField::from_parts(
            field.grid.clone(),
            field.kind,
            vec![crate::math::C64::new(0.0, 0.0); field.node_count() * field.arity()],
            field.provenance.clone(),
        )
        .unwrap();
        let dir = std::env::temp_dir().join("farfield-figure-test-const");
        let out = write_figure(&zeros, 1, PlotScalar::Real, None, &dir.join("fig")).unwrap();
        let sc = std::fs::read_to_string(&out.sidecar).unwrap();
        assert!(sc.contains("degenerate_range: true"));
        let bytes = std::fs::read(&out.pgm).unwrap();
        let data_start = bytes.len() - 9 * 9 * 2;
        assert!(bytes[data_start..].iter().all(|&b| b == 0));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn component_bounds_checked() {
        let field = sample_field();
        assert!(plotted_scalar(&field, 0, PlotScalar::Real).is_err());
        assert!(plotted_scalar(&field, 3, PlotScalar::Real).is_err());
    }
}
