//! Indicator field files.
//!
//! Header carries the indicator kind, the grid definition and the full
//! provenance snapshot of the dataset the field came from; the body is one
//! row per node in the grid's canonical enumeration order.

use std::path::Path;

use crate::error::{Error, Result};
use crate::forward::{PhysicsParams, ProblemKind};
use crate::geometry::{Axis, SamplingGrid};
use crate::indicators::{IndicatorField, IndicatorKind, Provenance};
use crate::math::C64;

use super::config::{fmt_f64, parse_problem};
use super::{header_get, split_header, write_atomic};

const MAGIC: &str = "farfield field v1";

/// Serializes an indicator field.
pub fn write_field(path: &Path, field: &IndicatorField) -> Result<()> {
    let p = &field.provenance;
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("kind: {}\n", field.kind.as_str()));
    out.push_str(&format!("problem: {}\n", p.problem.as_str()));
    out.push_str(&format!("source: {}\n", p.source_label));
    match p.physics {
        PhysicsParams::Elastic { lambda, mu } => {
            out.push_str(&format!("physics.lambda: {}\n", fmt_f64(lambda)));
            out.push_str(&format!("physics.mu: {}\n", fmt_f64(mu)));
        }
        PhysicsParams::Em { epsilon, mu } => {
            out.push_str(&format!("physics.epsilon: {}\n", fmt_f64(epsilon)));
            out.push_str(&format!("physics.mu: {}\n", fmt_f64(mu)));
        }
    }
    out.push_str(&format!("directions.count: {}\n", p.direction_count));
    out.push_str(&format!("frequencies.delta: {}\n", fmt_f64(p.freq_delta)));
    out.push_str(&format!("frequencies.count: {}\n", p.freq_count));
    out.push_str(&format!("noise.delta: {}\n", fmt_f64(p.noise_delta)));
    out.push_str(&format!("noise.seed: {}\n", p.seed));
    let (lo, hi) = field.grid.bounds();
    let dim = field.grid.dimension();
    out.push_str(&format!("grid.dim: {dim}\n"));
    out.push_str(&format!("grid.lo: {}\n", join(&lo[..dim])));
    out.push_str(&format!("grid.hi: {}\n", join(&hi[..dim])));
    out.push_str(&format!("grid.h: {}\n", fmt_f64(field.grid.spacing())));
    if let Some((axis, offset)) = field.grid.slice() {
        out.push_str(&format!("slice: {}:{}\n", axis.index() + 1, fmt_f64(offset)));
    }
    out.push('\n');

    let arity = field.arity();
    out.push_str("node");
    for c in 1..=arity {
        out.push_str(&format!(",re_c{c},im_c{c}"));
    }
    out.push('\n');
    for idx in 0..field.node_count() {
        out.push_str(&format!("{idx}"));
        for v in field.value(idx) {
            out.push_str(&format!(",{},{}", fmt_f64(v.re), fmt_f64(v.im)));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Reads an indicator field file back.
pub fn read_field(path: &Path) -> Result<IndicatorField> {
    let text = std::fs::read_to_string(path)?;
    if !text.starts_with(MAGIC) {
        return Err(Error::Config(format!(
            "{} is not a farfield field file",
            path.display()
        )));
    }
    let rest = text.split_once('\n').map(|(_, r)| r).unwrap_or("");
    let (header, body) = split_header(rest);
    let get = |k: &str| {
        header_get(&header, k).ok_or_else(|| Error::Config(format!("field missing `{k}`")))
    };
    let kind = IndicatorKind::parse(get("kind")?)?;
    let problem = parse_problem(get("problem")?)?;
    let physics = match problem {
        ProblemKind::Em3 => PhysicsParams::em(
            parse_num(get("physics.epsilon")?)?,
            parse_num(get("physics.mu")?)?,
        )?,
        _ => PhysicsParams::elastic(
            parse_num(get("physics.lambda")?)?,
            parse_num(get("physics.mu")?)?,
        )?,
    };
    let provenance = Provenance {
        problem,
        physics,
        source_label: get("source")?.to_string(),
        direction_count: parse_usize(get("directions.count")?)?,
        freq_delta: parse_num(get("frequencies.delta")?)?,
        freq_count: parse_usize(get("frequencies.count")?)?,
        noise_delta: parse_num(get("noise.delta")?)?,
        seed: get("noise.seed")?
            .parse()
            .map_err(|_| Error::Config("bad noise.seed".into()))?,
    };
    let dim = parse_usize(get("grid.dim")?)?;
    let lo = parse_vec(get("grid.lo")?, dim)?;
    let hi = parse_vec(get("grid.hi")?, dim)?;
    let h = parse_num(get("grid.h")?)?;
    let grid = if dim == 2 {
        SamplingGrid::cartesian2([lo[0], lo[1]], [hi[0], hi[1]], h)?
    } else {
        let lo3 = [lo[0], lo[1], lo[2]];
        let hi3 = [hi[0], hi[1], hi[2]];
        match header_get(&header, "slice") {
            Some(s) => {
                let (a, o) = s
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("bad slice `{s}`")))?;
                let axis = Axis::from_one_based(parse_usize(a)?)?;
                SamplingGrid::plane_slice(lo3, hi3, axis, parse_num(o)?, h)?
            }
            None => SamplingGrid::cartesian3(lo3, hi3, h)?,
        }
    };

    let arity = kind.arity();
    let mut values = vec![C64::new(0.0, 0.0); grid.node_count() * arity];
    let mut seen = 0usize;
    for line in body.iter().skip(1) {
        let mut parts = line.split(',');
        let idx: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::Config(format!("malformed field row `{line}`")))?;
        if idx >= grid.node_count() {
            return Err(Error::Config(format!("node index out of range: `{line}`")));
        }
        for c in 0..arity {
            let re: f64 = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::Config(format!("malformed field row `{line}`")))?;
            let im: f64 = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::Config(format!("malformed field row `{line}`")))?;
            values[idx * arity + c] = C64::new(re, im);
        }
        seen += 1;
    }
    if seen != grid.node_count() {
        return Err(Error::Config(format!(
            "field has {seen} rows, grid has {} nodes",
            grid.node_count()
        )));
    }
    IndicatorField::from_parts(grid, kind, values, provenance)
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| fmt_f64(*x))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_num(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Config(format!("bad numeric value `{s}`")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Config(format!("bad integer value `{s}`")))
}

fn parse_vec(s: &str, dim: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| parse_num(p.trim()))
        .collect::<Result<_>>()?;
    if v.len() != dim {
        return Err(Error::Config(format!(
            "expected {dim} coordinates, got `{s}`"
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{apply_noise, synthesize_dataset};
    use crate::geometry::{fibonacci_sphere, frequency_grid, plane_slice, theta_circle};
    use crate::indicators::{indicator_e, indicator_f_2d};
    use crate::sources;

    #[test]
    fn field_roundtrip_is_bitwise() {
        let physics = PhysicsParams::elastic(1.0, 1.0).unwrap();
        let dirs = theta_circle(5).unwrap();
        let freqs = frequency_grid(0.5, 6).unwrap();
        let ds = synthesize_dataset(&sources::example_two(), &physics, &dirs, &freqs).unwrap();
        let noisy = apply_noise(&ds, 0.3, 9).unwrap();
        let grid = SamplingGrid::cartesian2([-2.0, -2.0], [2.0, 2.0], 0.25).unwrap();
        let field = indicator_f_2d(&noisy, &grid).unwrap();

        let dir = std::env::temp_dir().join("farfield-field-test");
        let path = dir.join("f.txt");
        write_field(&path, &field).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.values(), field.values());
        assert_eq!(back.kind, field.kind);
        assert_eq!(back.grid, field.grid);
        assert_eq!(back.provenance, field.provenance);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn slice_field_roundtrip() {
        let physics = PhysicsParams::em(1.0, 1.0).unwrap();
        let dirs = fibonacci_sphere(6).unwrap();
        let freqs = frequency_grid(1.0, 4).unwrap();
        let ds = synthesize_dataset(&sources::example_four(), &physics, &dirs, &freqs).unwrap();
        let grid = plane_slice([-1.0; 3], [1.0; 3], Axis::Z2, -0.25, 0.25).unwrap();
        let field = indicator_e(&ds, &grid).unwrap();

        let dir = std::env::temp_dir().join("farfield-field-test-slice");
        let path = dir.join("f.txt");
        write_field(&path, &field).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.values(), field.values());
        assert_eq!(back.grid.slice(), field.grid.slice());
        std::fs::remove_dir_all(&dir).ok();
    }
}
