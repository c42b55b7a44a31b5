//! Far-field dataset files: `key: value` header, blank line, CSV body.
//!
//! The body carries one row per record, `l` and the 1-based frequency
//! index `m` first, then the real/imaginary pairs of the payload blocks
//! (`p`/`s` for elastic, `e`/`h` for electromagnetic data). Directions and
//! frequencies are regenerated from the header (their constructions are
//! deterministic), so the file is self-contained.

use std::path::Path;

use crate::error::{Error, Result};
use crate::forward::{FarFieldDataset, PhysicsParams, ProblemKind, RecordPayload};
use crate::geometry::{fibonacci_sphere, frequency_grid, theta_circle};
use crate::math::C64;

use super::config::{fmt_f64, parse_problem};
use super::{header_get, split_header, write_atomic};

const MAGIC: &str = "farfield dataset v1";

fn payload_columns(problem: ProblemKind) -> &'static [&'static str] {
    match problem {
        ProblemKind::Elastic2 => &["p1", "p2", "s1", "s2"],
        ProblemKind::Elastic3 => &["p1", "p2", "p3", "s1", "s2", "s3"],
        ProblemKind::Em3 => &["e1", "e2", "e3", "h1", "h2", "h3"],
    }
}

fn payload_values(r: &RecordPayload) -> Vec<C64> {
    match r {
        RecordPayload::Elastic2 { u_p, u_s } => vec![u_p[0], u_p[1], u_s[0], u_s[1]],
        RecordPayload::Elastic3 { u_p, u_s } => {
            vec![u_p[0], u_p[1], u_p[2], u_s[0], u_s[1], u_s[2]]
        }
        RecordPayload::Em { e, h } => vec![e[0], e[1], e[2], h[0], h[1], h[2]],
    }
}

/// Serializes a dataset.
pub fn write_dataset(path: &Path, dataset: &FarFieldDataset) -> Result<()> {
    let problem = dataset.problem();
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("problem: {}\n", problem.as_str()));
    out.push_str(&format!("source: {}\n", dataset.source_label));
    match dataset.physics {
        PhysicsParams::Elastic { lambda, mu } => {
            out.push_str(&format!("physics.lambda: {}\n", fmt_f64(lambda)));
            out.push_str(&format!("physics.mu: {}\n", fmt_f64(mu)));
        }
        PhysicsParams::Em { epsilon, mu } => {
            out.push_str(&format!("physics.epsilon: {}\n", fmt_f64(epsilon)));
            out.push_str(&format!("physics.mu: {}\n", fmt_f64(mu)));
        }
    }
    out.push_str(&format!("directions.count: {}\n", dataset.directions.len()));
    out.push_str(&format!(
        "frequencies.delta: {}\n",
        fmt_f64(dataset.frequencies.delta())
    ));
    out.push_str(&format!(
        "frequencies.count: {}\n",
        dataset.frequencies.count()
    ));
    out.push_str(&format!("noise.delta: {}\n", fmt_f64(dataset.noise_delta)));
    out.push_str(&format!("noise.seed: {}\n", dataset.seed));
    out.push('\n');

    out.push_str("l,m");
    for c in payload_columns(problem) {
        out.push_str(&format!(",re_{c},im_{c}"));
    }
    out.push('\n');
    let count = dataset.frequencies.count();
    for l in 0..dataset.directions.len() {
        for m0 in 0..count {
            out.push_str(&format!("{l},{}", m0 + 1));
            for v in payload_values(dataset.record(l, m0)) {
                out.push_str(&format!(",{},{}", fmt_f64(v.re), fmt_f64(v.im)));
            }
            out.push('\n');
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Reads a dataset file back.
pub fn read_dataset(path: &Path) -> Result<FarFieldDataset> {
    let text = std::fs::read_to_string(path)?;
    if !text.starts_with(MAGIC) {
        return Err(Error::Config(format!(
            "{} is not a farfield dataset file",
            path.display()
        )));
    }
    let rest = text.split_once('\n').map(|(_, r)| r).unwrap_or("");
    let (header, body) = split_header(rest);
    let get = |k: &str| {
        header_get(&header, k).ok_or_else(|| Error::Config(format!("dataset missing `{k}`")))
    };
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
    let l_count: usize = get("directions.count")?
        .parse()
        .map_err(|_| Error::Config("bad directions.count".into()))?;
    let directions = if problem == ProblemKind::Elastic2 {
        theta_circle(l_count)?
    } else {
        fibonacci_sphere(l_count)?
    };
    let frequencies = frequency_grid(
        parse_num(get("frequencies.delta")?)?,
        get("frequencies.count")?
            .parse()
            .map_err(|_| Error::Config("bad frequencies.count".into()))?,
    )?;
    let noise_delta = parse_num(get("noise.delta")?)?;
    let seed: u64 = get("noise.seed")?
        .parse()
        .map_err(|_| Error::Config("bad noise.seed".into()))?;
    let source_label = get("source")?.to_string();

    let ncols = payload_columns(problem).len();
    let mut records = vec![None; l_count * frequencies.count()];
    for line in body.iter().skip(1) {
        let mut parts = line.split(',');
        let l: usize = next_field(&mut parts, line)?;
        let m: usize = next_field(&mut parts, line)?;
        if l >= l_count || m == 0 || m > frequencies.count() {
            return Err(Error::Config(format!("record index out of range: `{line}`")));
        }
        let mut vals = Vec::with_capacity(ncols);
        for _ in 0..ncols {
            let re: f64 = next_field(&mut parts, line)?;
            let im: f64 = next_field(&mut parts, line)?;
            vals.push(C64::new(re, im));
        }
        let payload = match problem {
            ProblemKind::Elastic2 => RecordPayload::Elastic2 {
                u_p: [vals[0], vals[1]],
                u_s: [vals[2], vals[3]],
            },
            ProblemKind::Elastic3 => RecordPayload::Elastic3 {
                u_p: [vals[0], vals[1], vals[2]],
                u_s: [vals[3], vals[4], vals[5]],
            },
            ProblemKind::Em3 => RecordPayload::Em {
                e: [vals[0], vals[1], vals[2]],
                h: [vals[3], vals[4], vals[5]],
            },
        };
        records[l * frequencies.count() + (m - 1)] = Some(payload);
    }
    let records: Option<Vec<RecordPayload>> = records.into_iter().collect();
    let records =
        records.ok_or_else(|| Error::Config("dataset body is missing records".into()))?;
    FarFieldDataset::from_records(
        physics,
        directions,
        frequencies,
        records,
        noise_delta,
        seed,
        source_label,
    )
}

fn parse_num(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Config(format!("bad numeric value `{s}`")))
}

fn next_field<T: std::str::FromStr>(
    parts: &mut std::str::Split<'_, char>,
    line: &str,
) -> Result<T> {
    parts
        .next()
        .and_then(|p| p.trim().parse().ok())
        .ok_or_else(|| Error::Config(format!("malformed record row `{line}`")))
}
