//! Run configuration: flat `key = value` text with dotted sections.
//!
//! A minimal config names the problem and the source; everything else has
//! problem-appropriate defaults (unit material constants, the standard
//! grids, frequency step 0.5 and the usual noise level). Command-line
//! `--set key=value` pairs override file keys, and the `FARFIELD_OUT`
//! environment variable overrides the output directory.
//!
//! ```text
//! problem = elastic2d            # elastic2d | elastic3d | em3d
//! source.name = example_two
//! directions.count = 51
//! frequencies.delta = 0.5
//! frequencies.count = 80
//! noise.delta = 0.3
//! noise.seed = 7
//! grid.lo = -3,-3
//! grid.hi = 3,3
//! grid.h = 0.01
//! indicators = f,p,s
//! output.dir = out
//! ```
//!
//! 3D runs take `slices = 3:0.25 3:-0.25` (1-based axis, offset) and may
//! set `grid.full_volume = true` to lift the slice guard.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::forward::{PhysicsParams, ProblemKind};
use crate::geometry::{
    fibonacci_sphere, frequency_grid, theta_circle, Axis, DirectionSet, FrequencyGrid,
    SamplingGrid,
};
use crate::indicators::IndicatorKind;
use crate::metrics::ErrorMode;
use crate::sources::{self, ScalarSpec, SourceSpec, SupportShape};

/// Environment variable that overrides `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "FARFIELD_OUT";

/// Source selection plus shape parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceConfig {
    pub name: String,
    pub center: Vec<f64>,
    pub radius: f64,
    pub amplitude: f64,
    pub value: Vec<f64>,
    pub axis: Vec<f64>,
    /// `analytic` uses the registry charge density when one exists,
    /// `zero` forces a vanishing charge term.
    pub charge: String,
}

impl SourceConfig {
    fn named(name: &str) -> Self {
        SourceConfig {
            name: name.to_string(),
            center: vec![0.0, 0.0, 0.0],
            radius: 1.5,
            amplitude: 1.0,
            value: vec![1.0, 0.0, 0.0],
            axis: vec![0.0, 0.0, 1.0],
            charge: "analytic".into(),
        }
    }

    fn c2(&self) -> [f64; 2] {
        [self.center[0], self.center[1]]
    }

    fn c3(&self) -> [f64; 3] {
        [self.center[0], self.center[1], self.center[2]]
    }

    fn v3(&self) -> [f64; 3] {
        let mut v = [0.0; 3];
        for (i, x) in self.value.iter().take(3).enumerate() {
            v[i] = *x;
        }
        v
    }

    /// Builds the source for the given ambient dimension.
    pub fn build(&self, dim: usize) -> Result<SourceSpec> {
        let spec = match self.name.as_str() {
            "example_one" => sources::example_one(SupportShape::Disk {
                center: self.c2(),
                radius: self.radius,
            })?,
            "example_two" => sources::example_two(),
            "example_three" => sources::example_three(),
            "example_four" => sources::example_four(),
            "zero" => {
                if dim == 2 {
                    sources::zero2()
                } else {
                    sources::zero3()
                }
            }
            "constant_disk" => sources::constant_on(
                SupportShape::Disk {
                    center: self.c2(),
                    radius: self.radius,
                },
                self.v3(),
            ),
            "constant_ball" => sources::constant_on(
                SupportShape::Ball {
                    center: self.c3(),
                    radius: self.radius,
                },
                self.v3(),
            ),
            "grad_perp_bump" => sources::grad_perp_bump(self.c2(), self.radius, self.amplitude),
            "grad_bump" => sources::grad_bump3(self.c3(), self.radius, self.amplitude),
            "curl_bump" => {
                let mut a = [0.0; 3];
                for (i, x) in self.axis.iter().take(3).enumerate() {
                    a[i] = *x;
                }
                sources::curl_bump3(self.c3(), self.radius, self.amplitude, a)
            }
            "bump" => sources::bump3(self.c3(), self.radius, self.v3()),
            other => {
                return Err(Error::Config(format!("unknown source name `{other}`")));
            }
        };
        if spec.dimension() != dim {
            return Err(Error::Config(format!(
                "source `{}` is {}D but the problem needs {}D",
                self.name,
                spec.dimension(),
                dim
            )));
        }
        Ok(spec)
    }

    /// Frequency-scaled charge density `q = div J` for the charge
    /// indicator, when the registry stores one.
    pub fn charge_density(&self) -> Result<ScalarSpec> {
        if self.charge == "zero" {
            return Ok(ScalarSpec::zero());
        }
        match self.name.as_str() {
            "example_four" => Ok(ScalarSpec::example_four_div()),
            "grad_bump" => Ok(ScalarSpec::grad_bump3_div(
                self.c3(),
                self.radius,
                self.amplitude,
            )),
            "bump" => Ok(ScalarSpec::bump3_div(self.c3(), self.radius, self.v3())),
            // divergence-free registry sources have zero charge
            "zero" | "example_three" | "curl_bump" => Ok(ScalarSpec::zero()),
            other => Err(Error::Config(format!(
                "source `{other}` has no analytic charge density; set source.charge = zero \
                 to use a vanishing charge term"
            ))),
        }
    }
}

/// Full run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub source: SourceConfig,
    pub lambda: f64,
    pub mu: f64,
    pub epsilon: f64,
    pub direction_count: usize,
    pub freq_delta: f64,
    pub freq_count: usize,
    pub noise_delta: f64,
    pub seed: u64,
    /// Seed replicates for sweeps/tables: seeds `seed .. seed + seeds_count`.
    pub seeds_count: usize,
    pub grid_lo: Vec<f64>,
    pub grid_hi: Vec<f64>,
    pub grid_h: f64,
    pub slices: Vec<(Axis, f64)>,
    pub full_volume: bool,
    pub indicators: Vec<IndicatorKind>,
    pub output_dir: PathBuf,
    pub error_mode: ErrorMode,
    pub threshold: f64,
    pub exclude_band: f64,
}

impl RunConfig {
    /// Problem-appropriate defaults; a usable config only needs the source.
    pub fn defaults(problem: ProblemKind) -> Self {
        let (grid_lo, grid_hi, noise_delta, indicators, slices) = match problem {
            ProblemKind::Elastic2 => (
                vec![-3.0, -3.0],
                vec![3.0, 3.0],
                0.3,
                vec![IndicatorKind::F2d],
                vec![],
            ),
            ProblemKind::Elastic3 => (
                vec![-1.0, -1.0, -1.0],
                vec![1.0, 1.0, 1.0],
                0.3,
                vec![IndicatorKind::F3d],
                vec![(Axis::Z3, 0.0)],
            ),
            ProblemKind::Em3 => (
                vec![-1.0, -1.0, -1.0],
                vec![1.0, 1.0, 1.0],
                0.1,
                vec![IndicatorKind::E],
                vec![(Axis::Z3, 0.0)],
            ),
        };
        RunConfig {
            problem,
            source: SourceConfig::named(match problem {
                ProblemKind::Elastic2 => "example_two",
                ProblemKind::Elastic3 => "bump",
                ProblemKind::Em3 => "example_four",
            }),
            lambda: 1.0,
            mu: 1.0,
            epsilon: 1.0,
            direction_count: if problem == ProblemKind::Elastic2 { 51 } else { 151 },
            freq_delta: 0.5,
            freq_count: 80,
            noise_delta,
            seed: 0,
            seeds_count: 10,
            grid_lo,
            grid_hi,
            grid_h: 0.01,
            slices,
            full_volume: false,
            indicators,
            output_dir: PathBuf::from("out"),
            error_mode: ErrorMode::RealPart,
            threshold: 1.5,
            exclude_band: 0.0,
        }
    }

    /// Parses config text; `problem` must come first so defaults apply.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let map: BTreeMap<&str, &str> = pairs
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        let problem = match map.get("problem") {
            Some(p) => parse_problem(p)?,
            None => return Err(Error::Config("missing `problem` key".into())),
        };
        let mut cfg = RunConfig::defaults(problem);
        for (k, v) in &pairs {
            cfg.apply(k, v)?;
        }
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                cfg.output_dir = PathBuf::from(dir);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Applies one `key = value` override.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("bad value for {what}: `{value}`"));
        match key {
            "problem" => self.problem = parse_problem(value)?,
            "source.name" => self.source.name = value.to_string(),
            "source.center" => self.source.center = parse_floats(value).ok_or_else(|| bad(key))?,
            "source.radius" => self.source.radius = value.parse().map_err(|_| bad(key))?,
            "source.amplitude" => self.source.amplitude = value.parse().map_err(|_| bad(key))?,
            "source.value" => self.source.value = parse_floats(value).ok_or_else(|| bad(key))?,
            "source.axis" => self.source.axis = parse_floats(value).ok_or_else(|| bad(key))?,
            "source.charge" => self.source.charge = value.to_string(),
            "physics.lambda" => self.lambda = value.parse().map_err(|_| bad(key))?,
            "physics.mu" => self.mu = value.parse().map_err(|_| bad(key))?,
            "physics.epsilon" => self.epsilon = value.parse().map_err(|_| bad(key))?,
            "directions.count" => self.direction_count = value.parse().map_err(|_| bad(key))?,
            "frequencies.delta" => self.freq_delta = parse_fraction(value).ok_or_else(|| bad(key))?,
            "frequencies.count" => self.freq_count = value.parse().map_err(|_| bad(key))?,
            "noise.delta" => self.noise_delta = value.parse().map_err(|_| bad(key))?,
            "noise.seed" => self.seed = value.parse().map_err(|_| bad(key))?,
            "seeds.count" => self.seeds_count = value.parse().map_err(|_| bad(key))?,
            "grid.lo" => self.grid_lo = parse_floats(value).ok_or_else(|| bad(key))?,
            "grid.hi" => self.grid_hi = parse_floats(value).ok_or_else(|| bad(key))?,
            "grid.h" => self.grid_h = value.parse().map_err(|_| bad(key))?,
            "grid.full_volume" => self.full_volume = value.parse().map_err(|_| bad(key))?,
            "slices" => {
                let mut slices = Vec::new();
                for part in value.split_whitespace() {
                    let (a, o) = part
                        .split_once(':')
                        .ok_or_else(|| Error::Config(format!("slice `{part}` is not axis:offset")))?;
                    let axis = Axis::from_one_based(a.parse().map_err(|_| bad(key))?)?;
                    slices.push((axis, o.parse().map_err(|_| bad(key))?));
                }
                self.slices = slices;
            }
            "indicators" => {
                let mut kinds = Vec::new();
                for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    kinds.push(IndicatorKind::parse(part)?);
                }
                self.indicators = kinds;
            }
            "output.dir" => self.output_dir = PathBuf::from(value),
            "metrics.error_mode" => self.error_mode = ErrorMode::parse(value)?,
            "metrics.threshold" => self.threshold = value.parse().map_err(|_| bad(key))?,
            "metrics.exclude_band" => self.exclude_band = value.parse().map_err(|_| bad(key))?,
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Internal consistency: dimensions, indicator kinds, grid shape.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dimension();
        if self.grid_lo.len() != dim || self.grid_hi.len() != dim {
            return Err(Error::Config(format!(
                "grid bounds must have {dim} coordinates for {}",
                self.problem.as_str()
            )));
        }
        for kind in &self.indicators {
            let ok = match self.problem {
                ProblemKind::Elastic2 => matches!(
                    kind,
                    IndicatorKind::F2d | IndicatorKind::P2d | IndicatorKind::S2d
                ),
                ProblemKind::Elastic3 => matches!(
                    kind,
                    IndicatorKind::F3d | IndicatorKind::P3d | IndicatorKind::S3d
                ),
                ProblemKind::Em3 => matches!(
                    kind,
                    IndicatorKind::E | IndicatorKind::H | IndicatorKind::Rho
                ),
            };
            if !ok {
                return Err(Error::Config(format!(
                    "indicator `{}` does not apply to {} data",
                    kind.as_str(),
                    self.problem.as_str()
                )));
            }
        }
        if dim == 3 && self.slices.is_empty() && !self.full_volume {
            return Err(Error::Config(
                "3D runs need `slices = axis:offset ...` (or grid.full_volume = true)".into(),
            ));
        }
        if self.seeds_count == 0 {
            return Err(Error::Config("seeds.count must be >= 1".into()));
        }
        self.physics()?;
        self.source.build(dim)?;
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        if self.problem == ProblemKind::Elastic2 {
            2
        } else {
            3
        }
    }

    pub fn physics(&self) -> Result<PhysicsParams> {
        match self.problem {
            ProblemKind::Em3 => PhysicsParams::em(self.epsilon, self.mu),
            _ => PhysicsParams::elastic(self.lambda, self.mu),
        }
    }

    pub fn build_source(&self) -> Result<SourceSpec> {
        self.source.build(self.dimension())
    }

    pub fn direction_set(&self) -> Result<DirectionSet> {
        if self.dimension() == 2 {
            theta_circle(self.direction_count)
        } else {
            fibonacci_sphere(self.direction_count)
        }
    }

    pub fn frequencies(&self) -> Result<FrequencyGrid> {
        frequency_grid(self.freq_delta, self.freq_count)
    }

    /// Evaluation grids: the rectangle in 2D, one grid per slice in 3D
    /// (or the full box when `grid.full_volume` is set).
    pub fn grids(&self) -> Result<Vec<(String, SamplingGrid)>> {
        if self.dimension() == 2 {
            let g = SamplingGrid::cartesian2(
                [self.grid_lo[0], self.grid_lo[1]],
                [self.grid_hi[0], self.grid_hi[1]],
                self.grid_h,
            )?;
            return Ok(vec![(String::new(), g)]);
        }
        let lo = [self.grid_lo[0], self.grid_lo[1], self.grid_lo[2]];
        let hi = [self.grid_hi[0], self.grid_hi[1], self.grid_hi[2]];
        if self.slices.is_empty() {
            let g = SamplingGrid::cartesian3(lo, hi, self.grid_h)?;
            return Ok(vec![("volume".into(), g)]);
        }
        self.slices
            .iter()
            .map(|(axis, offset)| {
                let g = SamplingGrid::plane_slice(lo, hi, *axis, *offset, self.grid_h)?;
                Ok((format!("z{}_{}", axis.index() + 1, offset), g))
            })
            .collect()
    }

    /// Key/value snapshot embedded in every output file.
    pub fn snapshot(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("problem".into(), self.problem.as_str().to_string()),
            ("source".into(), self.source.name.clone()),
        ];
        match self.problem {
            ProblemKind::Em3 => {
                kv.push(("physics.epsilon".into(), fmt_f64(self.epsilon)));
                kv.push(("physics.mu".into(), fmt_f64(self.mu)));
            }
            _ => {
                kv.push(("physics.lambda".into(), fmt_f64(self.lambda)));
                kv.push(("physics.mu".into(), fmt_f64(self.mu)));
            }
        }
        kv.push(("directions.count".into(), self.direction_count.to_string()));
        kv.push(("frequencies.delta".into(), fmt_f64(self.freq_delta)));
        kv.push(("frequencies.count".into(), self.freq_count.to_string()));
        kv.push(("noise.delta".into(), fmt_f64(self.noise_delta)));
        kv.push(("noise.seed".into(), self.seed.to_string()));
        kv.push(("grid.lo".into(), join_floats(&self.grid_lo)));
        kv.push(("grid.hi".into(), join_floats(&self.grid_hi)));
        kv.push(("grid.h".into(), fmt_f64(self.grid_h)));
        if !self.slices.is_empty() {
            let s: Vec<String> = self
                .slices
                .iter()
                .map(|(a, o)| format!("{}:{}", a.index() + 1, fmt_f64(*o)))
                .collect();
            kv.push(("slices".into(), s.join(" ")));
        }
        kv.push(("metrics.error_mode".into(), self.error_mode.as_str().into()));
        kv
    }
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn join_floats(v: &[f64]) -> String {
    v.iter()
        .map(|x| fmt_f64(*x))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_floats(s: &str) -> Option<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().ok())
        .collect()
}

/// Accepts `0.125` or `1/8`.
fn parse_fraction(s: &str) -> Option<f64> {
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().ok()?;
        let d: f64 = d.trim().parse().ok()?;
        if d == 0.0 {
            return None;
        }
        return Some(n / d);
    }
    s.parse().ok()
}

pub(crate) fn parse_problem(s: &str) -> Result<ProblemKind> {
    match s {
        "elastic2d" => Ok(ProblemKind::Elastic2),
        "elastic3d" => Ok(ProblemKind::Elastic3),
        "em3d" => Ok(ProblemKind::Em3),
        other => Err(Error::Config(format!("unknown problem `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_elastic_config_gets_paper_defaults() {
        let cfg = RunConfig::parse("problem = elastic2d\nsource.name = example_two\n").unwrap();
        assert_eq!(cfg.lambda, 1.0);
        assert_eq!(cfg.mu, 1.0);
        assert_eq!(cfg.freq_delta, 0.5);
        assert_eq!(cfg.noise_delta, 0.3);
        assert_eq!(cfg.grid_lo, vec![-3.0, -3.0]);
        assert_eq!(cfg.grid_h, 0.01);
        assert_eq!(cfg.error_mode, ErrorMode::RealPart);
    }

    #[test]
    fn em_defaults_and_overrides() {
        let text = "problem = em3d\nsource.name = example_three\ndirections.count = 151\n\
                    frequencies.count = 80\nslices = 1:0.25 1:-0.25\nnoise.delta = 0.1\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.noise_delta, 0.1);
        assert_eq!(cfg.grid_lo, vec![-1.0, -1.0, -1.0]);
        assert_eq!(cfg.slices.len(), 2);
        assert_eq!(cfg.slices[0].0, Axis::Z1);
        let fg = cfg.frequencies().unwrap();
        assert!((fg.max_value() - 40.0).abs() < 1e-12);
    }

    #[test]
    fn fraction_frequency_steps_parse() {
        let mut cfg = RunConfig::defaults(ProblemKind::Elastic2);
        cfg.apply("frequencies.delta", "1/8").unwrap();
        assert_eq!(cfg.freq_delta, 0.125);
    }

    #[test]
    fn mismatched_indicators_are_rejected() {
        let text = "problem = elastic2d\nsource.name = example_two\nindicators = E\n";
        assert!(RunConfig::parse(text).is_err());
        let text = "problem = em3d\nsource.name = example_four\nindicators = f\n";
        assert!(RunConfig::parse(text).is_err());
    }

    #[test]
    fn source_dimension_must_match_problem() {
        let text = "problem = em3d\nsource.name = example_two\n";
        assert!(RunConfig::parse(text).is_err());
    }

    #[test]
    fn missing_slices_for_3d_is_an_error() {
        let text = "problem = em3d\nsource.name = example_four\nslices =\n";
        assert!(RunConfig::parse(text).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = "problem = elastic2d\nsource.name = example_two\nbogus.key = 1\n";
        assert!(RunConfig::parse(text).is_err());
    }

    #[test]
    fn charge_selection() {
        let mut sc = SourceConfig::named("example_four");
        assert!(!sc.charge_density().unwrap().is_zero());
        sc.charge = "zero".into();
        assert!(sc.charge_density().unwrap().is_zero());
        let sc = SourceConfig::named("constant_ball");
        assert!(sc.charge_density().is_err());
    }
}
