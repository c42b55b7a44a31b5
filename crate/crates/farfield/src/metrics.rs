//! Reconstruction-quality metrics: relative L² error, threshold masks,
//! band-restricted sup norms and parameter-sweep trend verdicts.
//!
//! The relative error of a field `I` against a reference `R` over the grid
//! `G` is `e_F = ‖I − R‖_{L²(G)} / ‖R‖_{L²(G)}`, with discrete norms taken
//! as plain node sums times the cell measure. Vector fields aggregate all
//! components into one norm; per-component values are reported alongside.
//!
//! Two comparison modes exist: `RealPart` drops the imaginary part of the
//! indicator before differencing (the convention behind the reported error
//! tables and the plotted images), `Complex` uses the full complex
//! difference. Every report carries the mode it was computed under.

use crate::error::{Error, Result};
use crate::indicators::IndicatorField;
use crate::sources::{DerivKind, SourceSpec};

/// How indicator values are compared against (real) references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorMode {
    /// Compare `Re(I)` against the reference.
    #[default]
    RealPart,
    /// Compare the full complex difference.
    Complex,
}

impl ErrorMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorMode::RealPart => "real",
            ErrorMode::Complex => "complex",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" | "real_part" => Ok(ErrorMode::RealPart),
            "complex" => Ok(ErrorMode::Complex),
            other => Err(Error::Config(format!("unknown error mode `{other}`"))),
        }
    }
}

/// What an indicator field is compared against.
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    /// The source itself.
    Source(&'a SourceSpec),
    /// A first derivative of the source, scaled (e.g. `-1` for the
    /// shear indicator, which approximates `-curl S`).
    Derivative {
        spec: &'a SourceSpec,
        kind: DerivKind,
        scale: f64,
    },
    /// Another field on the same grid (its real part in `RealPart` mode).
    Field(&'a IndicatorField),
}

impl<'a> Reference<'a> {
    fn source_spec(&self) -> Option<&'a SourceSpec> {
        match self {
            Reference::Source(s) => Some(s),
            Reference::Derivative { spec, .. } => Some(spec),
            Reference::Field(_) => None,
        }
    }

    /// Real reference components at a node (complex references are reduced
    /// according to the mode by the caller).
    fn eval(&self, z: [f64; 3], arity: usize, out: &mut [f64; 3]) -> Result<()> {
        match self {
            Reference::Source(spec) => {
                let v = spec.eval(z);
                out[..arity].copy_from_slice(&v[..arity]);
            }
            Reference::Derivative { spec, kind, scale } => {
                let d = spec.derivative(z, *kind)?;
                for c in 0..arity {
                    out[c] = scale * d.values[c];
                }
            }
            Reference::Field(_) => unreachable!("field references are resolved separately"),
        }
        Ok(())
    }

    fn check_compatible(&self, field: &IndicatorField) -> Result<()> {
        match self {
            Reference::Field(other) => {
                if other.grid != field.grid {
                    return Err(Error::DimensionMismatch(
                        "reference field lives on a different grid".into(),
                    ));
                }
                if other.arity() != field.arity() {
                    return Err(Error::DimensionMismatch(
                        "reference field has a different component count".into(),
                    ));
                }
            }
            Reference::Derivative { kind, .. } => {
                let expect = match kind {
                    DerivKind::Div | DerivKind::DivPerp => 1,
                    DerivKind::Curl => 3,
                };
                if field.arity() != expect {
                    return Err(Error::DimensionMismatch(format!(
                        "{kind:?} reference is {expect}-component, field has {}",
                        field.arity()
                    )));
                }
            }
            Reference::Source(spec) => {
                if field.arity() != spec.dimension() {
                    return Err(Error::DimensionMismatch(format!(
                        "source reference has {} components, field has {}",
                        spec.dimension(),
                        field.arity()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Aggregate and per-component relative L² errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub e_f: f64,
    pub per_component: Vec<f64>,
    pub mode: ErrorMode,
}

/// `‖I − R‖ / ‖R‖` with all components aggregated.
pub fn relative_l2_error(
    field: &IndicatorField,
    reference: &Reference,
    mode: ErrorMode,
) -> Result<f64> {
    Ok(relative_l2_report(field, reference, mode)?.e_f)
}

/// Aggregate plus per-component relative errors.
pub fn relative_l2_report(
    field: &IndicatorField,
    reference: &Reference,
    mode: ErrorMode,
) -> Result<ErrorReport> {
    reference.check_compatible(field)?;
    let arity = field.arity();
    let mut num = vec![0.0f64; arity];
    let mut den = vec![0.0f64; arity];
    match reference {
        Reference::Field(other) => {
            for (a, b) in field.values().chunks_exact(arity).zip(other.values().chunks_exact(arity))
            {
                for c in 0..arity {
                    match mode {
                        ErrorMode::RealPart => {
                            num[c] += (a[c].re - b[c].re) * (a[c].re - b[c].re);
                            den[c] += b[c].re * b[c].re;
                        }
                        ErrorMode::Complex => {
                            num[c] += (a[c] - b[c]).norm_sqr();
                            den[c] += b[c].norm_sqr();
                        }
                    }
                }
            }
        }
        _ => {
            let mut r = [0.0f64; 3];
            for (idx, a) in field.values().chunks_exact(arity).enumerate() {
                let z = field.grid.node(idx);
                reference.eval(z, arity, &mut r)?;
                for c in 0..arity {
                    match mode {
                        ErrorMode::RealPart => {
                            num[c] += (a[c].re - r[c]) * (a[c].re - r[c]);
                        }
                        ErrorMode::Complex => {
                            let d = a[c] - r[c];
                            num[c] += d.norm_sqr();
                        }
                    }
                    den[c] += r[c] * r[c];
                }
            }
        }
    }
    let total_den: f64 = den.iter().sum();
    if total_den == 0.0 {
        return Err(Error::ZeroReferenceNorm);
    }
    let total_num: f64 = num.iter().sum();
    let per_component = num
        .iter()
        .zip(&den)
        .map(|(n, d)| if *d == 0.0 { f64::NAN } else { (n / d).sqrt() })
        .collect();
    Ok(ErrorReport {
        e_f: (total_num / total_den).sqrt(),
        per_component,
        mode,
    })
}

/// Threshold parameter for difference masks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    pub epsilon: f64,
}

impl ThresholdSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid("threshold must be positive"));
        }
        Ok(ThresholdSpec { epsilon })
    }
}

/// Binary per-component mask: 1 where `|(R − I)_c(z)| > ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMask {
    pub arity: usize,
    pub mask: Vec<u8>,
    pub epsilon: f64,
}

impl ThresholdMask {
    /// Fraction of flagged entries over all nodes and components.
    pub fn fraction(&self) -> f64 {
        if self.mask.is_empty() {
            return 0.0;
        }
        self.mask.iter().map(|&b| b as usize).sum::<usize>() as f64 / self.mask.len() as f64
    }
}

/// Marks node components whose reconstruction error exceeds the threshold.
pub fn threshold_diff(
    field: &IndicatorField,
    reference: &Reference,
    spec: ThresholdSpec,
    mode: ErrorMode,
) -> Result<ThresholdMask> {
    reference.check_compatible(field)?;
    let arity = field.arity();
    let mut mask = Vec::with_capacity(field.node_count() * arity);
    let mut r = [0.0f64; 3];
    for (idx, a) in field.values().chunks_exact(arity).enumerate() {
        match reference {
            Reference::Field(other) => {
                let b = other.value(idx);
                for c in 0..arity {
                    let d = match mode {
                        ErrorMode::RealPart => (b[c].re - a[c].re).abs(),
                        ErrorMode::Complex => (b[c] - a[c]).norm(),
                    };
                    mask.push(u8::from(d > spec.epsilon));
                }
            }
            _ => {
                let z = field.grid.node(idx);
                reference.eval(z, arity, &mut r)?;
                for c in 0..arity {
                    let d = match mode {
                        ErrorMode::RealPart => (r[c] - a[c].re).abs(),
                        ErrorMode::Complex => (a[c] - r[c]).norm(),
                    };
                    mask.push(u8::from(d > spec.epsilon));
                }
            }
        }
    }
    Ok(ThresholdMask {
        arity,
        mask,
        epsilon: spec.epsilon,
    })
}

/// Relative L² error restricted to nodes farther than `exclude_band` from
/// the support boundary of the reference source.
pub fn relative_l2_error_excluding_band(
    field: &IndicatorField,
    reference: &Reference,
    exclude_band: f64,
    mode: ErrorMode,
) -> Result<f64> {
    if exclude_band < 0.0 {
        return Err(Error::invalid("exclusion band must be nonnegative"));
    }
    let spec = reference.source_spec().ok_or_else(|| {
        Error::invalid("band-restricted error needs a source-backed reference")
    })?;
    reference.check_compatible(field)?;
    let arity = field.arity();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    let mut kept = 0usize;
    let mut r = [0.0f64; 3];
    for (idx, a) in field.values().chunks_exact(arity).enumerate() {
        let z = field.grid.node(idx);
        if spec.support().boundary_distance(z) <= exclude_band {
            continue;
        }
        kept += 1;
        reference.eval(z, arity, &mut r)?;
        for c in 0..arity {
            match mode {
                ErrorMode::RealPart => num += (a[c].re - r[c]) * (a[c].re - r[c]),
                ErrorMode::Complex => num += (a[c] - r[c]).norm_sqr(),
            }
            den += r[c] * r[c];
        }
    }
    if kept == 0 {
        return Err(Error::EmptyRegion("exclusion band covers the whole grid".into()));
    }
    if den == 0.0 {
        return Err(Error::ZeroReferenceNorm);
    }
    Ok((num / den).sqrt())
}

/// Maximum node error over nodes farther than `exclude_band` from the
/// support boundary of the reference source.
pub fn region_restricted_sup(
    field: &IndicatorField,
    reference: &Reference,
    exclude_band: f64,
    mode: ErrorMode,
) -> Result<f64> {
    if exclude_band < 0.0 {
        return Err(Error::invalid("exclusion band must be nonnegative"));
    }
    let spec = reference.source_spec().ok_or_else(|| {
        Error::invalid("band-restricted sup needs a source-backed reference")
    })?;
    reference.check_compatible(field)?;
    let arity = field.arity();
    let mut sup: Option<f64> = None;
    let mut r = [0.0f64; 3];
    for (idx, a) in field.values().chunks_exact(arity).enumerate() {
        let z = field.grid.node(idx);
        if spec.support().boundary_distance(z) <= exclude_band {
            continue;
        }
        reference.eval(z, arity, &mut r)?;
        for c in 0..arity {
            let d = match mode {
                ErrorMode::RealPart => (a[c].re - r[c]).abs(),
                ErrorMode::Complex => (a[c] - r[c]).norm(),
            };
            sup = Some(sup.map_or(d, |s| s.max(d)));
        }
    }
    sup.ok_or_else(|| Error::EmptyRegion("exclusion band covers the whole grid".into()))
}

/// One quality measurement with its parameter snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub e_f: f64,
    /// Standard deviation over seed replicates (0 for a single run).
    pub e_f_std: f64,
    pub n_seeds: usize,
    pub per_component: Vec<f64>,
    pub sup_error_interior: Option<f64>,
    pub threshold_fraction: Option<f64>,
    pub error_mode: ErrorMode,
    pub direction_count: usize,
    pub freq_count: usize,
    pub freq_delta: f64,
    pub noise_delta: f64,
    pub seed: u64,
}

impl MetricsReport {
    /// Frequency-grid maximum, `Λ·Δ`.
    pub fn omega_max(&self) -> f64 {
        self.freq_count as f64 * self.freq_delta
    }
}

/// Sweep axis for trend verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendAxis {
    /// e_F should not increase as L grows.
    DirectionCount,
    /// e_F should not increase as the top frequency grows.
    OmegaMax,
    /// e_F should not increase as Δω shrinks.
    DeltaOmega,
    /// e_F should not increase as the noise level shrinks.
    NoiseDelta,
}

impl TrendAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrendAxis::DirectionCount => "L",
            TrendAxis::OmegaMax => "omega_max",
            TrendAxis::DeltaOmega => "delta_omega",
            TrendAxis::NoiseDelta => "delta",
        }
    }
}

/// Outcome of a monotone-trend check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendVerdict {
    MonotoneDecreasing,
    /// First index (into the improving-order sequence) where the trend
    /// broke beyond the one-σ slack.
    Violated { index: usize },
}

/// Checks that e_F improves along the axis, within a one-noise-σ slack
/// estimated from the seed replicates (the larger of the two cells'
/// standard deviations). Reports must differ only in the axis parameter;
/// they are ordered internally from worst to best expected accuracy.
pub fn trend_report(reports: &[MetricsReport], axis: TrendAxis) -> Result<TrendVerdict> {
    if reports.len() < 2 {
        return Err(Error::invalid("trend needs at least two reports"));
    }
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    for w in reports.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut mismatch = Vec::new();
        if axis != TrendAxis::DirectionCount && a.direction_count != b.direction_count {
            mismatch.push("L");
        }
        if axis != TrendAxis::OmegaMax && axis != TrendAxis::DeltaOmega {
            if a.freq_count != b.freq_count || !same(a.freq_delta, b.freq_delta) {
                mismatch.push("frequency grid");
            }
        } else if axis == TrendAxis::OmegaMax {
            if !same(a.freq_delta, b.freq_delta) {
                mismatch.push("frequency step");
            }
        } else if !same(a.omega_max(), b.omega_max()) {
            mismatch.push("frequency maximum");
        }
        if axis != TrendAxis::NoiseDelta && !same(a.noise_delta, b.noise_delta) {
            mismatch.push("noise level");
        }
        if a.error_mode != b.error_mode {
            mismatch.push("error mode");
        }
        if !mismatch.is_empty() {
            return Err(Error::invalid(format!(
                "off-axis parameters differ between sweep reports: {}",
                mismatch.join(", ")
            )));
        }
    }
    let mut ordered: Vec<&MetricsReport> = reports.iter().collect();
    // improving order: larger L / larger ω_max / smaller Δω / smaller δ
    match axis {
        TrendAxis::DirectionCount => ordered.sort_by(|a, b| a.direction_count.cmp(&b.direction_count)),
        TrendAxis::OmegaMax => ordered.sort_by(|a, b| a.omega_max().total_cmp(&b.omega_max())),
        TrendAxis::DeltaOmega => ordered.sort_by(|a, b| b.freq_delta.total_cmp(&a.freq_delta)),
        TrendAxis::NoiseDelta => ordered.sort_by(|a, b| b.noise_delta.total_cmp(&a.noise_delta)),
    }
    for (i, w) in ordered.windows(2).enumerate() {
        let slack = w[0].e_f_std.max(w[1].e_f_std);
        if w[1].e_f > w[0].e_f + slack {
            return Ok(TrendVerdict::Violated { index: i + 1 });
        }
    }
    Ok(TrendVerdict::MonotoneDecreasing)
}
