//! Discrete sampling indicators.
//!
//! Every indicator is a weighted double sum of far-field data against
//! plane-wave phases,
//!
//! ```text
//! I(z) = Σ_{l} Σ_{m} c_{l,m} · e^{i k_m (x̂_l·z)},
//! ```
//!
//! evaluated on a sampling grid. The planar elastic forms are
//!
//! * `I_f(z) = Δω/(2πL) Σ Σ ω_m [u_p e^{i k_{p,m} x̂·z}/(λ+2μ) + u_s e^{i k_{s,m} x̂·z}/μ]`,
//! * `I_p(z) = iΔω/(2πL) Σ Σ ω_m² (u_p·x̂) e^{i k_{p,m} x̂·z}/(λ+2μ)^{3/2}`,
//! * `I_s(z) = iΔω/(2πL) Σ Σ ω_m² (u_s·x̂⊥) e^{i k_{s,m} x̂·z}/μ^{3/2}`,
//!
//! recovering `S`, `div S` and `div⊥ S` respectively. The spatial elastic
//! counterparts replace the direction-measure factor `2π/L` by `4π/L` and
//! pick up one extra frequency power from the volume element:
//!
//! * `I_f(z) = Δω/(2π²L) Σ Σ ω_m² [u_p e^{i k_{p,m} x̂·z}/(λ+2μ)^{3/2} + u_s e^{i k_{s,m} x̂·z}/μ^{3/2}]`,
//! * `I_p(z) = iΔω/(2π²L) Σ Σ ω_m³ (u_p·x̂) e^{i k_{p,m} x̂·z}/(λ+2μ)²`  → `div S`,
//! * `I_s(z) = iΔω/(2π²L) Σ Σ ω_m³ (u_s×x̂) e^{i k_{s,m} x̂·z}/μ²`  → `-curl S`.
//!
//! The electromagnetic forms are
//!
//! * `I_E(z) = -2i√ε Δk/(πL) Σ Σ E e^{i k_m x̂·z} k_m`  → `J` (divergence-free `J`),
//! * `I_H(z) = 2√μ Δk/(πL) Σ Σ H e^{i k_m x̂·z} k_m²`  → `curl J`,
//! * `I_ρ(z) = Δk/(2π²L) Σ Σ (ω_m F[ρ](k_m x̂) x̂ − 4πi√ε E) e^{i k_m x̂·z} k_m`  → `J`,
//!
//! where the charge term uses `ω F[ρ] = -i F[div J]`, supplied through the
//! frequency-scaled charge field `q = div J` and the Fourier oracle.
//!
//! Evaluation uses a separable fast path on the Cartesian grids: the node
//! phase `e^{i k_m x̂·z}` factors into per-axis tables, built by a phase
//! recurrence over `m`. A direct per-node evaluation exists as the
//! reference; a unit battery pins the two paths together at 1e-10.
//! Summation per node is in fixed `(family, l, m)` order and parallelism
//! splits disjoint node ranges, so results are bitwise independent of the
//! worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::quadrature::{support_quadrature, QuadParams};
use crate::forward::{FarFieldDataset, PhysicsParams, ProblemKind, RecordPayload};
use crate::geometry::SamplingGrid;
use crate::math::{cis, dot3, C64};
use crate::sources::ScalarSpec;

/// Which indicator a field holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicatorKind {
    F2d,
    P2d,
    S2d,
    F3d,
    P3d,
    S3d,
    E,
    H,
    Rho,
}

impl IndicatorKind {
    /// Number of complex components per node.
    pub fn arity(&self) -> usize {
        match self {
            IndicatorKind::F2d => 2,
            IndicatorKind::P2d | IndicatorKind::S2d | IndicatorKind::P3d => 1,
            IndicatorKind::F3d
            | IndicatorKind::S3d
            | IndicatorKind::E
            | IndicatorKind::H
            | IndicatorKind::Rho => 3,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IndicatorKind::F2d => "f2d",
            IndicatorKind::P2d => "p2d",
            IndicatorKind::S2d => "s2d",
            IndicatorKind::F3d => "f3d",
            IndicatorKind::P3d => "p3d",
            IndicatorKind::S3d => "s3d",
            IndicatorKind::E => "E",
            IndicatorKind::H => "H",
            IndicatorKind::Rho => "rho",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "f2d" | "f" => IndicatorKind::F2d,
            "p2d" | "p" => IndicatorKind::P2d,
            "s2d" | "s" => IndicatorKind::S2d,
            "f3d" => IndicatorKind::F3d,
            "p3d" => IndicatorKind::P3d,
            "s3d" => IndicatorKind::S3d,
            "E" | "e" => IndicatorKind::E,
            "H" | "h" => IndicatorKind::H,
            "rho" => IndicatorKind::Rho,
            other => return Err(Error::invalid(format!("unknown indicator kind `{other}`"))),
        })
    }
}

/// Dataset metadata snapshot carried by every indicator field.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub problem: ProblemKind,
    pub physics: PhysicsParams,
    pub source_label: String,
    pub direction_count: usize,
    pub freq_delta: f64,
    pub freq_count: usize,
    pub noise_delta: f64,
    pub seed: u64,
}

impl Provenance {
    fn of(dataset: &FarFieldDataset) -> Self {
        Provenance {
            problem: dataset.problem(),
            physics: dataset.physics,
            source_label: dataset.source_label.clone(),
            direction_count: dataset.directions.len(),
            freq_delta: dataset.frequencies.delta(),
            freq_count: dataset.frequencies.count(),
            noise_delta: dataset.noise_delta,
            seed: dataset.seed,
        }
    }
}

/// Complex indicator values on a sampling grid, node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorField {
    pub grid: SamplingGrid,
    pub kind: IndicatorKind,
    values: Vec<C64>,
    pub provenance: Provenance,
}

impl IndicatorField {
    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }

    /// Components at node `idx`.
    pub fn value(&self, idx: usize) -> &[C64] {
        let a = self.arity();
        &self.values[idx * a..(idx + 1) * a]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Rebuilds a field from raw parts (file IO).
    pub fn from_parts(
        grid: SamplingGrid,
        kind: IndicatorKind,
        values: Vec<C64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if values.len() != grid.node_count() * kind.arity() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values, got {}",
                grid.node_count() * kind.arity(),
                values.len()
            )));
        }
        Ok(IndicatorField {
            grid,
            kind,
            values,
            provenance,
        })
    }
}

/// Evaluation switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    /// Allow full 3D volume evaluation (cost grows as nodes × L × Λ).
    pub allow_full_volume: bool,
    /// Force the direct per-node reference path instead of the separable
    /// fast path.
    pub force_direct: bool,
}

/// One phase family: coefficients `c[l][m]` against wavenumbers
/// `k_m = (m+1)·dk`.
struct Family {
    dk: f64,
    /// `coeffs[l][m * arity + c]`
    coeffs: Vec<Vec<C64>>,
}

fn guard_grid(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    expect: ProblemKind,
    opts: &EvalOptions,
) -> Result<()> {
    if dataset.problem() != expect {
        return Err(Error::DimensionMismatch(format!(
            "indicator expects {} data, dataset is {}",
            expect.as_str(),
            dataset.problem().as_str()
        )));
    }
    let want_dim = if expect == ProblemKind::Elastic2 { 2 } else { 3 };
    if grid.dimension() != want_dim {
        return Err(Error::DimensionMismatch(format!(
            "grid dimension {} does not match {} data",
            grid.dimension(),
            expect.as_str()
        )));
    }
    if want_dim == 3 && grid.slice().is_none() && !opts.allow_full_volume {
        return Err(Error::invalid(
            "full-volume 3D evaluation is guarded; restrict to a plane slice \
             or set allow_full_volume",
        ));
    }
    Ok(())
}

/// Shared driver: assembles per-family coefficients and runs the engine.
fn evaluate(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    kind: IndicatorKind,
    families: Vec<Family>,
    opts: &EvalOptions,
) -> IndicatorField {
    let arity = kind.arity();
    let mut values = vec![C64::new(0.0, 0.0); grid.node_count() * arity];
    for family in &families {
        if opts.force_direct {
            accumulate_direct(&mut values, arity, grid, dataset, family);
        } else {
            accumulate_separable(&mut values, arity, grid, dataset, family);
        }
    }
    IndicatorField {
        grid: grid.clone(),
        kind,
        values,
        provenance: Provenance::of(dataset),
    }
}

/// Reference path: evaluate every phase with a fresh complex exponential.
fn accumulate_direct(
    values: &mut [C64],
    arity: usize,
    grid: &SamplingGrid,
    dataset: &FarFieldDataset,
    family: &Family,
) {
    let count = dataset.frequencies.count();
    let chunk = arity.max(1);
    let nodes: Vec<[f64; 3]> = grid.nodes().collect();
    values
        .par_chunks_mut(chunk)
        .zip(nodes.par_iter())
        .for_each(|(out, z)| {
            for (l, coeffs) in family.coeffs.iter().enumerate() {
                let t = dot3(dataset.directions.dir3(l), *z);
                for m in 0..count {
                    let ph = cis((m + 1) as f64 * family.dk * t);
                    for c in 0..arity {
                        out[c] += coeffs[m * arity + c] * ph;
                    }
                }
            }
        });
}

/// Fast path: per direction, factor the node phase into per-axis tables
/// built by recurrence over `m`, then sweep node rows in parallel.
fn accumulate_separable(
    values: &mut [C64],
    arity: usize,
    grid: &SamplingGrid,
    dataset: &FarFieldDataset,
    family: &Family,
) {
    let count = dataset.frequencies.count();
    let axes = grid.free_axes();
    let coords: Vec<Vec<f64>> = axes.iter().map(|&a| grid.axis_coords(a)).collect();
    let last = axes.len() - 1;
    let n_last = coords[last].len();
    let rows: usize = coords[..last].iter().map(|c| c.len()).product::<usize>().max(1);

    for (l, coeffs) in family.coeffs.iter().enumerate() {
        let xh = dataset.directions.dir3(l);
        // pinned-axis phase folded into the coefficients
        let pinned_t = match grid.slice() {
            Some((axis, offset)) => xh[axis.index()] * offset,
            None => 0.0,
        };
        // tables[a][m * n_a + i] = e^{i k_m x̂_a coord_a[i]}
        let tables: Vec<Vec<C64>> = axes
            .iter()
            .enumerate()
            .map(|(pos, &a)| {
                let n = coords[pos].len();
                let mut t = vec![C64::new(0.0, 0.0); count * n];
                for (i, &x) in coords[pos].iter().enumerate() {
                    let step = cis(family.dk * xh[a] * x);
                    let mut ph = step;
                    for m in 0..count {
                        t[m * n + i] = ph;
                        ph *= step;
                    }
                }
                t
            })
            .collect();
        let mut folded = vec![C64::new(0.0, 0.0); count * arity];
        for m in 0..count {
            let ph = cis((m + 1) as f64 * family.dk * pinned_t);
            for c in 0..arity {
                folded[m * arity + c] = coeffs[m * arity + c] * ph;
            }
        }

        let row_len = n_last * arity;
        values
            .par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(row, out)| {
                // decompose the row index over the leading free axes
                let mut prefix_idx = [0usize; 2];
                {
                    let mut rem = row;
                    for pos in (0..last).rev() {
                        prefix_idx[pos] = rem % coords[pos].len();
                        rem /= coords[pos].len();
                    }
                }
                debug_assert!(row < rows);
                let tail = &tables[last];
                for m in 0..count {
                    let mut prefix = C64::new(1.0, 0.0);
                    for pos in 0..last {
                        prefix *= tables[pos][m * coords[pos].len() + prefix_idx[pos]];
                    }
                    let mut a = [C64::new(0.0, 0.0); 3];
                    for c in 0..arity {
                        a[c] = folded[m * arity + c] * prefix;
                    }
                    let col = &tail[m * n_last..(m + 1) * n_last];
                    match arity {
                        1 => {
                            for (o, ph) in out.iter_mut().zip(col) {
                                *o += a[0] * ph;
                            }
                        }
                        2 => {
                            for (o, ph) in out.chunks_exact_mut(2).zip(col) {
                                o[0] += a[0] * ph;
                                o[1] += a[1] * ph;
                            }
                        }
                        _ => {
                            for (o, ph) in out.chunks_exact_mut(3).zip(col) {
                                o[0] += a[0] * ph;
                                o[1] += a[1] * ph;
                                o[2] += a[2] * ph;
                            }
                        }
                    }
                }
            });
    }
}

fn elastic_constants(physics: &PhysicsParams) -> (f64, f64) {
    match physics {
        PhysicsParams::Elastic { lambda, mu } => (*lambda, *mu),
        PhysicsParams::Em { .. } => unreachable!("guarded by problem kind"),
    }
}

/// Full-data planar indicator; approximates the source itself.
pub fn indicator_f_2d(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_f_2d_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_f_2d_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Elastic2, opts)?;
    let (lambda, mu) = elastic_constants(&dataset.physics);
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common = freqs.delta() / (2.0 * std::f64::consts::PI * l_count as f64);
    let arity = 2;
    let mut fam_p = Vec::with_capacity(l_count);
    let mut fam_s = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let mut cp = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        let mut cs = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        for m in 0..freqs.count() {
            let omega = freqs.value(m + 1);
            let RecordPayload::Elastic2 { u_p, u_s } = dataset.record(l, m) else {
                unreachable!()
            };
            let wp = common * omega / (lambda + 2.0 * mu);
            let ws = common * omega / mu;
            for c in 0..2 {
                cp[m * arity + c] = u_p[c] * wp;
                cs[m * arity + c] = u_s[c] * ws;
            }
        }
        fam_p.push(cp);
        fam_s.push(cs);
    }
    let physics = dataset.physics;
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::F2d,
        vec![
            Family {
                dk: physics.kp(freqs.delta()),
                coeffs: fam_p,
            },
            Family {
                dk: physics.ks(freqs.delta()),
                coeffs: fam_s,
            },
        ],
        opts,
    ))
}

/// Compressional-data planar indicator; approximates `div S`.
pub fn indicator_p_2d(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_p_2d_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_p_2d_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Elastic2, opts)?;
    let (lambda, mu) = elastic_constants(&dataset.physics);
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common = freqs.delta() / (2.0 * std::f64::consts::PI * l_count as f64);
    let denom = (lambda + 2.0 * mu).powf(1.5);
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let xh = dataset.directions.dir3(l);
        let mut c = vec![C64::new(0.0, 0.0); freqs.count()];
        for m in 0..freqs.count() {
            let omega = freqs.value(m + 1);
            let RecordPayload::Elastic2 { u_p, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            let radial = u_p[0] * xh[0] + u_p[1] * xh[1];
            c[m] = C64::new(0.0, common * omega * omega / denom) * radial;
        }
        fams.push(c);
    }
    let dk = dataset.physics.kp(freqs.delta());
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::P2d,
        vec![Family { dk, coeffs: fams }],
        opts,
    ))
}

/// Shear-data planar indicator; approximates `div⊥ S`.
pub fn indicator_s_2d(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_s_2d_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_s_2d_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Elastic2, opts)?;
    let (_, mu) = elastic_constants(&dataset.physics);
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common = freqs.delta() / (2.0 * std::f64::consts::PI * l_count as f64);
    let denom = mu.powf(1.5);
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let xh = dataset.directions.dir3(l);
        let xp = [-xh[1], xh[0]];
        let mut c = vec![C64::new(0.0, 0.0); freqs.count()];
        for m in 0..freqs.count() {
            let omega = freqs.value(m + 1);
            let RecordPayload::Elastic2 { u_s, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            let tang = u_s[0] * xp[0] + u_s[1] * xp[1];
            c[m] = C64::new(0.0, common * omega * omega / denom) * tang;
        }
        fams.push(c);
    }
    let dk = dataset.physics.ks(freqs.delta());
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::S2d,
        vec![Family { dk, coeffs: fams }],
        opts,
    ))
}

/// Full-data spatial indicator; approximates the source itself.
pub fn indicator_f_3d(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_f_3d_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_f_3d_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Elastic3, opts)?;
    let (lambda, mu) = elastic_constants(&dataset.physics);
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common =
        freqs.delta() / (2.0 * std::f64::consts::PI * std::f64::consts::PI * l_count as f64);
    let arity = 3;
    let dp = (lambda + 2.0 * mu).powf(1.5);
    let ds = mu.powf(1.5);
    let mut fam_p = Vec::with_capacity(l_count);
    let mut fam_s = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let mut cp = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        let mut cs = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        for m in 0..freqs.count() {
            let omega = freqs.value(m + 1);
            let RecordPayload::Elastic3 { u_p, u_s } = dataset.record(l, m) else {
                unreachable!()
            };
            let wp = common * omega * omega / dp;
            let ws = common * omega * omega / ds;
            for c in 0..3 {
                cp[m * arity + c] = u_p[c] * wp;
                cs[m * arity + c] = u_s[c] * ws;
            }
        }
        fam_p.push(cp);
        fam_s.push(cs);
    }
    let physics = dataset.physics;
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::F3d,
        vec![
            Family {
                dk: physics.kp(freqs.delta()),
                coeffs: fam_p,
            },
            Family {
                dk: physics.ks(freqs.delta()),
                coeffs: fam_s,
            },
        ],
        opts,
    ))
}

/// Compressional-data spatial indicator; approximates `div S`.
pub fn indicator_p_3d(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_p_3d_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_p_3d_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Elastic3, opts)?;
    let (lambda, mu) = elastic_constants(&dataset.physics);
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common =
        freqs.delta() / (2.0 * std::f64::consts::PI * std::f64::consts::PI * l_count as f64);
    let denom = (lambda + 2.0 * mu) * (lambda + 2.0 * mu);
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let xh = dataset.directions.dir3(l);
        let mut c = vec![C64::new(0.0, 0.0); freqs.count()];
        for m in 0..freqs.count() {
            let omega = freqs.value(m + 1);
            let RecordPayload::Elastic3 { u_p, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            let radial = u_p[0] * xh[0] + u_p[1] * xh[1] + u_p[2] * xh[2];
            c[m] = C64::new(0.0, common * omega.powi(3) / denom) * radial;
        }
        fams.push(c);
    }
    let dk = dataset.physics.kp(freqs.delta());
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::P3d,
        vec![Family { dk, coeffs: fams }],
        opts,
    ))
}

/// Shear-data spatial indicator; approximates `-curl S`.
pub fn indicator_s_3d(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_s_3d_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_s_3d_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Elastic3, opts)?;
    let (_, mu) = elastic_constants(&dataset.physics);
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common =
        freqs.delta() / (2.0 * std::f64::consts::PI * std::f64::consts::PI * l_count as f64);
    let denom = mu * mu;
    let arity = 3;
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let xh = dataset.directions.dir3(l);
        let mut c = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        for m in 0..freqs.count() {
            let omega = freqs.value(m + 1);
            let RecordPayload::Elastic3 { u_s, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            let cross = crate::math::cross_c3(u_s, xh);
            let w = C64::new(0.0, common * omega.powi(3) / denom);
            for i in 0..3 {
                c[m * arity + i] = cross[i] * w;
            }
        }
        fams.push(c);
    }
    let dk = dataset.physics.ks(freqs.delta());
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::S3d,
        vec![Family { dk, coeffs: fams }],
        opts,
    ))
}

/// Electric-data indicator; recovers divergence-free currents.
pub fn indicator_e(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_e_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_e_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Em3, opts)?;
    let PhysicsParams::Em { epsilon, .. } = dataset.physics else {
        unreachable!()
    };
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    // -2i√ε Δk / (πL)
    let scale = C64::new(
        0.0,
        -2.0 * epsilon.sqrt() * freqs.delta() / (std::f64::consts::PI * l_count as f64),
    );
    let arity = 3;
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let mut c = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        for m in 0..freqs.count() {
            let k = freqs.value(m + 1);
            let RecordPayload::Em { e, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            for i in 0..3 {
                c[m * arity + i] = e[i] * scale * k;
            }
        }
        fams.push(c);
    }
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::E,
        vec![Family {
            dk: freqs.delta(),
            coeffs: fams,
        }],
        opts,
    ))
}

/// Magnetic-data indicator; approximates `curl J`.
pub fn indicator_h(dataset: &FarFieldDataset, grid: &SamplingGrid) -> Result<IndicatorField> {
    indicator_h_with(dataset, grid, &EvalOptions::default())
}

pub fn indicator_h_with(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Em3, opts)?;
    let PhysicsParams::Em { mu, .. } = dataset.physics else {
        unreachable!()
    };
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    // 2√μ Δk / (πL)
    let scale = 2.0 * mu.sqrt() * freqs.delta() / (std::f64::consts::PI * l_count as f64);
    let arity = 3;
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let mut c = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        for m in 0..freqs.count() {
            let k = freqs.value(m + 1);
            let RecordPayload::Em { h, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            for i in 0..3 {
                c[m * arity + i] = h[i] * (scale * k * k);
            }
        }
        fams.push(c);
    }
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::H,
        vec![Family {
            dk: freqs.delta(),
            coeffs: fams,
        }],
        opts,
    ))
}

/// Charge-compensated electric indicator; recovers `J` when the charge
/// density is known.
///
/// `charge` supplies `q = iωρ = div J`; the term `ω_m F[ρ](k_m x̂)` is then
/// the frequency-independent `-i F[q](k_m x̂)`, evaluated with the Fourier
/// oracle, and enters radially (multiplied by `x̂`).
pub fn indicator_rho(
    dataset: &FarFieldDataset,
    charge: &ScalarSpec,
    grid: &SamplingGrid,
) -> Result<IndicatorField> {
    indicator_rho_with(dataset, charge, grid, &EvalOptions::default())
}

pub fn indicator_rho_with(
    dataset: &FarFieldDataset,
    charge: &ScalarSpec,
    grid: &SamplingGrid,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    guard_grid(dataset, grid, ProblemKind::Em3, opts)?;
    let PhysicsParams::Em { epsilon, .. } = dataset.physics else {
        unreachable!()
    };
    let freqs = &dataset.frequencies;
    let l_count = dataset.directions.len();
    let common = freqs.delta()
        / (2.0 * std::f64::consts::PI * std::f64::consts::PI * l_count as f64);
    let em_scale = C64::new(0.0, -4.0 * std::f64::consts::PI * epsilon.sqrt());

    // F[q](k_m x̂_l) on the oracle quadrature, phase-recurrence over m.
    let charge_transforms: Vec<Vec<C64>> = if charge.is_zero() {
        vec![vec![C64::new(0.0, 0.0); freqs.count()]; l_count]
    } else {
        let quad = support_quadrature(
            charge.support(),
            freqs.max_value(),
            &QuadParams::oracle(),
        );
        let qvals: Vec<f64> = quad.points.iter().map(|p| charge.eval(*p)).collect();
        (0..l_count)
            .into_par_iter()
            .map(|l| {
                let xh = dataset.directions.dir3(l);
                let mut acc = vec![C64::new(0.0, 0.0); freqs.count()];
                for ((pt, w), v) in quad.points.iter().zip(&quad.weights).zip(&qvals) {
                    let t = dot3(xh, *pt);
                    let step = cis(-freqs.delta() * t);
                    let mut ph = step;
                    let s = w * v;
                    for a in acc.iter_mut() {
                        *a += ph * s;
                        ph *= step;
                    }
                }
                acc
            })
            .collect()
    };

    let arity = 3;
    let mut fams = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let xh = dataset.directions.dir3(l);
        let mut c = vec![C64::new(0.0, 0.0); freqs.count() * arity];
        for m in 0..freqs.count() {
            let k = freqs.value(m + 1);
            let RecordPayload::Em { e, .. } = dataset.record(l, m) else {
                unreachable!()
            };
            // ω_m F[ρ] = -i F[q]
            let rho_term = C64::new(0.0, -1.0) * charge_transforms[l][m];
            for i in 0..3 {
                let term = rho_term * xh[i] + em_scale * e[i];
                c[m * arity + i] = term * (common * k);
            }
        }
        fams.push(c);
    }
    Ok(evaluate(
        dataset,
        grid,
        IndicatorKind::Rho,
        vec![Family {
            dk: freqs.delta(),
            coeffs: fams,
        }],
        opts,
    ))
}

/// Convenience dispatch by kind (the charge indicator needs its own entry
/// point because of the extra argument).
pub fn indicator_by_kind(
    dataset: &FarFieldDataset,
    grid: &SamplingGrid,
    kind: IndicatorKind,
    opts: &EvalOptions,
) -> Result<IndicatorField> {
    match kind {
        IndicatorKind::F2d => indicator_f_2d_with(dataset, grid, opts),
        IndicatorKind::P2d => indicator_p_2d_with(dataset, grid, opts),
        IndicatorKind::S2d => indicator_s_2d_with(dataset, grid, opts),
        IndicatorKind::F3d => indicator_f_3d_with(dataset, grid, opts),
        IndicatorKind::P3d => indicator_p_3d_with(dataset, grid, opts),
        IndicatorKind::S3d => indicator_s_3d_with(dataset, grid, opts),
        IndicatorKind::E => indicator_e_with(dataset, grid, opts),
        IndicatorKind::H => indicator_h_with(dataset, grid, opts),
        IndicatorKind::Rho => Err(Error::invalid(
            "the charge indicator needs a charge density; call indicator_rho",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{apply_noise, synthesize_dataset};
    use crate::geometry::{
        cartesian_grid, fibonacci_sphere, frequency_grid, plane_slice, theta_circle, Axis,
    };
    use crate::sources;

    fn small_elastic2() -> (FarFieldDataset, SamplingGrid) {
        let spec = sources::example_two();
        let physics = PhysicsParams::elastic(1.0, 1.0).unwrap();
        let dirs = theta_circle(7).unwrap();
        let freqs = frequency_grid(0.5, 9).unwrap();
        let ds = synthesize_dataset(&spec, &physics, &dirs, &freqs).unwrap();
        let grid = cartesian_grid([-3.0, -3.0], [3.0, 3.0], 0.5).unwrap();
        (ds, grid)
    }

    fn small_em() -> (FarFieldDataset, SamplingGrid) {
        let spec = sources::example_four();
        let physics = PhysicsParams::em(1.0, 1.0).unwrap();
        let dirs = fibonacci_sphere(9).unwrap();
        let freqs = frequency_grid(0.5, 6).unwrap();
        let ds = synthesize_dataset(&spec, &physics, &dirs, &freqs).unwrap();
        let grid = plane_slice([-1.0; 3], [1.0; 3], Axis::Z3, 0.25, 0.25).unwrap();
        (ds, grid)
    }

    fn small_elastic3() -> (FarFieldDataset, SamplingGrid) {
        let spec = sources::bump3([0.0, 0.1, -0.1], 0.6, [1.0, -0.5, 0.25]);
        let physics = PhysicsParams::elastic(1.0, 1.0).unwrap();
        let dirs = fibonacci_sphere(9).unwrap();
        let freqs = frequency_grid(0.5, 6).unwrap();
        let ds = synthesize_dataset(&spec, &physics, &dirs, &freqs).unwrap();
        let grid = plane_slice([-1.0; 3], [1.0; 3], Axis::Z1, -0.1, 0.25).unwrap();
        (ds, grid)
    }

    fn rel_diff(a: &IndicatorField, b: &IndicatorField) -> f64 {
        let na: f64 = a.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let d: f64 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        d / na.max(1e-300)
    }

    #[test]
    fn zero_dataset_gives_zero_fields() {
        let physics = PhysicsParams::elastic(1.0, 1.0).unwrap();
        let dirs = theta_circle(4).unwrap();
        let freqs = frequency_grid(1.0, 3).unwrap();
        let ds = synthesize_dataset(&sources::zero2(), &physics, &dirs, &freqs).unwrap();
        let grid = cartesian_grid([-1.0, -1.0], [1.0, 1.0], 0.5).unwrap();
        for kind in [IndicatorKind::F2d, IndicatorKind::P2d, IndicatorKind::S2d] {
            let f = indicator_by_kind(&ds, &grid, kind, &EvalOptions::default()).unwrap();
            assert!(f.values().iter().all(|z| z.norm() == 0.0));
        }

        let em = PhysicsParams::em(1.0, 1.0).unwrap();
        let dirs3 = fibonacci_sphere(5).unwrap();
        let ds3 = synthesize_dataset(&sources::zero3(), &em, &dirs3, &freqs).unwrap();
        let slice = plane_slice([-1.0; 3], [1.0; 3], Axis::Z3, 0.0, 0.5).unwrap();
        for kind in [IndicatorKind::E, IndicatorKind::H] {
            let f = indicator_by_kind(&ds3, &slice, kind, &EvalOptions::default()).unwrap();
            assert!(f.values().iter().all(|z| z.norm() == 0.0));
        }
        let frho = indicator_rho(&ds3, &ScalarSpec::zero(), &slice).unwrap();
        assert!(frho.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn separable_path_matches_direct_battery() {
        let direct = EvalOptions {
            force_direct: true,
            ..Default::default()
        };
        let fast = EvalOptions::default();

        let (ds2, grid2) = small_elastic2();
        for kind in [IndicatorKind::F2d, IndicatorKind::P2d, IndicatorKind::S2d] {
            let a = indicator_by_kind(&ds2, &grid2, kind, &fast).unwrap();
            let b = indicator_by_kind(&ds2, &grid2, kind, &direct).unwrap();
            assert!(rel_diff(&a, &b) < 1e-10, "{kind:?}: {}", rel_diff(&a, &b));
        }

        let (ds3, slice3) = small_elastic3();
        for kind in [IndicatorKind::F3d, IndicatorKind::P3d, IndicatorKind::S3d] {
            let a = indicator_by_kind(&ds3, &slice3, kind, &fast).unwrap();
            let b = indicator_by_kind(&ds3, &slice3, kind, &direct).unwrap();
            assert!(rel_diff(&a, &b) < 1e-10, "{kind:?}: {}", rel_diff(&a, &b));
        }

        let (dse, slice) = small_em();
        for kind in [IndicatorKind::E, IndicatorKind::H] {
            let a = indicator_by_kind(&dse, &slice, kind, &fast).unwrap();
            let b = indicator_by_kind(&dse, &slice, kind, &direct).unwrap();
            assert!(rel_diff(&a, &b) < 1e-10, "{kind:?}: {}", rel_diff(&a, &b));
        }
        let q = ScalarSpec::example_four_div();
        let a = indicator_rho_with(&dse, &q, &slice, &fast).unwrap();
        let b = indicator_rho_with(&dse, &q, &slice, &direct).unwrap();
        assert!(rel_diff(&a, &b) < 1e-10);
    }

    #[test]
    fn indicators_are_linear_in_the_data() {
        let (ds, grid) = small_elastic2();
        let noisy = apply_noise(&ds, 0.3, 11).unwrap();
        let alpha = C64::new(-0.7, 1.9);
        let scaled = noisy.scaled(alpha);
        let base = indicator_f_2d(&noisy, &grid).unwrap();
        let after = indicator_f_2d(&scaled, &grid).unwrap();
        for (a, b) in base.values().iter().zip(after.values()) {
            assert!((a * alpha - b).norm() <= 1e-12 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn evaluation_is_deterministic() {
        let (ds, grid) = small_em();
        let a = indicator_e(&ds, &grid).unwrap();
        let b = indicator_e(&ds, &grid).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn zero_charge_reduces_to_electric_indicator() {
        let (ds, grid) = small_em();
        let noisy = apply_noise(&ds, 0.1, 5).unwrap();
        let ie = indicator_e(&noisy, &grid).unwrap();
        let irho = indicator_rho(&noisy, &ScalarSpec::zero(), &grid).unwrap();
        let scale: f64 = ie.values().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (a, b) in ie.values().iter().zip(irho.values()) {
            assert!((a - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn full_volume_guard() {
        let (ds, _) = small_em();
        let volume = crate::geometry::SamplingGrid::cartesian3([-1.0; 3], [1.0; 3], 0.5).unwrap();
        assert!(indicator_e(&ds, &volume).is_err());
        let opts = EvalOptions {
            allow_full_volume: true,
            ..Default::default()
        };
        let f = indicator_e_with(&ds, &volume, &opts).unwrap();
        assert_eq!(f.node_count(), 125);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let (ds2, _) = small_elastic2();
        let (dse, slice) = small_em();
        // EM indicator on elastic data
        assert!(indicator_e(&ds2, &slice).is_err());
        // planar indicator on EM data
        let grid2 = cartesian_grid([-1.0, -1.0], [1.0, 1.0], 0.5).unwrap();
        assert!(indicator_f_2d(&dse, &grid2).is_err());
        // 3D elastic indicator on 2D data
        assert!(indicator_f_3d(&ds2, &slice).is_err());
    }
}
