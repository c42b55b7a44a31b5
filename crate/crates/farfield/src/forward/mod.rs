//! Noiseless far-field synthesis and the multiplicative noise model.
//!
//! Far fields are computed directly from the far-field integral
//! representations by quadrature over the source support:
//!
//! * elastic, planar: `u_p = x̂ ∫ e^{-i k_p x̂·y} S(y)·x̂ dy`,
//!   `u_s = x̂⊥ ∫ e^{-i k_s x̂·y} S(y)·x̂⊥ dy`;
//! * elastic, spatial: `u_p = x̂ ∫ e^{-i k_p x̂·y} S(y)·x̂ dy`,
//!   `u_s = ∫ e^{-i k_s x̂·y} x̂×(S(y)×x̂) dy`;
//! * electromagnetic: `E = (ik/(4π√ε)) x̂×(F[J](k x̂)×x̂)`,
//!   `H = √(ε/μ) x̂×E`,
//!
//! where `F` is the Fourier transform `∫ S(y) e^{-iξ·y} dy`. The same
//! transform is exposed at an independent (finer) resolution as a
//! cross-check oracle.
//!
//! Dataset synthesis walks the frequency grid with a phase-recurrence over
//! `m` (`e^{-i k_m t} = e^{-i k_{m-1} t}·e^{-i Δk t}`), which a unit test
//! pins to the direct evaluation at 1e-10.

pub mod noise;
pub mod quadrature;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Direction2, Direction3, DirectionSet, FrequencyGrid};
use crate::math::{cis, cross_c3, dot3, dot_c3, C64};
use crate::sources::{ScalarSpec, SourceSpec};

use quadrature::{support_quadrature, QuadParams, Quadrature};

/// Background-medium parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhysicsParams {
    /// Isotropic elastic medium with Lamé constants `λ, μ`
    /// (`μ > 0`, `2μ + λ > 0`); wavenumbers `k_p = ω/√(λ+2μ)`, `k_s = ω/√μ`.
    Elastic { lambda: f64, mu: f64 },
    /// Dielectric medium with permittivity `ε > 0` and permeability
    /// `μ > 0`; wavenumber `k = ω√(με)`.
    Em { epsilon: f64, mu: f64 },
}

impl PhysicsParams {
    pub fn elastic(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !(2.0 * mu + lambda > 0.0) {
            return Err(Error::invalid(
                "elastic medium requires mu > 0 and 2*mu + lambda > 0",
            ));
        }
        Ok(PhysicsParams::Elastic { lambda, mu })
    }

    pub fn em(epsilon: f64, mu: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !(mu > 0.0) {
            return Err(Error::invalid("em medium requires epsilon > 0 and mu > 0"));
        }
        Ok(PhysicsParams::Em { epsilon, mu })
    }

    pub fn is_elastic(&self) -> bool {
        matches!(self, PhysicsParams::Elastic { .. })
    }

    /// Compressional wavenumber `k_p(ω)`.
    pub fn kp(&self, omega: f64) -> f64 {
        match self {
            PhysicsParams::Elastic { lambda, mu } => omega / (lambda + 2.0 * mu).sqrt(),
            PhysicsParams::Em { .. } => panic!("kp is an elastic quantity"),
        }
    }

    /// Shear wavenumber `k_s(ω) ≥ k_p(ω)`.
    pub fn ks(&self, omega: f64) -> f64 {
        match self {
            PhysicsParams::Elastic { mu, .. } => omega / mu.sqrt(),
            PhysicsParams::Em { .. } => panic!("ks is an elastic quantity"),
        }
    }

    /// Circular frequency for a wavenumber, `ω = k/√(με)` (EM).
    pub fn omega_of_k(&self, k: f64) -> f64 {
        match self {
            PhysicsParams::Em { epsilon, mu } => k / (mu * epsilon).sqrt(),
            PhysicsParams::Elastic { .. } => panic!("omega_of_k is an EM quantity"),
        }
    }
}

/// Which physical problem a dataset belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Elastic2,
    Elastic3,
    Em3,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Elastic2 => "elastic2d",
            ProblemKind::Elastic3 => "elastic3d",
            ProblemKind::Em3 => "em3d",
        }
    }
}

/// One far-field record at `(x̂_l, ω_m)`.
///
/// At zero noise the elastic `u_p` is parallel to `x̂` and `u_s` tangential;
/// the electromagnetic `E` is tangential and `H = √(ε/μ) x̂×E`. Noise
/// multiplies whole blocks, deliberately preserving those directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecordPayload {
    Elastic2 { u_p: [C64; 2], u_s: [C64; 2] },
    Elastic3 { u_p: [C64; 3], u_s: [C64; 3] },
    Em { e: [C64; 3], h: [C64; 3] },
}

impl RecordPayload {
    fn scaled(&self, a: C64) -> RecordPayload {
        match self {
            RecordPayload::Elastic2 { u_p, u_s } => RecordPayload::Elastic2 {
                u_p: [u_p[0] * a, u_p[1] * a],
                u_s: [u_s[0] * a, u_s[1] * a],
            },
            RecordPayload::Elastic3 { u_p, u_s } => RecordPayload::Elastic3 {
                u_p: [u_p[0] * a, u_p[1] * a, u_p[2] * a],
                u_s: [u_s[0] * a, u_s[1] * a, u_s[2] * a],
            },
            RecordPayload::Em { e, h } => RecordPayload::Em {
                e: [e[0] * a, e[1] * a, e[2] * a],
                h: [h[0] * a, h[1] * a, h[2] * a],
            },
        }
    }
}

/// Immutable far-field data with full provenance.
#[derive(Debug, Clone)]
pub struct FarFieldDataset {
    pub physics: PhysicsParams,
    pub directions: DirectionSet,
    pub frequencies: FrequencyGrid,
    records: Vec<RecordPayload>,
    pub noise_delta: f64,
    pub seed: u64,
    pub source_label: String,
}

impl FarFieldDataset {
    pub fn problem(&self) -> ProblemKind {
        match (&self.physics, self.directions.dimension()) {
            (PhysicsParams::Elastic { .. }, 2) => ProblemKind::Elastic2,
            (PhysicsParams::Elastic { .. }, _) => ProblemKind::Elastic3,
            (PhysicsParams::Em { .. }, _) => ProblemKind::Em3,
        }
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    /// Record at direction index `l` and frequency index `m0 = m - 1`.
    pub fn record(&self, l: usize, m0: usize) -> &RecordPayload {
        &self.records[l * self.frequencies.count() + m0]
    }

    pub fn records(&self) -> &[RecordPayload] {
        &self.records
    }

    /// Rebuilds the dataset from externally produced records (file IO).
    pub fn from_records(
        physics: PhysicsParams,
        directions: DirectionSet,
        frequencies: FrequencyGrid,
        records: Vec<RecordPayload>,
        noise_delta: f64,
        seed: u64,
        source_label: String,
    ) -> Result<Self> {
        if records.len() != directions.len() * frequencies.count() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} records, got {}",
                directions.len() * frequencies.count(),
                records.len()
            )));
        }
        Ok(FarFieldDataset {
            physics,
            directions,
            frequencies,
            records,
            noise_delta,
            seed,
            source_label,
        })
    }

    /// Dataset with every record multiplied by a complex scalar.
    pub fn scaled(&self, a: C64) -> FarFieldDataset {
        let mut out = self.clone();
        out.records = self.records.iter().map(|r| r.scaled(a)).collect();
        out
    }
}

/// `Σ_q w_q v_q e^{-i ξ·y_q}` over materialized quadrature nodes.
fn transform_on_quad(quad: &Quadrature, values: &[[f64; 3]], xi: [f64; 3]) -> [C64; 3] {
    let mut acc = [C64::new(0.0, 0.0); 3];
    for ((p, w), v) in quad.points.iter().zip(&quad.weights).zip(values) {
        let ph = cis(-dot3(xi, *p)) * *w;
        acc[0] += ph * v[0];
        acc[1] += ph * v[1];
        acc[2] += ph * v[2];
    }
    acc
}

fn eval_on_quad(spec: &SourceSpec, quad: &Quadrature) -> Vec<[f64; 3]> {
    quad.points.iter().map(|p| spec.eval(*p)).collect()
}

/// Fourier transform `F[S](ξ) = ∫ S(y) e^{-iξ·y} dy` of a source at the
/// oracle resolution (twice the synthesis resolution). This is the
/// independent cross-check path for the far-field formulas.
pub fn fourier_transform(spec: &SourceSpec, xi: &[f64]) -> Result<[C64; 3]> {
    fourier_transform_with(spec, xi, &QuadParams::oracle())
}

/// Fourier transform at an explicit quadrature resolution.
pub fn fourier_transform_with(
    spec: &SourceSpec,
    xi: &[f64],
    params: &QuadParams,
) -> Result<[C64; 3]> {
    if xi.len() != spec.dimension() {
        return Err(Error::invalid(format!(
            "frequency point has dimension {}, source expects {}",
            xi.len(),
            spec.dimension()
        )));
    }
    let mut x3 = [0.0; 3];
    x3[..xi.len()].copy_from_slice(xi);
    let k = dot3(x3, x3).sqrt();
    let quad = support_quadrature(spec.support(), k, params);
    let values = eval_on_quad(spec, &quad);
    Ok(transform_on_quad(&quad, &values, x3))
}

/// Fourier transform of a scalar companion field at the oracle resolution.
pub fn fourier_transform_scalar(spec: &ScalarSpec, xi: [f64; 3]) -> C64 {
    let k = dot3(xi, xi).sqrt();
    let quad = support_quadrature(spec.support(), k, &QuadParams::oracle());
    let mut acc = C64::new(0.0, 0.0);
    for (p, w) in quad.points.iter().zip(&quad.weights) {
        acc += cis(-dot3(xi, *p)) * *w * spec.eval(*p);
    }
    acc
}

/// Compressional and shear far fields of a planar elastic source at one
/// observation direction and frequency.
pub fn elastic_far_field_2d(
    spec: &SourceSpec,
    physics: &PhysicsParams,
    xhat: Direction2,
    omega: f64,
) -> Result<([C64; 2], [C64; 2])> {
    if !(omega > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    if spec.dimension() != 2 || !physics.is_elastic() {
        return Err(Error::DimensionMismatch(
            "planar elastic far fields need a 2D source and elastic medium".into(),
        ));
    }
    let (kp, ks) = (physics.kp(omega), physics.ks(omega));
    let quad = support_quadrature(spec.support(), ks, &QuadParams::forward());
    let values = eval_on_quad(spec, &quad);
    let xh = [xhat.x, xhat.y, 0.0];
    let perp = xhat.perp();
    let xp = [perp.x, perp.y, 0.0];
    let fp = transform_on_quad(&quad, &values, [kp * xh[0], kp * xh[1], 0.0]);
    let fs = transform_on_quad(&quad, &values, [ks * xh[0], ks * xh[1], 0.0]);
    let p_amp = dot_c3(&fp, xh);
    let s_amp = dot_c3(&fs, xp);
    Ok((
        [p_amp * xh[0], p_amp * xh[1]],
        [s_amp * xp[0], s_amp * xp[1]],
    ))
}

/// Compressional and shear far fields of a spatial elastic source.
pub fn elastic_far_field_3d(
    spec: &SourceSpec,
    physics: &PhysicsParams,
    xhat: Direction3,
    omega: f64,
) -> Result<([C64; 3], [C64; 3])> {
    if !(omega > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    if spec.dimension() != 3 || !physics.is_elastic() {
        return Err(Error::DimensionMismatch(
            "spatial elastic far fields need a 3D source and elastic medium".into(),
        ));
    }
    let (kp, ks) = (physics.kp(omega), physics.ks(omega));
    let quad = support_quadrature(spec.support(), ks, &QuadParams::forward());
    let values = eval_on_quad(spec, &quad);
    let xh = xhat.as_array();
    let fp = transform_on_quad(&quad, &values, [kp * xh[0], kp * xh[1], kp * xh[2]]);
    let fs = transform_on_quad(&quad, &values, [ks * xh[0], ks * xh[1], ks * xh[2]]);
    let p_amp = dot_c3(&fp, xh);
    let u_p = [p_amp * xh[0], p_amp * xh[1], p_amp * xh[2]];
    // x̂×(F×x̂) = F − x̂(F·x̂)
    let s_rad = dot_c3(&fs, xh);
    let u_s = [
        fs[0] - s_rad * xh[0],
        fs[1] - s_rad * xh[1],
        fs[2] - s_rad * xh[2],
    ];
    Ok((u_p, u_s))
}

/// Electric and magnetic far fields of a current density at one direction
/// and wavenumber.
pub fn em_far_fields(
    spec: &SourceSpec,
    physics: &PhysicsParams,
    xhat: Direction3,
    k: f64,
) -> Result<([C64; 3], [C64; 3])> {
    if !(k > 0.0) {
        return Err(Error::invalid("wavenumber must be positive"));
    }
    let PhysicsParams::Em { epsilon, mu } = physics else {
        return Err(Error::DimensionMismatch(
            "em far fields need an EM medium".into(),
        ));
    };
    if spec.dimension() != 3 {
        return Err(Error::DimensionMismatch("em far fields need a 3D source".into()));
    }
    let quad = support_quadrature(spec.support(), k, &QuadParams::forward());
    let values = eval_on_quad(spec, &quad);
    let xh = xhat.as_array();
    let f = transform_on_quad(&quad, &values, [k * xh[0], k * xh[1], k * xh[2]]);
    Ok(em_fields_from_transform(&f, xh, k, *epsilon, *mu))
}

/// Assembles `(E, H)` from `F[J](k x̂)`.
fn em_fields_from_transform(
    f: &[C64; 3],
    xh: [f64; 3],
    k: f64,
    epsilon: f64,
    mu: f64,
) -> ([C64; 3], [C64; 3]) {
    let coef = C64::new(0.0, k / (4.0 * std::f64::consts::PI * epsilon.sqrt()));
    let rad = dot_c3(f, xh);
    let e = [
        coef * (f[0] - rad * xh[0]),
        coef * (f[1] - rad * xh[1]),
        coef * (f[2] - rad * xh[2]),
    ];
    let ratio = (epsilon / mu).sqrt();
    let he = cross_c3(&e, xh); // x̂×E = −(E×x̂)
    let h = [-he[0] * ratio, -he[1] * ratio, -he[2] * ratio];
    (e, h)
}

/// Synthesizes the dense noiseless record array over all directions and
/// frequencies. Deterministic for fixed inputs; direction rows are
/// computed independently (and in parallel).
pub fn synthesize_dataset(
    spec: &SourceSpec,
    physics: &PhysicsParams,
    directions: &DirectionSet,
    frequencies: &FrequencyGrid,
) -> Result<FarFieldDataset> {
    synthesize_with(spec, physics, directions, frequencies, false)
}

/// Reference synthesis evaluating every phase directly (no recurrence).
/// Slow; used to pin the fast path.
pub fn synthesize_dataset_direct(
    spec: &SourceSpec,
    physics: &PhysicsParams,
    directions: &DirectionSet,
    frequencies: &FrequencyGrid,
) -> Result<FarFieldDataset> {
    synthesize_with(spec, physics, directions, frequencies, true)
}

fn synthesize_with(
    spec: &SourceSpec,
    physics: &PhysicsParams,
    directions: &DirectionSet,
    frequencies: &FrequencyGrid,
    direct: bool,
) -> Result<FarFieldDataset> {
    let problem = match (physics, directions.dimension()) {
        (PhysicsParams::Elastic { .. }, 2) => ProblemKind::Elastic2,
        (PhysicsParams::Elastic { .. }, 3) => ProblemKind::Elastic3,
        (PhysicsParams::Em { .. }, 3) => ProblemKind::Em3,
        (PhysicsParams::Em { .. }, _) => {
            return Err(Error::DimensionMismatch(
                "em data needs spherical observation directions".into(),
            ))
        }
        _ => unreachable!(),
    };
    let expected_dim = if problem == ProblemKind::Elastic2 { 2 } else { 3 };
    if spec.dimension() != expected_dim {
        return Err(Error::DimensionMismatch(format!(
            "{} data needs a {}D source, got {}D",
            problem.as_str(),
            expected_dim,
            spec.dimension()
        )));
    }

    let omega_max = frequencies.max_value();
    let k_max = match physics {
        PhysicsParams::Elastic { .. } => physics.ks(omega_max),
        PhysicsParams::Em { .. } => omega_max,
    };
    let quad = support_quadrature(spec.support(), k_max, &QuadParams::forward());
    let values = eval_on_quad(spec, &quad);

    let count = frequencies.count();
    let records: Vec<RecordPayload> = (0..directions.len())
        .into_par_iter()
        .flat_map_iter(|l| {
            direction_row(
                problem, physics, directions, frequencies, &quad, &values, l, direct,
            )
        })
        .collect();
    debug_assert_eq!(records.len(), directions.len() * count);

    Ok(FarFieldDataset {
        physics: *physics,
        directions: directions.clone(),
        frequencies: frequencies.clone(),
        records,
        noise_delta: 0.0,
        seed: 0,
        source_label: spec.label().to_string(),
    })
}

/// All records for one observation direction, frequencies in order.
#[allow(clippy::too_many_arguments)]
fn direction_row(
    problem: ProblemKind,
    physics: &PhysicsParams,
    directions: &DirectionSet,
    frequencies: &FrequencyGrid,
    quad: &Quadrature,
    values: &[[f64; 3]],
    l: usize,
    direct: bool,
) -> Vec<RecordPayload> {
    let count = frequencies.count();
    let delta = frequencies.delta();
    let xh = directions.dir3(l);
    match problem {
        ProblemKind::Elastic2 => {
            let xp = [-xh[1], xh[0], 0.0];
            let (dkp, dks) = (physics.kp(delta), physics.ks(delta));
            let mut acc_p = vec![C64::new(0.0, 0.0); count];
            let mut acc_s = vec![C64::new(0.0, 0.0); count];
            for ((pt, w), v) in quad.points.iter().zip(&quad.weights).zip(values) {
                let t = dot3(xh, *pt);
                let sp = dot3(*v, xh) * w;
                let ss = dot3(*v, xp) * w;
                accumulate_scalar(&mut acc_p, sp, dkp * t, direct);
                accumulate_scalar(&mut acc_s, ss, dks * t, direct);
            }
            (0..count)
                .map(|m| RecordPayload::Elastic2 {
                    u_p: [acc_p[m] * xh[0], acc_p[m] * xh[1]],
                    u_s: [acc_s[m] * xp[0], acc_s[m] * xp[1]],
                })
                .collect()
        }
        ProblemKind::Elastic3 => {
            let (dkp, dks) = (physics.kp(delta), physics.ks(delta));
            let mut acc_p = vec![C64::new(0.0, 0.0); count];
            let mut acc_s = vec![[C64::new(0.0, 0.0); 3]; count];
            for ((pt, w), v) in quad.points.iter().zip(&quad.weights).zip(values) {
                let t = dot3(xh, *pt);
                let radial = dot3(*v, xh);
                let sp = radial * w;
                let tang = [
                    (v[0] - radial * xh[0]) * w,
                    (v[1] - radial * xh[1]) * w,
                    (v[2] - radial * xh[2]) * w,
                ];
                accumulate_scalar(&mut acc_p, sp, dkp * t, direct);
                accumulate_vector(&mut acc_s, tang, dks * t, direct);
            }
            (0..count)
                .map(|m| RecordPayload::Elastic3 {
                    u_p: [acc_p[m] * xh[0], acc_p[m] * xh[1], acc_p[m] * xh[2]],
                    u_s: acc_s[m],
                })
                .collect()
        }
        ProblemKind::Em3 => {
            let PhysicsParams::Em { epsilon, mu } = physics else {
                unreachable!()
            };
            let mut acc_f = vec![[C64::new(0.0, 0.0); 3]; count];
            for ((pt, w), v) in quad.points.iter().zip(&quad.weights).zip(values) {
                let t = dot3(xh, *pt);
                let jv = [v[0] * w, v[1] * w, v[2] * w];
                accumulate_vector(&mut acc_f, jv, delta * t, direct);
            }
            (0..count)
                .map(|m| {
                    let k = frequencies.value(m + 1);
                    let (e, h) = em_fields_from_transform(&acc_f[m], xh, k, *epsilon, *mu);
                    RecordPayload::Em { e, h }
                })
                .collect()
        }
    }
}

/// `acc[m] += s · e^{-i (m+1) dt}` for real block `s`.
#[inline]
fn accumulate_scalar(acc: &mut [C64], s: f64, dt: f64, direct: bool) {
    if direct {
        for (m, a) in acc.iter_mut().enumerate() {
            *a += cis(-((m + 1) as f64) * dt) * s;
        }
    } else {
        let step = cis(-dt);
        let mut ph = step;
        for a in acc.iter_mut() {
            *a += ph * s;
            ph *= step;
        }
    }
}

/// `acc[m] += v · e^{-i (m+1) dt}` for real vector block `v`.
#[inline]
fn accumulate_vector(acc: &mut [[C64; 3]], v: [f64; 3], dt: f64, direct: bool) {
    if direct {
        for (m, a) in acc.iter_mut().enumerate() {
            let ph = cis(-((m + 1) as f64) * dt);
            a[0] += ph * v[0];
            a[1] += ph * v[1];
            a[2] += ph * v[2];
        }
    } else {
        let step = cis(-dt);
        let mut ph = step;
        for a in acc.iter_mut() {
            a[0] += ph * v[0];
            a[1] += ph * v[1];
            a[2] += ph * v[2];
            ph *= step;
        }
    }
}

/// Applies multiplicative noise `1 + δ(N₁ + iN₂)` per record block,
/// keyed deterministically by `(seed, l, m, t)`. The input should be a
/// noiseless dataset; metadata records `δ` and the seed.
pub fn apply_noise(dataset: &FarFieldDataset, delta: f64, seed: u64) -> Result<FarFieldDataset> {
    if delta < 0.0 {
        return Err(Error::invalid("noise level must be nonnegative"));
    }
    let mut out = dataset.clone();
    out.noise_delta = delta;
    out.seed = seed;
    if delta == 0.0 {
        return Ok(out);
    }
    let count = dataset.frequencies.count();
    for l in 0..dataset.directions.len() {
        for m in 0..count {
            let fa = noise::noise_factor(seed, l as u32, m as u32, 0, delta);
            let fb = noise::noise_factor(seed, l as u32, m as u32, 1, delta);
            let r = &mut out.records[l * count + m];
            *r = match r {
                RecordPayload::Elastic2 { u_p, u_s } => RecordPayload::Elastic2 {
                    u_p: [u_p[0] * fa, u_p[1] * fa],
                    u_s: [u_s[0] * fb, u_s[1] * fb],
                },
                RecordPayload::Elastic3 { u_p, u_s } => RecordPayload::Elastic3 {
                    u_p: [u_p[0] * fa, u_p[1] * fa, u_p[2] * fa],
                    u_s: [u_s[0] * fb, u_s[1] * fb, u_s[2] * fb],
                },
                RecordPayload::Em { e, h } => RecordPayload::Em {
                    e: [e[0] * fa, e[1] * fa, e[2] * fa],
                    h: [h[0] * fb, h[1] * fb, h[2] * fb],
                },
            };
        }
    }
    Ok(out)
}
