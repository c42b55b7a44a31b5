//! Compactly supported vector sources with analytic support geometry and
//! analytic first derivatives.
//!
//! The registry carries four benchmark sources (`example_one` ..
//! `example_four`) plus simple primitives used by tests: constants on a
//! shape, gradient-type bumps (curl-free), rotated-gradient bumps
//! (divergence-free) and smooth vector bumps. Every source evaluates to
//! the zero vector outside its support.

use crate::error::{Error, Result};

/// Closed support region with exact membership tests.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportShape {
    Disk { center: [f64; 2], radius: f64 },
    Annulus { center: [f64; 2], r_in: f64, r_out: f64 },
    Rect { lo: [f64; 2], hi: [f64; 2] },
    Ball { center: [f64; 3], radius: f64 },
    Cuboid { lo: [f64; 3], hi: [f64; 3] },
    Union(Vec<SupportShape>),
}

impl SupportShape {
    pub fn dimension(&self) -> usize {
        match self {
            SupportShape::Disk { .. }
            | SupportShape::Annulus { .. }
            | SupportShape::Rect { .. } => 2,
            SupportShape::Ball { .. } | SupportShape::Cuboid { .. } => 3,
            SupportShape::Union(parts) => parts.first().map_or(2, |p| p.dimension()),
        }
    }

    /// Membership in the closed set.
    pub fn contains(&self, z: [f64; 3]) -> bool {
        match self {
            SupportShape::Disk { center, radius } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                r <= *radius
            }
            SupportShape::Annulus { center, r_in, r_out } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                *r_in <= r && r <= *r_out
            }
            SupportShape::Rect { lo, hi } => {
                (0..2).all(|a| lo[a] <= z[a] && z[a] <= hi[a])
            }
            SupportShape::Ball { center, radius } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() <= *radius
            }
            SupportShape::Cuboid { lo, hi } => {
                (0..3).all(|a| lo[a] <= z[a] && z[a] <= hi[a])
            }
            SupportShape::Union(parts) => parts.iter().any(|p| p.contains(z)),
        }
    }

    /// Axis-aligned box enclosing the shape (third axis zero in 2D).
    pub fn bounding_box(&self) -> ([f64; 3], [f64; 3]) {
        match self {
            SupportShape::Disk { center, radius } => (
                [center[0] - radius, center[1] - radius, 0.0],
                [center[0] + radius, center[1] + radius, 0.0],
            ),
            SupportShape::Annulus { center, r_out, .. } => (
                [center[0] - r_out, center[1] - r_out, 0.0],
                [center[0] + r_out, center[1] + r_out, 0.0],
            ),
            SupportShape::Rect { lo, hi } => ([lo[0], lo[1], 0.0], [hi[0], hi[1], 0.0]),
            SupportShape::Ball { center, radius } => (
                [center[0] - radius, center[1] - radius, center[2] - radius],
                [center[0] + radius, center[1] + radius, center[2] + radius],
            ),
            SupportShape::Cuboid { lo, hi } => (*lo, *hi),
            SupportShape::Union(parts) => {
                let mut lo = [f64::INFINITY; 3];
                let mut hi = [f64::NEG_INFINITY; 3];
                for p in parts {
                    let (plo, phi) = p.bounding_box();
                    for a in 0..3 {
                        lo[a] = lo[a].min(plo[a]);
                        hi[a] = hi[a].max(phi[a]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Euclidean distance from `z` to the shape; zero inside.
    pub fn distance_outside(&self, z: [f64; 3]) -> f64 {
        match self {
            SupportShape::Disk { center, radius } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                (r - radius).max(0.0)
            }
            SupportShape::Annulus { center, r_in, r_out } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                (r_in - r).max(r - r_out).max(0.0)
            }
            SupportShape::Rect { lo, hi } => {
                let mut s = 0.0;
                for a in 0..2 {
                    let d = (lo[a] - z[a]).max(z[a] - hi[a]).max(0.0);
                    s += d * d;
                }
                s.sqrt()
            }
            SupportShape::Ball { center, radius } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                (r - radius).max(0.0)
            }
            SupportShape::Cuboid { lo, hi } => {
                let mut s = 0.0;
                for a in 0..3 {
                    let d = (lo[a] - z[a]).max(z[a] - hi[a]).max(0.0);
                    s += d * d;
                }
                s.sqrt()
            }
            SupportShape::Union(parts) => parts
                .iter()
                .map(|p| p.distance_outside(z))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Distance from `z` to the boundary of the shape.
    ///
    /// For unions this is the minimum over member boundaries, which
    /// underestimates the distance to the true union boundary where members
    /// touch; band exclusions built on it are therefore conservative.
    pub fn boundary_distance(&self, z: [f64; 3]) -> f64 {
        match self {
            SupportShape::Disk { center, radius } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                (r - radius).abs()
            }
            SupportShape::Annulus { center, r_in, r_out } => {
                let r = (z[0] - center[0]).hypot(z[1] - center[1]);
                (r - r_in).abs().min((r - r_out).abs())
            }
            SupportShape::Rect { lo, hi } => {
                let out = self.distance_outside(z);
                if out > 0.0 {
                    out
                } else {
                    (0..2)
                        .map(|a| (z[a] - lo[a]).min(hi[a] - z[a]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            SupportShape::Ball { center, radius } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                (r - radius).abs()
            }
            SupportShape::Cuboid { lo, hi } => {
                let out = self.distance_outside(z);
                if out > 0.0 {
                    out
                } else {
                    (0..3)
                        .map(|a| (z[a] - lo[a]).min(hi[a] - z[a]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            SupportShape::Union(parts) => parts
                .iter()
                .map(|p| p.boundary_distance(z))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// First-derivative quantity of a vector source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivKind {
    /// `div S` (any dimension).
    Div,
    /// `div⊥ S = -∂₂S₁ + ∂₁S₂` (2D only).
    DivPerp,
    /// `curl S` (3D only).
    Curl,
}

/// Derivative value; `[0]` holds the scalar for `Div`/`DivPerp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivValue {
    pub values: [f64; 3],
    /// True when the value came from the finite-difference fallback.
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum SourceKind {
    Constant { value: [f64; 3] },
    ExampleOne,
    ExampleTwo,
    ExampleThree,
    ExampleFour,
    /// 2D `grad⊥ ψ` with `ψ = amp·(R²-r²)³`: divergence-free.
    GradPerpBump { center: [f64; 2], radius: f64, amplitude: f64 },
    /// 3D `grad ψ`: curl-free with nonzero divergence.
    GradBump3 { center: [f64; 3], radius: f64, amplitude: f64 },
    /// 3D `curl (ψ a) = grad ψ × a`: divergence-free, nonzero curl.
    CurlBump3 { center: [f64; 3], radius: f64, amplitude: f64, axis: [f64; 3] },
    /// Smooth vector bump `amp·(R²-r²)²·v`.
    Bump3 { center: [f64; 3], radius: f64, value: [f64; 3] },
}

/// Parametric compactly supported vector source.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    kind: SourceKind,
    support: SupportShape,
    label: String,
}

/// The quartic radial profile of `example_two`:
/// `(10r⁴ - 11.6r² + 1.6)² = 100 (r²-0.16)² (r²-1)²`,
/// vanishing to second order at `r ∈ {0.4, 1}`.
fn quartic_profile(r: f64) -> f64 {
    let q = 10.0 * r.powi(4) - 11.6 * r * r + 1.6;
    q * q
}

fn quartic_profile_deriv(r: f64) -> f64 {
    let q = 10.0 * r.powi(4) - 11.6 * r * r + 1.6;
    2.0 * q * (40.0 * r.powi(3) - 23.2 * r)
}

impl SourceSpec {
    pub fn dimension(&self) -> usize {
        self.support.dimension()
    }

    pub fn support(&self) -> &SupportShape {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Source value at `z`; identically zero outside the support.
    pub fn eval(&self, z: [f64; 3]) -> [f64; 3] {
        if !self.support.contains(z) {
            return [0.0; 3];
        }
        match &self.kind {
            SourceKind::Constant { value } => *value,
            SourceKind::ExampleOne => {
                let r = z[0].hypot(z[1]);
                [r + 5.0, (0.1 * r * r).exp() + 4.0, 0.0]
            }
            SourceKind::ExampleTwo => {
                let mut s = [0.0; 3];
                // component i supported on the annulus around (-1)^(i+1)·(1,1)
                let r1 = (z[0] - 1.0).hypot(z[1] - 1.0);
                if (0.4..=1.0).contains(&r1) {
                    s[0] = quartic_profile(r1);
                }
                let r2 = (z[0] + 1.0).hypot(z[1] + 1.0);
                if (0.4..=1.0).contains(&r2) {
                    s[1] = quartic_profile(r2);
                }
                s
            }
            SourceKind::ExampleThree => {
                // (4,4,4) + curl(|z|², e^{|z|²}, 1)
                let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                let e = r2.exp();
                [
                    4.0 - 2.0 * z[2] * e,
                    4.0 + 2.0 * z[2],
                    4.0 + 2.0 * z[0] * e - 2.0 * z[1],
                ]
            }
            SourceKind::ExampleFour => {
                let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                let v = (r2 - 0.25) * (r2 - 0.25);
                [v, v, v]
            }
            SourceKind::GradPerpBump { center, radius, amplitude } => {
                let d = [z[0] - center[0], z[1] - center[1]];
                let w = radius * radius - (d[0] * d[0] + d[1] * d[1]);
                let g = -6.0 * amplitude * w * w;
                // grad⊥ψ = (-∂₂ψ, ∂₁ψ)
                [-g * d[1], g * d[0], 0.0]
            }
            SourceKind::GradBump3 { center, radius, amplitude } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let w = radius * radius - (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                let g = -6.0 * amplitude * w * w;
                [g * d[0], g * d[1], g * d[2]]
            }
            SourceKind::CurlBump3 { center, radius, amplitude, axis } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let w = radius * radius - (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                let g = -6.0 * amplitude * w * w;
                crate::math::cross3([g * d[0], g * d[1], g * d[2]], *axis)
            }
            SourceKind::Bump3 { center, radius, value } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let w = radius * radius - (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                let p = w * w;
                [p * value[0], p * value[1], p * value[2]]
            }
        }
    }

    /// Analytic derivative when the registry stores one.
    fn analytic_derivative(&self, z: [f64; 3], kind: DerivKind) -> Option<[f64; 3]> {
        if !self.support.contains(z) {
            // All registry sources are compactly supported, so their
            // derivatives vanish outside the (closed) support as well.
            return Some([0.0; 3]);
        }
        match (&self.kind, kind) {
            (SourceKind::Constant { .. }, _) => Some([0.0; 3]),
            (SourceKind::ExampleTwo, DerivKind::Div) => {
                let mut v = 0.0;
                let r1 = (z[0] - 1.0).hypot(z[1] - 1.0);
                if (0.4..=1.0).contains(&r1) && r1 > 0.0 {
                    v += quartic_profile_deriv(r1) * (z[0] - 1.0) / r1;
                }
                let r2 = (z[0] + 1.0).hypot(z[1] + 1.0);
                if (0.4..=1.0).contains(&r2) && r2 > 0.0 {
                    v += quartic_profile_deriv(r2) * (z[1] + 1.0) / r2;
                }
                Some([v, 0.0, 0.0])
            }
            (SourceKind::ExampleTwo, DerivKind::DivPerp) => {
                let mut v = 0.0;
                let r1 = (z[0] - 1.0).hypot(z[1] - 1.0);
                if (0.4..=1.0).contains(&r1) && r1 > 0.0 {
                    v -= quartic_profile_deriv(r1) * (z[1] - 1.0) / r1;
                }
                let r2 = (z[0] + 1.0).hypot(z[1] + 1.0);
                if (0.4..=1.0).contains(&r2) && r2 > 0.0 {
                    v += quartic_profile_deriv(r2) * (z[0] + 1.0) / r2;
                }
                Some([v, 0.0, 0.0])
            }
            (SourceKind::ExampleThree, DerivKind::Div) => Some([0.0; 3]),
            (SourceKind::ExampleFour, DerivKind::Div) => {
                let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                Some([4.0 * (r2 - 0.25) * (z[0] + z[1] + z[2]), 0.0, 0.0])
            }
            (SourceKind::ExampleFour, DerivKind::Curl) => {
                let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                let f = 4.0 * (r2 - 0.25);
                Some([f * (z[1] - z[2]), f * (z[2] - z[0]), f * (z[0] - z[1])])
            }
            (SourceKind::GradPerpBump { center, radius, amplitude }, DerivKind::Div) => {
                let _ = (center, radius, amplitude);
                Some([0.0; 3])
            }
            (SourceKind::GradPerpBump { center, radius, amplitude }, DerivKind::DivPerp) => {
                // div⊥ grad⊥ψ = Δψ = -6 amp (R²-r²)(2(R²-r²) - 4r²)
                let d = [z[0] - center[0], z[1] - center[1]];
                let r2 = d[0] * d[0] + d[1] * d[1];
                let w = radius * radius - r2;
                Some([-6.0 * amplitude * w * (2.0 * w - 4.0 * r2), 0.0, 0.0])
            }
            (SourceKind::GradBump3 { center, radius, amplitude }, DerivKind::Div) => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let w = radius * radius - r2;
                Some([-6.0 * amplitude * w * (3.0 * w - 4.0 * r2), 0.0, 0.0])
            }
            (SourceKind::GradBump3 { .. }, DerivKind::Curl) => Some([0.0; 3]),
            (SourceKind::CurlBump3 { .. }, DerivKind::Div) => Some([0.0; 3]),
            (SourceKind::CurlBump3 { center, radius, amplitude, axis }, DerivKind::Curl) => {
                // curl(grad ψ × a) = H(ψ)·a − a·Δψ  for constant a
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let w = radius * radius - r2;
                let lap = -6.0 * amplitude * w * (3.0 * w - 4.0 * r2);
                let mut out = [0.0; 3];
                for i in 0..3 {
                    let mut h_row_dot_a = 0.0;
                    for j in 0..3 {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        let h_ij = -6.0 * amplitude * (w * w * delta - 4.0 * w * d[i] * d[j]);
                        h_row_dot_a += h_ij * axis[j];
                    }
                    out[i] = h_row_dot_a - axis[i] * lap;
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Derivative of the source: analytic when stored, otherwise a
    /// second-order central finite difference (step 1e-5) flagged as
    /// approximate. Never NaN for finite inputs.
    pub fn derivative(&self, z: [f64; 3], kind: DerivKind) -> Result<DerivValue> {
        match kind {
            DerivKind::DivPerp if self.dimension() != 2 => {
                return Err(Error::invalid("div_perp is defined in 2D only"));
            }
            DerivKind::Curl if self.dimension() != 3 => {
                return Err(Error::invalid("curl is defined in 3D only"));
            }
            _ => {}
        }
        if let Some(values) = self.analytic_derivative(z, kind) {
            return Ok(DerivValue {
                values,
                approximate: false,
            });
        }
        Ok(DerivValue {
            values: self.finite_difference(z, kind, 1e-5),
            approximate: true,
        })
    }

    /// Central finite difference of `eval` with the given step.
    pub fn finite_difference(&self, z: [f64; 3], kind: DerivKind, h: f64) -> [f64; 3] {
        let partial = |i: usize, j: usize| -> f64 {
            // ∂_j S_i
            let mut zp = z;
            let mut zm = z;
            zp[j] += h;
            zm[j] -= h;
            (self.eval(zp)[i] - self.eval(zm)[i]) / (2.0 * h)
        };
        match kind {
            DerivKind::Div => {
                let n = self.dimension();
                let mut v = 0.0;
                for i in 0..n {
                    v += partial(i, i);
                }
                [v, 0.0, 0.0]
            }
            DerivKind::DivPerp => [-partial(0, 1) + partial(1, 0), 0.0, 0.0],
            DerivKind::Curl => [
                partial(2, 1) - partial(1, 2),
                partial(0, 2) - partial(2, 0),
                partial(1, 0) - partial(0, 1),
            ],
        }
    }
}

/// Evaluates a source at `z`, checking the ambient dimension.
pub fn eval_source(spec: &SourceSpec, z: &[f64]) -> Result<[f64; 3]> {
    if z.len() != spec.dimension() {
        return Err(Error::invalid(format!(
            "point has dimension {}, source expects {}",
            z.len(),
            spec.dimension()
        )));
    }
    let mut p = [0.0; 3];
    p[..z.len()].copy_from_slice(z);
    Ok(spec.eval(p))
}

/// Evaluates a source derivative at `z`, checking the ambient dimension.
pub fn eval_derivative(spec: &SourceSpec, z: &[f64], kind: DerivKind) -> Result<DerivValue> {
    if z.len() != spec.dimension() {
        return Err(Error::invalid(format!(
            "point has dimension {}, source expects {}",
            z.len(),
            spec.dimension()
        )));
    }
    let mut p = [0.0; 3];
    p[..z.len()].copy_from_slice(z);
    spec.derivative(p, kind)
}

/// `S₁ = |z| + 5`, `S₂ = e^{0.1|z|²} + 4` on an explicit 2D support.
pub fn example_one(support: SupportShape) -> Result<SourceSpec> {
    if support.dimension() != 2 {
        return Err(Error::invalid("example_one requires a 2D support"));
    }
    Ok(SourceSpec {
        kind: SourceKind::ExampleOne,
        support,
        label: "example_one".into(),
    })
}

/// `example_one` on its default support, the origin-centered disk of
/// radius 1.5.
pub fn example_one_default() -> SourceSpec {
    example_one(SupportShape::Disk {
        center: [0.0, 0.0],
        radius: 1.5,
    })
    .expect("disk support is 2D")
}

/// Smooth two-annulus source: component `i` is the squared quartic
/// `(10r⁴-11.6r²+1.6)²` of the distance to `(-1)^(i+1)·(1,1)`, supported on
/// `0.4 ≤ r ≤ 1`. Carries analytic `div` and `div⊥`.
pub fn example_two() -> SourceSpec {
    SourceSpec {
        kind: SourceKind::ExampleTwo,
        support: SupportShape::Union(vec![
            SupportShape::Annulus {
                center: [1.0, 1.0],
                r_in: 0.4,
                r_out: 1.0,
            },
            SupportShape::Annulus {
                center: [-1.0, -1.0],
                r_in: 0.4,
                r_out: 1.0,
            },
        ]),
        label: "example_two".into(),
    }
}

/// Divergence-free current `(4,4,4) + curl(|z|², e^{|z|²}, 1)` on two
/// stacked cuboids.
pub fn example_three() -> SourceSpec {
    SourceSpec {
        kind: SourceKind::ExampleThree,
        support: SupportShape::Union(vec![
            SupportShape::Cuboid {
                lo: [-0.5, -0.5, -0.5],
                hi: [0.5, 0.5, 0.0],
            },
            SupportShape::Cuboid {
                lo: [0.0, 0.0, 0.0],
                hi: [0.5, 0.5, 0.5],
            },
        ]),
        label: "example_three".into(),
    }
}

/// Current `(|z|²-0.25)²·(1,1,1)` on the ball of radius 0.5 with nonzero
/// charge density. Carries analytic `div` and `curl`.
pub fn example_four() -> SourceSpec {
    SourceSpec {
        kind: SourceKind::ExampleFour,
        support: SupportShape::Ball {
            center: [0.0; 3],
            radius: 0.5,
        },
        label: "example_four".into(),
    }
}

/// Constant vector on an arbitrary shape.
pub fn constant_on(support: SupportShape, value: [f64; 3]) -> SourceSpec {
    SourceSpec {
        kind: SourceKind::Constant { value },
        support,
        label: "constant".into(),
    }
}

/// Identically zero 2D source (constant zero on a unit disk).
pub fn zero2() -> SourceSpec {
    let mut s = constant_on(
        SupportShape::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        },
        [0.0; 3],
    );
    s.label = "zero".into();
    s
}

/// Identically zero 3D source.
pub fn zero3() -> SourceSpec {
    let mut s = constant_on(
        SupportShape::Ball {
            center: [0.0; 3],
            radius: 1.0,
        },
        [0.0; 3],
    );
    s.label = "zero".into();
    s
}

/// Divergence-free planar source `grad⊥(amp·(R²-r²)³)` on a disk.
pub fn grad_perp_bump(center: [f64; 2], radius: f64, amplitude: f64) -> SourceSpec {
    SourceSpec {
        kind: SourceKind::GradPerpBump {
            center,
            radius,
            amplitude,
        },
        support: SupportShape::Disk { center, radius },
        label: "grad_perp_bump".into(),
    }
}

/// Curl-free spatial source `grad(amp·(R²-r²)³)` on a ball; its divergence
/// is the bump Laplacian, so the charge density is nontrivial.
pub fn grad_bump3(center: [f64; 3], radius: f64, amplitude: f64) -> SourceSpec {
    SourceSpec {
        kind: SourceKind::GradBump3 {
            center,
            radius,
            amplitude,
        },
        support: SupportShape::Ball { center, radius },
        label: "grad_bump".into(),
    }
}

/// Divergence-free rotational source `grad(amp·(R²-r²)³) × axis` on a ball.
pub fn curl_bump3(center: [f64; 3], radius: f64, amplitude: f64, axis: [f64; 3]) -> SourceSpec {
    SourceSpec {
        kind: SourceKind::CurlBump3 {
            center,
            radius,
            amplitude,
            axis,
        },
        support: SupportShape::Ball { center, radius },
        label: "curl_bump".into(),
    }
}

/// Smooth vector bump `amp·(R²-r²)²·v` on a ball.
pub fn bump3(center: [f64; 3], radius: f64, value: [f64; 3]) -> SourceSpec {
    SourceSpec {
        kind: SourceKind::Bump3 {
            center,
            radius,
            value,
        },
        support: SupportShape::Ball { center, radius },
        label: "bump".into(),
    }
}

/// Scalar companion field with compact support.
///
/// Used for the frequency-scaled charge density `q := iωρ = div J`, which
/// is what the charge indicator actually consumes: the physical charge
/// density is `ρ(·, ω) = q / (iω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSpec {
    kind: ScalarKind,
    support: SupportShape,
}

#[derive(Debug, Clone, PartialEq)]
enum ScalarKind {
    Zero,
    /// `div` of the `example_four` current: `4(|z|²-0.25)(z₁+z₂+z₃)`.
    ExampleFourDiv,
    /// `div` of a `grad_bump3` source (its Laplacian profile).
    GradBump3Div { center: [f64; 3], radius: f64, amplitude: f64 },
    /// `div` of a `bump3` source: `-4(R²-r²)(z-c)·v`.
    Bump3Div { center: [f64; 3], radius: f64, value: [f64; 3] },
}

impl ScalarSpec {
    pub fn zero() -> Self {
        ScalarSpec {
            kind: ScalarKind::Zero,
            support: SupportShape::Ball {
                center: [0.0; 3],
                radius: 1.0,
            },
        }
    }

    /// The analytic `div J` of `example_four` on its ball.
    pub fn example_four_div() -> Self {
        ScalarSpec {
            kind: ScalarKind::ExampleFourDiv,
            support: SupportShape::Ball {
                center: [0.0; 3],
                radius: 0.5,
            },
        }
    }

    /// The analytic `div J` of `grad_bump3(center, radius, amplitude)`.
    pub fn grad_bump3_div(center: [f64; 3], radius: f64, amplitude: f64) -> Self {
        ScalarSpec {
            kind: ScalarKind::GradBump3Div {
                center,
                radius,
                amplitude,
            },
            support: SupportShape::Ball { center, radius },
        }
    }

    /// The analytic `div J` of `bump3(center, radius, value)`.
    pub fn bump3_div(center: [f64; 3], radius: f64, value: [f64; 3]) -> Self {
        ScalarSpec {
            kind: ScalarKind::Bump3Div {
                center,
                radius,
                value,
            },
            support: SupportShape::Ball { center, radius },
        }
    }

    pub fn support(&self) -> &SupportShape {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, ScalarKind::Zero)
    }

    pub fn eval(&self, z: [f64; 3]) -> f64 {
        if !self.support.contains(z) {
            return 0.0;
        }
        match &self.kind {
            ScalarKind::Zero => 0.0,
            ScalarKind::ExampleFourDiv => {
                let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                4.0 * (r2 - 0.25) * (z[0] + z[1] + z[2])
            }
            ScalarKind::GradBump3Div { center, radius, amplitude } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let w = radius * radius - r2;
                -6.0 * amplitude * w * (3.0 * w - 4.0 * r2)
            }
            ScalarKind::Bump3Div { center, radius, value } => {
                let d = [z[0] - center[0], z[1] - center[1], z[2] - center[2]];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let w = radius * radius - r2;
                -4.0 * w * (d[0] * value[0] + d[1] * value[1] + d[2] * value[2])
            }
        }
    }
}
