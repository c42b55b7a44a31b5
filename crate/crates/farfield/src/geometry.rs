//! Observation directions, frequency grids and spatial sampling grids.
//!
//! Directions live on the unit circle (equispaced angles) or the unit
//! sphere (Fibonacci lattice). Frequencies are the uniform grid
//! `m·Δ, m = 1..Λ`, never including zero. Sampling grids are axis-aligned
//! lattices enumerated row-major with the last free axis fastest, so node
//! order is reproducible across runs and worker counts.

use crate::error::{Error, Result};

/// Unit vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction2 {
    pub x: f64,
    pub y: f64,
}

impl Direction2 {
    /// Normalizes `(x, y)`; rejects near-zero input.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let n = x.hypot(y);
        if n < 1e-14 {
            return Err(Error::invalid("direction must be nonzero"));
        }
        Ok(Direction2 { x: x / n, y: y / n })
    }

    /// Anticlockwise quarter turn: `(-y, x)`.
    pub fn perp(&self) -> Direction2 {
        Direction2 {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Unit vector in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Direction3 {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n < 1e-14 {
            return Err(Error::invalid("direction must be nonzero"));
        }
        Ok(Direction3 {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

#[derive(Debug, Clone)]
pub enum Directions {
    Circle(Vec<Direction2>),
    Sphere(Vec<Direction3>),
}

/// Observation direction set plus the quadrature weight that stands in for
/// the circle/sphere measure element (`2π/L` resp. `4π/L`).
#[derive(Debug, Clone)]
pub struct DirectionSet {
    directions: Directions,
    weight: f64,
}

impl DirectionSet {
    pub fn dimension(&self) -> usize {
        match self.directions {
            Directions::Circle(_) => 2,
            Directions::Sphere(_) => 3,
        }
    }

    pub fn len(&self) -> usize {
        match &self.directions {
            Directions::Circle(v) => v.len(),
            Directions::Sphere(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-direction quadrature weight.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn circle_directions(&self) -> Option<&[Direction2]> {
        match &self.directions {
            Directions::Circle(v) => Some(v),
            Directions::Sphere(_) => None,
        }
    }

    pub fn sphere_directions(&self) -> Option<&[Direction3]> {
        match &self.directions {
            Directions::Sphere(v) => Some(v),
            Directions::Circle(_) => None,
        }
    }

    /// Direction `l` embedded in 3-space (planar directions get z = 0).
    pub fn dir3(&self, l: usize) -> [f64; 3] {
        match &self.directions {
            Directions::Circle(v) => [v[l].x, v[l].y, 0.0],
            Directions::Sphere(v) => v[l].as_array(),
        }
    }
}

/// Equispaced directions on the unit circle:
/// `(cos 2lπ/L, sin 2lπ/L)` for `l = 0..L-1`, weight `2π/L`.
pub fn theta_circle(count: usize) -> Result<DirectionSet> {
    if count == 0 {
        return Err(Error::invalid("direction count L must be >= 1"));
    }
    let dirs = (0..count)
        .map(|l| {
            let a = 2.0 * std::f64::consts::PI * l as f64 / count as f64;
            Direction2 {
                x: a.cos(),
                y: a.sin(),
            }
        })
        .collect();
    Ok(DirectionSet {
        directions: Directions::Circle(dirs),
        weight: 2.0 * std::f64::consts::PI / count as f64,
    })
}

/// Fibonacci lattice on the unit sphere, weight `4π/L`.
///
/// For `l = 1..L`:
/// `x₃ = 1 − 2l/L`, `x₁ = √(1−x₃²)·cos((√5−1)πl)`, `x₂ = √(1−x₃²)·sin((√5−1)πl)`.
/// The index runs from 1, so `l = L` lands exactly on the south pole.
pub fn fibonacci_sphere(count: usize) -> Result<DirectionSet> {
    if count == 0 {
        return Err(Error::invalid("direction count L must be >= 1"));
    }
    let golden_angle = (5.0_f64.sqrt() - 1.0) * std::f64::consts::PI;
    let dirs = (1..=count)
        .map(|l| {
            let z = 1.0 - 2.0 * l as f64 / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let a = golden_angle * l as f64;
            Direction3 {
                x: r * a.cos(),
                y: r * a.sin(),
                z,
            }
        })
        .collect();
    Ok(DirectionSet {
        directions: Directions::Sphere(dirs),
        weight: 4.0 * std::f64::consts::PI / count as f64,
    })
}

/// Uniform frequency (or wavenumber) grid `m·Δ, m = 1..Λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    delta: f64,
    count: usize,
}

impl FrequencyGrid {
    pub fn new(delta: f64, count: usize) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::invalid("frequency step must be positive"));
        }
        if count == 0 {
            return Err(Error::invalid("frequency count must be >= 1"));
        }
        Ok(FrequencyGrid { delta, count })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// m-th value, `m = 1..=count`.
    pub fn value(&self, m: usize) -> f64 {
        debug_assert!(m >= 1 && m <= self.count);
        m as f64 * self.delta
    }

    pub fn max_value(&self) -> f64 {
        self.value(self.count)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.count).map(|m| self.value(m))
    }
}

/// Uniform frequency grid, free-function form.
pub fn frequency_grid(delta: f64, count: usize) -> Result<FrequencyGrid> {
    FrequencyGrid::new(delta, count)
}

/// Coordinate axis of a 3D box, named after the component it pins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Z1,
    Z2,
    Z3,
}

impl Axis {
    pub fn index(&self) -> usize {
        match self {
            Axis::Z1 => 0,
            Axis::Z2 => 1,
            Axis::Z3 => 2,
        }
    }

    /// 1-based axis label as used in run configs and slice captions.
    pub fn from_one_based(i: usize) -> Result<Axis> {
        match i {
            1 => Ok(Axis::Z1),
            2 => Ok(Axis::Z2),
            3 => Ok(Axis::Z3),
            _ => Err(Error::invalid(format!("axis must be 1, 2 or 3, got {i}"))),
        }
    }
}

/// Axis-aligned sampling lattice.
///
/// Stores bounds and spacing only; nodes are synthesized on demand. A 3D
/// box may be restricted to a coordinate plane (`slice`), in which case
/// only the two free axes are enumerated. Enumeration is row-major with
/// the last free axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    dim: usize,
    lo: [f64; 3],
    hi: [f64; 3],
    spacing: f64,
    slice: Option<(Axis, f64)>,
    counts: [usize; 3],
}

impl SamplingGrid {
    /// 2D rectangle `[lo, hi]` sampled with spacing `h`.
    pub fn cartesian2(lo: [f64; 2], hi: [f64; 2], h: f64) -> Result<Self> {
        Self::build(2, [lo[0], lo[1], 0.0], [hi[0], hi[1], 0.0], h, None)
    }

    /// 3D box `[lo, hi]` sampled with spacing `h`.
    pub fn cartesian3(lo: [f64; 3], hi: [f64; 3], h: f64) -> Result<Self> {
        Self::build(3, lo, hi, h, None)
    }

    /// Plane slice of a 3D box: the `axis` coordinate is pinned to `offset`.
    pub fn plane_slice(
        lo: [f64; 3],
        hi: [f64; 3],
        axis: Axis,
        offset: f64,
        h: f64,
    ) -> Result<Self> {
        let a = axis.index();
        if offset < lo[a] || offset > hi[a] {
            return Err(Error::invalid(format!(
                "slice offset {offset} outside bounds [{}, {}]",
                lo[a], hi[a]
            )));
        }
        Self::build(3, lo, hi, h, Some((axis, offset)))
    }

    fn build(
        dim: usize,
        lo: [f64; 3],
        hi: [f64; 3],
        h: f64,
        slice: Option<(Axis, f64)>,
    ) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::invalid("grid spacing must be positive"));
        }
        let mut counts = [1usize; 3];
        for a in 0..dim {
            if !(hi[a] > lo[a]) {
                return Err(Error::invalid(format!(
                    "degenerate bounds on axis {a}: [{}, {}]",
                    lo[a], hi[a]
                )));
            }
            // Tolerate a few ulps so spans that are exact multiples of h
            // (6 / 0.01) do not lose their endpoint node.
            counts[a] = ((hi[a] - lo[a]) / h + 1e-9).floor() as usize + 1;
        }
        if let Some((axis, _)) = slice {
            counts[axis.index()] = 1;
        }
        Ok(SamplingGrid {
            dim,
            lo,
            hi,
            spacing: h,
            slice,
            counts,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn bounds(&self) -> ([f64; 3], [f64; 3]) {
        (self.lo, self.hi)
    }

    pub fn slice(&self) -> Option<(Axis, f64)> {
        self.slice
    }

    /// Axes that are actually enumerated, slowest first.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|a| match self.slice {
                Some((axis, _)) => axis.index() != *a,
                None => true,
            })
            .collect()
    }

    /// Node count along `axis` (1 on a pinned axis).
    pub fn axis_count(&self, axis: usize) -> usize {
        self.counts[axis]
    }

    /// Lattice coordinates along a free axis.
    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis])
            .map(|i| self.lo[axis] + i as f64 * self.spacing)
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.free_axes().iter().map(|&a| self.counts[a]).product()
    }

    /// Measure of one lattice cell: `h^n` on a full grid, `h²` on a slice.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.free_axes().len() as i32)
    }

    /// Coordinates of node `idx` in enumeration order.
    pub fn node(&self, idx: usize) -> [f64; 3] {
        let axes = self.free_axes();
        let mut rem = idx;
        let mut z = [0.0; 3];
        if let Some((axis, offset)) = self.slice {
            z[axis.index()] = offset;
        }
        for (pos, &a) in axes.iter().enumerate() {
            let stride: usize = axes[pos + 1..].iter().map(|&b| self.counts[b]).product();
            let i = rem / stride;
            rem %= stride;
            z[a] = self.lo[a] + i as f64 * self.spacing;
        }
        z
    }

    /// All nodes in enumeration order.
    pub fn nodes(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        (0..self.node_count()).map(|i| self.node(i))
    }
}

/// 2D rectangle grid, free-function form.
pub fn cartesian_grid(lo: [f64; 2], hi: [f64; 2], h: f64) -> Result<SamplingGrid> {
    SamplingGrid::cartesian2(lo, hi, h)
}

/// Plane slice of a 3D box, free-function form.
pub fn plane_slice(
    lo: [f64; 3],
    hi: [f64; 3],
    axis: Axis,
    offset: f64,
    h: f64,
) -> Result<SamplingGrid> {
    SamplingGrid::plane_slice(lo, hi, axis, offset, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_l4_hits_quarter_turns() {
        let set = theta_circle(4).unwrap();
        let d = set.circle_directions().unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (got, want) in d.iter().zip(expect) {
            assert!((got.x - want.0).abs() < 1e-12);
            assert!((got.y - want.1).abs() < 1e-12);
        }
        assert!((set.weight() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn circle_l1_is_east_with_full_weight() {
        let set = theta_circle(1).unwrap();
        let d = set.circle_directions().unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[0].x - 1.0).abs() < 1e-15 && d[0].y.abs() < 1e-15);
        assert!((set.weight() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn circle_rejects_zero() {
        assert!(theta_circle(0).is_err());
        assert!(fibonacci_sphere(0).is_err());
    }

    #[test]
    fn circle_is_closed_under_rotation_by_step() {
        let l = 51;
        let set = theta_circle(l).unwrap();
        let d = set.circle_directions().unwrap();
        let a = 2.0 * std::f64::consts::PI / l as f64;
        let (s, c) = a.sin_cos();
        for i in 0..l {
            let rx = c * d[i].x - s * d[i].y;
            let ry = s * d[i].x + c * d[i].y;
            let j = (i + 1) % l;
            assert!((rx - d[j].x).abs() < 1e-12 && (ry - d[j].y).abs() < 1e-12);
        }
    }

    #[test]
    fn fibonacci_l2_has_pole_and_equator_point() {
        let set = fibonacci_sphere(2).unwrap();
        let d = set.sphere_directions().unwrap();
        // l = 1: z = 0, angle (√5−1)π
        assert!((d[0].x - (-0.7374)).abs() < 1e-3);
        assert!((d[0].y - (-0.6755)).abs() < 1e-3);
        assert!(d[0].z.abs() < 1e-15);
        // l = 2 = L lands on the south pole
        assert!((d[1].z + 1.0).abs() < 1e-15);
        assert!(d[1].x.abs() < 1e-15 && d[1].y.abs() < 1e-15);
    }

    #[test]
    fn directions_are_unit_and_weights_sum_to_measure() {
        let set = fibonacci_sphere(151).unwrap();
        assert_eq!(set.len(), 151);
        for d in set.sphere_directions().unwrap() {
            let n = (d.x * d.x + d.y * d.y + d.z * d.z).sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        let total = set.weight() * set.len() as f64;
        assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-12);

        let set2 = theta_circle(51).unwrap();
        let total2 = set2.weight() * set2.len() as f64;
        assert!((total2 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn frequency_grid_spans_paper_defaults() {
        let g = frequency_grid(0.5, 80).unwrap();
        assert_eq!(g.count(), 80);
        assert!((g.value(1) - 0.5).abs() < 1e-15);
        assert!((g.max_value() - 40.0).abs() < 1e-12);

        let fine = frequency_grid(0.125, 320).unwrap();
        assert!((fine.max_value() - 40.0).abs() < 1e-12);
        assert_eq!(fine.values().count(), 320);

        assert!(frequency_grid(0.0, 3).is_err());
        assert!(frequency_grid(1.0, 0).is_err());

        let single = frequency_grid(1.0, 1).unwrap();
        assert_eq!(single.values().collect::<Vec<_>>(), vec![1.0]);
    }

    #[test]
    fn grid_node_counts_match_span() {
        let g = cartesian_grid([-3.0, -3.0], [3.0, 3.0], 0.01).unwrap();
        assert_eq!(g.axis_count(0), 601);
        assert_eq!(g.axis_count(1), 601);
        assert_eq!(g.node_count(), 601 * 601);

        let corners = cartesian_grid([0.0, 0.0], [1.0, 1.0], 1.0).unwrap();
        assert_eq!(corners.node_count(), 4);
        let pts: Vec<_> = corners.nodes().collect();
        assert_eq!(pts[0][..2], [0.0, 0.0]);
        assert_eq!(pts[1][..2], [0.0, 1.0]); // last axis fastest
        assert_eq!(pts[2][..2], [1.0, 0.0]);
        assert_eq!(pts[3][..2], [1.0, 1.0]);
    }

    #[test]
    fn plane_slice_enumerates_two_axes() {
        let g = plane_slice([-1.0; 3], [1.0; 3], Axis::Z3, 0.25, 0.01).unwrap();
        assert_eq!(g.node_count(), 201 * 201);
        assert_eq!(g.free_axes(), vec![0, 1]);
        for z in g.nodes().take(425) {
            assert_eq!(z[2], 0.25);
        }
        assert!((g.cell_volume() - 1e-4).abs() < 1e-18);
    }

    #[test]
    fn slice_offset_must_lie_in_bounds() {
        assert!(plane_slice([-1.0; 3], [1.0; 3], Axis::Z1, 1.5, 0.1).is_err());
    }

    #[test]
    fn degenerate_bounds_rejected() {
        assert!(cartesian_grid([0.0, 0.0], [0.0, 1.0], 0.1).is_err());
        assert!(cartesian_grid([0.0, 0.0], [1.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = cartesian_grid([-1.0, -1.0], [1.0, 1.0], 0.37).unwrap();
        let b = cartesian_grid([-1.0, -1.0], [1.0, 1.0], 0.37).unwrap();
        let na: Vec<_> = a.nodes().collect();
        let nb: Vec<_> = b.nodes().collect();
        assert_eq!(na, nb);
        for z in &na {
            assert!(z[0] >= -1.0 - 1e-12 && z[0] <= 1.0 + 1e-9);
        }
    }
}
