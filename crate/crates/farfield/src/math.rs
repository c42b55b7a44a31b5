//! Small real/complex vector helpers shared by the forward and indicator sums.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Complex vector with up to three active components.
///
/// Scalar indicators use arity 1, planar fields arity 2, spatial fields
/// arity 3; the unused trailing components stay at zero so the storage
/// layout is uniform across indicator kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec {
    pub c: [C64; 3],
}

impl CVec {
    pub const ZERO: CVec = CVec {
        c: [C64::new(0.0, 0.0); 3],
    };

    pub fn scalar(v: C64) -> Self {
        CVec {
            c: [v, C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        }
    }

    pub fn from2(a: C64, b: C64) -> Self {
        CVec {
            c: [a, b, C64::new(0.0, 0.0)],
        }
    }

    pub fn from_real3(v: [f64; 3]) -> Self {
        CVec {
            c: [
                C64::new(v[0], 0.0),
                C64::new(v[1], 0.0),
                C64::new(v[2], 0.0),
            ],
        }
    }

    #[inline]
    pub fn add_scaled(&mut self, other: &CVec, s: C64) {
        self.c[0] += other.c[0] * s;
        self.c[1] += other.c[1] * s;
        self.c[2] += other.c[2] * s;
    }

    pub fn scale(&self, s: C64) -> CVec {
        CVec {
            c: [self.c[0] * s, self.c[1] * s, self.c[2] * s],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Dot product of real 3-vectors.
#[inline]
pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cross product of real 3-vectors.
#[inline]
pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Cross product of a complex vector with a real vector.
#[inline]
pub fn cross_c3(a: &[C64; 3], b: [f64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Dot product of a complex vector with a real vector.
#[inline]
pub fn dot_c3(a: &[C64; 3], b: [f64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// e^{i t} for real t.
#[inline]
pub fn cis(t: f64) -> C64 {
    let (s, c) = t.sin_cos();
    C64::new(c, s)
}
