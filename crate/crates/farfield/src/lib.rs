//! Far-field synthesis and quantitative sampling reconstruction of
//! compactly supported elastic and electromagnetic sources.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! 1. [`geometry`] — observation directions (equispaced circle, Fibonacci
//!    sphere), frequency grids and Cartesian sampling grids/slices;
//! 2. [`sources`] + [`forward`] — benchmark sources with analytic
//!    derivatives, far-field synthesis by support-fitted quadrature, a
//!    Fourier-transform cross-check oracle, and a deterministic
//!    multiplicative noise model;
//! 3. [`indicators`] — discrete sampling indicators that rebuild the
//!    source (or its divergence / curl) from far-field data on a grid;
//! 4. [`metrics`] + [`io`] + [`driver`] — relative-error reports,
//!    threshold masks, trend verdicts, file formats and the CLI pipeline.
//!
//! See the crate examples for one runnable program per capability.

pub mod error;
pub mod geometry;
pub mod math;
pub mod sources;

pub mod driver;
pub mod forward;
pub mod indicators;
pub mod io;
pub mod metrics;

pub use error::{Error, Result};
