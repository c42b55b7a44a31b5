//! Deterministic multiplicative data noise.
//!
//! Each far-field block `(l, m, t)` — `t` indexing the wave family within
//! a record — is multiplied by `1 + δ(N₁ + iN₂)` with independent standard
//! normal draws. The draws come from a counter-based stream: the tuple
//! `(seed, l, m, t)` is hashed with the splitmix64 finalizer into two
//! 64-bit words, which feed a Box–Muller transform. Values therefore never
//! depend on evaluation order or worker count.

use crate::math::C64;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Two standard normal draws for block `(l, m, t)` under `seed`.
pub fn normal_pair(seed: u64, l: u32, m: u32, t: u32) -> (f64, f64) {
    let counter = ((l as u64) << 34) | ((m as u64) << 2) | t as u64;
    let a = mix64(seed ^ mix64(counter));
    let b = mix64(a ^ 0xD1B5_4A32_D192_ED03);
    // u ∈ (0, 1], v ∈ [0, 1)
    let u = ((a >> 11) + 1) as f64 / (1u64 << 53) as f64;
    let v = (b >> 11) as f64 / (1u64 << 53) as f64;
    let r = (-2.0 * u.ln()).sqrt();
    let phi = 2.0 * std::f64::consts::PI * v;
    (r * phi.cos(), r * phi.sin())
}

/// The multiplicative factor `1 + δ(N₁ + iN₂)` for block `(l, m, t)`.
pub fn noise_factor(seed: u64, l: u32, m: u32, t: u32, delta: f64) -> C64 {
    let (n1, n2) = normal_pair(seed, l, m, t);
    C64::new(1.0 + delta * n1, delta * n2)
}
