#![allow(dead_code)]

use gpd_core::GpdParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p1981() -> GpdParams {
    GpdParams::new(0.342, 7.533, 2.839).unwrap()
}

/// Deterministic random valid `(B, x_t, alpha)` triples:
/// B in [0.05, 2], x_t in [1, 20], alpha in [1.1, 6].
pub fn random_triples(n: usize, seed: u64) -> Vec<GpdParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let b = rng.gen_range(0.05..=2.0);
            let x_t = rng.gen_range(1.0..=20.0);
            let alpha = rng.gen_range(1.1..=6.0);
            GpdParams::new(b, x_t, alpha).unwrap()
        })
        .collect()
}

/// Composite trapezoid rule with `n` panels.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for k in 1..n {
        s += f(a + k as f64 * h);
    }
    s * h
}
