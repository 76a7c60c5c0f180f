//! Shared helpers for the integration tests.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use slocc_core::scheme::{DeformedQubit, Spin};
use slocc_core::{Scheme, Statistics};

/// Normalized random scheme: each particle spreads over a random nonempty subset
/// of the `2n` labels with complex amplitudes.
pub fn random_scheme(rng: &mut ChaCha8Rng, n: usize, stats: Statistics) -> Scheme {
    let mut qubits = Vec::with_capacity(n);
    for q in 0..n {
        let mut amps = Vec::new();
        while amps.is_empty() {
            for r in 0..n {
                for spin in [Spin::Up, Spin::Down] {
                    if rng.random_bool(0.45) {
                        let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        if a.norm() > 1e-3 {
                            amps.push(((r, spin), a));
                        }
                    }
                }
            }
        }
        let norm = amps.iter().map(|(_, a): &((usize, Spin), Complex64)| a.norm_sqr()).sum::<f64>().sqrt();
        qubits.push(DeformedQubit::new(q, amps.into_iter().map(|(k, a)| (k, a / norm))));
    }
    Scheme::new(qubits, stats, "random").expect("normalized by construction")
}

pub fn all_spins(n: usize) -> impl Iterator<Item = Vec<Spin>> {
    (0u32..1 << n).map(move |k| (0..n).map(|i| if k >> i & 1 == 1 { Spin::Down } else { Spin::Up }).collect())
}

pub fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}
