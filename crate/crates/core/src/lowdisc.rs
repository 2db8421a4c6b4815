//! Halton points with a seeded Cranley–Patterson rotation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// A `D`-dimensional Halton sequence in `[0, 1)^D` shifted modulo one by a
/// seed-dependent offset. Deterministic for a fixed seed.
#[derive(Clone, Debug)]
pub struct Halton<const D: usize> {
    index: u64,
    shift: [f64; D],
}

impl<const D: usize> Halton<D> {
    pub fn new(seed: u64) -> Self {
        assert!(D <= PRIMES.len(), "Halton dimension {D} exceeds available bases");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shift = [0.0; D];
        for s in shift.iter_mut() {
            *s = rng.gen::<f64>();
        }
        // Index 0 maps to the origin; start one past it.
        Self { index: 1, shift }
    }

    pub fn next_point(&mut self) -> [f64; D] {
        let mut out = [0.0; D];
        for (k, o) in out.iter_mut().enumerate() {
            let x = radical_inverse(self.index, PRIMES[k]) + self.shift[k];
            *o = x - x.floor();
        }
        self.index += 1;
        out
    }
}

impl<const D: usize> Iterator for Halton<D> {
    type Item = [f64; D];
    fn next(&mut self) -> Option<[f64; D]> {
        Some(self.next_point())
    }
}
