//! Seeded generators for the random maps and vectors used by tests and experiments.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circle::{CircleMap, MoebiusMap, VectorField};
use crate::fourier::FourierVector;

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A real band-limited vector field with `|v_0| + 2Σ|v_n| ≤ sup`, so that
/// `‖v‖_∞ ≤ sup`. Mode amplitudes fall off like `1/n` with random phases.
pub fn flow_field<R: Rng>(rng: &mut R, band: usize, sup: f64) -> VectorField {
    let mut coeffs: Vec<Complex64> = (0..=band)
        .map(|n| {
            let amp = rng.gen_range(0.2..1.0) / (n.max(1) as f64);
            if n == 0 {
                Complex64::new(amp * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::from_polar(amp, rng.gen_range(0.0..TAU))
            }
        })
        .collect();
    let bound = coeffs[0].re.abs() + 2.0 * coeffs[1..].iter().map(|c| c.norm()).sum::<f64>();
    let target = sup * rng.gen_range(0.5..1.0);
    for c in &mut coeffs {
        *c *= target / bound;
    }
    VectorField::new(coeffs).expect("finite coefficients")
}

/// A Möbius map with `|b| ≤ max_b` and uniformly random phases.
pub fn moebius<R: Rng>(rng: &mut R, max_b: f64) -> MoebiusMap {
    let b = Complex64::from_polar(rng.gen_range(0.0..max_b), rng.gen_range(0.0..TAU));
    let a = Complex64::from_polar((1.0 + b.norm_sqr()).sqrt(), rng.gen_range(0.0..TAU));
    MoebiusMap::new(a, b).expect("unit determinant by construction")
}

pub fn moebius_map<R: Rng>(rng: &mut R, max_b: f64) -> CircleMap {
    CircleMap::Moebius(moebius(rng, max_b))
}

/// Complex vector with coefficients uniform in the unit square.
pub fn fourier_vector<R: Rng>(rng: &mut R, order: usize) -> FourierVector {
    FourierVector::from_fn(order, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Real vector (`u_{-n} = conj(u_n)`) with random positive-mode coefficients.
pub fn real_fourier_vector<R: Rng>(rng: &mut R, order: usize) -> FourierVector {
    let pos: Vec<Complex64> = (0..order)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    FourierVector::from_positive(&pos)
}
