use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use teichmuller::beltrami::{
    harmonic_beltrami, hyperbolic_l2, hyperbolic_l2_squared, linear_dilatation,
    monomial_norm_squared, wp_pairing, BeltramiField, HolomorphicCoeffs, PolarGrid,
};

#[test]
fn monomial_family_and_orthogonality() {
    let grid = PolarGrid::default();
    let fields: Vec<_> = (0..=6)
        .map(|k| harmonic_beltrami(&HolomorphicCoeffs::monomial(k), &grid))
        .collect();
    for (k, mu) in fields.iter().enumerate() {
        let norm = hyperbolic_l2(mu).unwrap();
        let exact = monomial_norm_squared(k);
        assert!((norm * norm - exact).abs() / exact < 1e-6, "k = {k}");
        for (j, nu) in fields.iter().enumerate().filter(|(j, _)| *j != k) {
            assert!(wp_pairing(mu, nu).unwrap().norm() <= 1e-10, "({j}, {k})");
        }
    }
}

/// `φ(z) = 1/(1 − az)` with `a` close to 1 has a pole just outside the disc, so
/// the radial integrand is analytic but not polynomial and Gauss–Legendre
/// converges geometrically rather than being exact. The angular grid is fine
/// enough that its aliasing error sits below the radial error.
#[test]
fn radial_quadrature_converges_for_non_polynomial_fields() {
    let a = 0.999_f64;
    let exact: f64 = (0..200_000)
        .map(|k| a.powi(2 * k) * monomial_norm_squared(k as usize))
        .sum();
    let error = |radial: usize| {
        let grid = PolarGrid::new(radial, 32768).unwrap();
        let mu = BeltramiField::from_fn(grid, |z| {
            let w = 1.0 - z.norm_sqr();
            (Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z * a)).conj() * (w * w)
        });
        (hyperbolic_l2_squared(&mu).unwrap() - exact).abs() / exact
    };
    let (e64, e128) = (error(64), error(128));
    assert!(e64 > 0.0 && e64 < 1e-2, "{e64}");
    assert!(e128 * 100.0 <= e64, "64 nodes: {e64}, 128 nodes: {e128}");
}

#[test]
fn mixed_polynomial_norm_is_weighted_sum_of_monomials() {
    let coeffs = vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(2.0, 1.0),
    ];
    let exact: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm_sqr() * monomial_norm_squared(k))
        .sum();
    let mu = harmonic_beltrami(&HolomorphicCoeffs::new(coeffs), &PolarGrid::default());
    let got = hyperbolic_l2_squared(&mu).unwrap();
    assert!((got - exact).abs() / exact < 1e-12);
    assert!(mu.sup() < 4.0 + 1e-12);
    assert!((wp_pairing(&mu, &mu).unwrap().re - got).abs() < 1e-12 * got);
    assert!(exact > 0.0 && exact < 8.0 * PI);
}

proptest! {
    #[test]
    fn dilatation_formulas_agree(
        ar in -2.0..2.0f64, ai in -2.0..2.0f64, frac in 0.0..0.999f64, phase in 0.0..std::f64::consts::TAU,
    ) {
        let alpha = Complex64::new(ar, ai);
        prop_assume!(alpha.norm() > 1e-3);
        let beta = Complex64::from_polar(frac * alpha.norm(), phase);
        let d = linear_dilatation(alpha, beta).unwrap();
        prop_assert!((d.k - frac).abs() < 1e-12);
        // rounding of k alone moves (1+k)/(1−k) by about ε·2k/(1−k²) relative
        let bound = 4.0 * f64::EPSILON * (1.0 + 2.0 * d.k / (1.0 - d.k * d.k));
        prop_assert!((d.big_k - d.big_k_from_k()).abs() <= bound * d.big_k);
    }
}
