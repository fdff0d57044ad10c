use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use teichmuller::action::{
    block_identity_defects, composition_matrix, hs_offdiag, symplectic_defect,
    SymplecticBlockMatrix,
};
use teichmuller::circle::{compose, flow, CircleMap, MoebiusMap};
use teichmuller::siegel::{metric_at_zero, moebius_action, period_point, SiegelPoint};
use teichmuller::{random, CMatrix};

fn rough_flow(seed: u64) -> CircleMap {
    let mut rng = random::rng(seed);
    flow(&random::flow_field(&mut rng, 8, 0.3), 1.0).unwrap()
}

#[test]
fn symplectic_defect_shrinks_as_truncation_grows() {
    let map = rough_flow(11);
    let coarse = symplectic_defect(&composition_matrix(&map, 32, 128).unwrap(), 8);
    let fine = symplectic_defect(&composition_matrix(&map, 64, 256).unwrap(), 8);
    assert!(fine <= coarse, "{coarse} -> {fine}");
}

#[test]
fn real_maps_have_block_structure_and_sp_identities() {
    for seed in 0..4 {
        let a = composition_matrix(&rough_flow(seed), 64, 256).unwrap();
        assert!(a.reality_defect() < 1e-12, "seed {seed}");
        let (unit, sym) = block_identity_defects(&a, 16);
        assert!(unit < 1e-6 && sym < 1e-6, "seed {seed}: {unit} {sym}");
    }
}

#[test]
fn moebius_off_diagonal_block_vanishes_while_flows_keep_it() {
    let m = CircleMap::Moebius(MoebiusMap::hyperbolic(0.4));
    assert!(hs_offdiag(&composition_matrix(&m, 32, 512).unwrap()) < 1e-10);
    assert!(hs_offdiag(&composition_matrix(&rough_flow(3), 32, 128).unwrap()) > 1e-3);
}

#[test]
fn period_point_is_constant_on_moebius_cosets() {
    let phi = rough_flow(5);
    let m = CircleMap::Moebius(
        MoebiusMap::new(
            Complex64::new(1.04f64.sqrt(), 0.0),
            Complex64::new(0.0, 0.2),
        )
        .unwrap(),
    );
    let (n, samples, core) = (64, 1024, 16);
    let z1 = period_point(&composition_matrix(&phi, n, samples).unwrap()).unwrap();
    let z2 = period_point(&composition_matrix(&compose(&m, &phi), n, samples).unwrap()).unwrap();
    let d =
        (z1.matrix().view((0, 0), (core, core)) - z2.matrix().view((0, 0), (core, core))).norm();
    assert!(d < 1e-8, "{d}");
}

/// `[[U,0],[0,Ū]]·[[C,S],[S,C]]·[[V,0],[0,V̄]]` with `C = cosh t`, `S = sinh t`
/// diagonal: an exact element of the block symplectic group.
fn exact_symplectic(rng: &mut impl Rng, n: usize) -> SymplecticBlockMatrix {
    let (u, v) = (random_unitary(rng, n), random_unitary(rng, n));
    let t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.5)).collect();
    let c = CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(if i == j { t[i].cosh() } else { 0.0 }, 0.0)
    });
    let s = CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(if i == j { t[i].sinh() } else { 0.0 }, 0.0)
    });
    let g = &u * c * &v;
    let h = &u * s * v.map(|z| z.conj());
    SymplecticBlockMatrix::from_blocks(&g, &h).unwrap()
}

#[test]
fn linear_fractional_action_keeps_points_in_the_disc() {
    let mut rng = random::rng(17);
    for n in [1, 4, 12] {
        let a = exact_symplectic(&mut rng, n);
        let z =
            SiegelPoint::new(random_symmetric(&mut rng, n).map(|c| c * (0.9 / n as f64))).unwrap();
        assert!(z.membership().min_eig > 0.0);
        let w = moebius_action(&a, &z).unwrap();
        let m = w.membership();
        assert!(m.relative_symmetric_defect() < 1e-10, "n = {n}: {m:?}");
        assert!(m.min_eig > 0.0, "n = {n}: {m:?}");
    }
}

fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    m.qr().q()
}

fn random_symmetric(rng: &mut impl Rng, n: usize) -> CMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    (&m + m.transpose()).map(|c| c * 0.5)
}

#[test]
fn metric_is_invariant_under_the_unitary_isotropy() {
    let mut rng = random::rng(99);
    for n in [1, 3, 8] {
        let u = random_unitary(&mut rng, n);
        let (a, b) = (random_symmetric(&mut rng, n), random_symmetric(&mut rng, n));
        let before = metric_at_zero(&a, &b, 1e-12).unwrap();
        let ta = &u * &a * u.transpose();
        let tb = &u * &b * u.transpose();
        let after = metric_at_zero(&ta, &tb, 1e-12).unwrap();
        assert!(
            (before - after).norm() < 1e-12 * before.norm().max(1.0),
            "n = {n}"
        );
    }
}

#[test]
fn identity_operator_fixes_the_origin() {
    let z = period_point(&SymplecticBlockMatrix::identity(8)).unwrap();
    assert_eq!(z, SiegelPoint::origin(8));
}
