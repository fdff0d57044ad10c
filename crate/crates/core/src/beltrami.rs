//! Beltrami coefficients on the unit disc.
//!
//! Fields are sampled on a polar grid whose radial nodes are Gauss–Legendre in
//! `s = r²` and whose angular nodes are uniform, so that
//! `∬ F d²z = ½ ∫₀¹ ∫₀^{2π} F dθ ds` is integrated by a tensor rule. The
//! hyperbolic density is `ρ(z) = 4 (1 − |z|²)⁻²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::quadrature::gauss_legendre_on;
use crate::{par, Error, Result};

pub const DEFAULT_RADIAL_NODES: usize = 64;
pub const DEFAULT_ANGULAR_NODES: usize = 256;

/// A boundary-shell value of `(1 − s)·f(s)` above this fraction of the
/// integral is treated as non-decay.
pub const DIVERGENCE_RATIO: f64 = 1e-3;

/// Relative size below which `∂z f` counts as vanishing.
pub const VANISHING_TOL: f64 = 1e-12;

/// Coefficients `c_0, …, c_K` of a polynomial `φ(z) = Σ c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicCoeffs {
    coeffs: Vec<Complex64>,
}

impl HolomorphicCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// Tensor grid on the open unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    /// Squared radii, increasing, all in `(0, 1)`.
    s: Vec<f64>,
    /// Gauss–Legendre weights in `s`.
    weights: Vec<f64>,
    angular: usize,
}

impl PolarGrid {
    pub fn new(radial: usize, angular: usize) -> Result<Self> {
        if radial == 0 || angular == 0 {
            return Err(Error::Invalid(
                "polar grid needs at least one node per direction".into(),
            ));
        }
        let (s, weights) = gauss_legendre_on(radial, 0.0, 1.0);
        Ok(Self {
            s,
            weights,
            angular,
        })
    }

    pub fn radial_nodes(&self) -> usize {
        self.s.len()
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular
    }

    pub fn len(&self) -> usize {
        self.s.len() * self.angular
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.s[i].sqrt()
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.angular as f64
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radius(i), self.angle(j))
    }

    /// Flat index of node `(i, j)`: radial-major.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.angular + j
    }

    /// `(r, θ)` for every node in flat order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.s.len())
            .flat_map(move |i| (0..self.angular).map(move |j| (self.radius(i), self.angle(j))))
    }

    /// `∬ F d²z` for samples `F` in flat order. Shells are summed in parallel
    /// and then accumulated in radial order.
    fn integrate(&self, values: &[Complex64]) -> Complex64 {
        self.shell_means(values)
            .iter()
            .zip(&self.weights)
            .map(|(m, w)| m * *w)
            .sum::<Complex64>()
            * PI
    }

    /// Angular mean of each radial shell.
    fn shell_means(&self, values: &[Complex64]) -> Vec<Complex64> {
        let m = self.angular;
        par::map_indices(self.s.len(), |i| {
            values[i * m..(i + 1) * m].iter().sum::<Complex64>() / m as f64
        })
    }
}

impl Default for PolarGrid {
    fn default() -> Self {
        Self::new(DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES).expect("default grid is non-empty")
    }
}

/// Samples of a Beltrami coefficient `μ` on a polar grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiField {
    grid: PolarGrid,
    values: Vec<Complex64>,
    sup: f64,
}

impl BeltramiField {
    pub fn new(grid: PolarGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Invalid(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self { grid, values, sup })
    }

    /// Samples `f(z)` at every grid node.
    pub fn from_fn(grid: PolarGrid, f: impl Fn(Complex64) -> Complex64 + Sync + Send) -> Self {
        let m = grid.angular;
        let shells = par::map_indices(grid.radial_nodes(), |i| {
            (0..m).map(|j| f(grid.point(i, j))).collect::<Vec<_>>()
        });
        Self::new(grid, shells.concat()).expect("one sample per node")
    }

    pub fn zero(grid: PolarGrid) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self {
            grid,
            values,
            sup: 0.0,
        }
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `‖μ‖_∞` over the grid.
    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// Whether `sup|μ| < 1`.
    pub fn is_in_unit_ball(&self) -> bool {
        self.sup < 1.0
    }
}

/// `μ(z) = (1 − |z|²)² · conj(φ(z))`.
pub fn harmonic_beltrami(phi: &HolomorphicCoeffs, grid: &PolarGrid) -> BeltramiField {
    BeltramiField::from_fn(grid.clone(), |z| {
        let w = 1.0 - z.norm_sqr();
        phi.eval(z).conj() * (w * w)
    })
}

fn weighted_products(mu: &BeltramiField, nu: &BeltramiField) -> Vec<Complex64> {
    let grid = &mu.grid;
    let m = grid.angular;
    mu.values
        .iter()
        .zip(&nu.values)
        .enumerate()
        .map(|(k, (a, b))| {
            let w = 1.0 - grid.s[k / m];
            a * b.conj() * (4.0 / (w * w))
        })
        .collect()
}

/// `⟨μ, ν⟩ = ∬ μ ν̄ ρ d²z`.
pub fn wp_pairing(mu: &BeltramiField, nu: &BeltramiField) -> Result<Complex64> {
    if mu.grid != nu.grid {
        return Err(Error::GridMismatch);
    }
    Ok(mu.grid.integrate(&weighted_products(mu, nu)))
}

/// `‖μ‖₂² = ∬ |μ|² ρ d²z`, rejecting fields whose weighted density does not
/// decay towards the boundary.
pub fn hyperbolic_l2_squared(mu: &BeltramiField) -> Result<f64> {
    let grid = &mu.grid;
    let density = weighted_products(mu, mu);
    let shells = grid.shell_means(&density);
    let total = PI
        * shells
            .iter()
            .zip(&grid.weights)
            .map(|(m, w)| m.re * w)
            .sum::<f64>();
    if !total.is_finite() {
        return Err(Error::Divergent);
    }
    let last = grid.s.len() - 1;
    // integrability of f on [0, 1) needs (1 − s) f(s) → 0
    let tail = (1.0 - grid.s[last]) * shells[last].re * PI;
    if tail > DIVERGENCE_RATIO * total {
        return Err(Error::Divergent);
    }
    Ok(total)
}

/// Hyperbolic `L²` norm `‖μ‖₂`.
pub fn hyperbolic_l2(mu: &BeltramiField) -> Result<f64> {
    hyperbolic_l2_squared(mu).map(f64::sqrt)
}

/// Closed form of `‖μ‖₂²` for the harmonic differential of `z^k`.
pub fn monomial_norm_squared(k: usize) -> f64 {
    let k = k as f64;
    8.0 * PI / ((k + 1.0) * (k + 2.0) * (k + 3.0))
}

/// Complex dilatation of `f(z) = αz + βz̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearDilatation {
    pub mu: Complex64,
    pub k: f64,
    /// `(|α| + |β|)/(|α| − |β|)`.
    pub big_k: f64,
}

impl LinearDilatation {
    /// `(1 + k)/(1 − k)`, equal to `big_k` up to rounding.
    pub fn big_k_from_k(&self) -> f64 {
        (1.0 + self.k) / (1.0 - self.k)
    }
}

pub fn linear_dilatation(alpha: Complex64, beta: Complex64) -> Result<LinearDilatation> {
    let (a, b) = (alpha.norm(), beta.norm());
    if !(b < a) {
        return Err(Error::NotQuasiconformal { alpha: a, beta: b });
    }
    let mu = beta / alpha;
    Ok(LinearDilatation {
        mu,
        k: mu.norm(),
        big_k: (a + b) / (a - b),
    })
}

/// Pointwise Beltrami coefficient of a map given by its Wirtinger derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMapDilatation {
    pub field: BeltramiField,
    pub sup: f64,
    /// `‖μ‖_∞ < 1` on the grid.
    pub quasiconformal: bool,
}

/// `μ = ∂z̄ f / ∂z f` on the grid.
pub fn beltrami_of_grid_map(
    grid: &PolarGrid,
    dz: &[Complex64],
    dzbar: &[Complex64],
) -> Result<GridMapDilatation> {
    if dz.len() != grid.len() || dzbar.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    let scale = dz.iter().chain(dzbar).map(|c| c.norm()).fold(0.0, f64::max);
    let floor = VANISHING_TOL * scale;
    let mut values = Vec::with_capacity(dz.len());
    for (k, (&p, &q)) in dz.iter().zip(dzbar).enumerate() {
        if !(p.norm() > floor) {
            let (i, j) = (k / grid.angular, k % grid.angular);
            return Err(Error::VanishingDerivative {
                r: grid.radius(i),
                theta: grid.angle(j),
            });
        }
        values.push(q / p);
    }
    let field = BeltramiField::new(grid.clone(), values)?;
    let sup = field.sup();
    Ok(GridMapDilatation {
        quasiconformal: sup < 1.0,
        sup,
        field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn harmonic_values() {
        let phi = HolomorphicCoeffs::monomial(1);
        let z = Complex64::new(0.5, 0.0);
        let w = 1.0 - z.norm_sqr();
        let mu = phi.eval(z).conj() * w * w;
        assert!((mu - c(9.0 / 32.0)).norm() < 1e-15);

        let grid = PolarGrid::default();
        let one = harmonic_beltrami(&HolomorphicCoeffs::new(vec![c(1.0)]), &grid);
        // innermost node is close to the centre, outermost close to the rim
        assert!(one.values()[0].re > 0.999);
        assert!(one.values()[grid.index(DEFAULT_RADIAL_NODES - 1, 0)].re < 1e-6);
        assert!(one.sup() <= 1.0);
    }

    #[test]
    fn monomial_norms_match_closed_form() {
        let grid = PolarGrid::default();
        for k in 0..=6 {
            let mu = harmonic_beltrami(&HolomorphicCoeffs::monomial(k), &grid);
            let got = hyperbolic_l2_squared(&mu).unwrap();
            assert!(rel(got, monomial_norm_squared(k)) < 1e-12, "k = {k}: {got}");
            let norm = hyperbolic_l2(&mu).unwrap();
            assert!(rel(norm * norm, got) < 1e-14);
        }
        assert!(rel(monomial_norm_squared(0), 4.0 * PI / 3.0) < 1e-15);
    }

    #[test]
    fn zero_field_has_zero_norm() {
        assert_eq!(
            hyperbolic_l2(&BeltramiField::zero(PolarGrid::default())).unwrap(),
            0.0
        );
    }

    #[test]
    fn constant_field_diverges() {
        let mu = BeltramiField::from_fn(PolarGrid::default(), |_| c(0.5));
        assert!(matches!(hyperbolic_l2(&mu), Err(Error::Divergent)));
    }

    #[test]
    fn pairing_orthogonality_and_symmetry() {
        let grid = PolarGrid::default();
        let m1 = harmonic_beltrami(&HolomorphicCoeffs::monomial(1), &grid);
        let m2 = harmonic_beltrami(&HolomorphicCoeffs::monomial(2), &grid);
        assert!(wp_pairing(&m1, &m2).unwrap().norm() < 1e-12);
        let one = harmonic_beltrami(&HolomorphicCoeffs::monomial(0), &grid);
        let p = wp_pairing(&one, &one).unwrap();
        assert!(rel(p.re, 4.0 * PI / 3.0) < 1e-12 && p.im.abs() < 1e-14);

        let phi = HolomorphicCoeffs::new(vec![
            Complex64::new(0.3, -1.0),
            Complex64::new(0.0, 2.0),
            c(0.7),
        ]);
        let psi = HolomorphicCoeffs::new(vec![c(1.0), Complex64::new(-0.4, 0.2)]);
        let (a, b) = (
            harmonic_beltrami(&phi, &grid),
            harmonic_beltrami(&psi, &grid),
        );
        let (ab, ba) = (wp_pairing(&a, &b).unwrap(), wp_pairing(&b, &a).unwrap());
        assert!((ab - ba.conj()).norm() < 1e-14);
    }

    #[test]
    fn pairing_rejects_grid_mismatch() {
        let a = BeltramiField::zero(PolarGrid::new(8, 16).unwrap());
        let b = BeltramiField::zero(PolarGrid::new(16, 16).unwrap());
        assert!(matches!(wp_pairing(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn linear_dilatation_examples() {
        let d = linear_dilatation(c(1.0), c(0.0)).unwrap();
        assert_eq!((d.mu, d.k, d.big_k), (c(0.0), 0.0, 1.0));
        let d = linear_dilatation(c(2.0), c(1.0)).unwrap();
        assert_eq!((d.mu, d.k, d.big_k), (c(0.5), 0.5, 3.0));
        assert!((d.big_k_from_k() - d.big_k).abs() < 1e-14);
        assert!(matches!(
            linear_dilatation(c(1.0), Complex64::new(0.0, 1.0)),
            Err(Error::NotQuasiconformal { .. })
        ));
    }

    #[test]
    fn grid_map_dilatation() {
        let grid = PolarGrid::new(4, 8).unwrap();
        let n = grid.len();
        let r = beltrami_of_grid_map(&grid, &vec![c(1.0); n], &vec![c(0.0); n]).unwrap();
        assert_eq!(r.sup, 0.0);
        assert!(r.quasiconformal);

        let r = beltrami_of_grid_map(&grid, &vec![c(2.0); n], &vec![c(1.0); n]).unwrap();
        assert!(r.field.values().iter().all(|&m| m == c(0.5)));

        let r = beltrami_of_grid_map(&grid, &vec![c(1.0); n], &vec![c(2.0); n]).unwrap();
        assert!(!r.quasiconformal);

        let mut dz = vec![c(1.0); n];
        dz[grid.index(2, 3)] = c(0.0);
        match beltrami_of_grid_map(&grid, &dz, &vec![c(0.0); n]) {
            Err(Error::VanishingDerivative { r, theta }) => {
                assert_eq!(r, grid.radius(2));
                assert_eq!(theta, grid.angle(3));
            }
            other => panic!("{other:?}"),
        }
    }
}
