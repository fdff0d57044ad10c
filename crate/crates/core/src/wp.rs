//! Weil–Petersson forms at the identity coset and the period-map pullback.
//!
//! Tangent vectors at `[Id]` are real vector fields modulo `psu(1,1)`, i.e. with
//! the modes `-1, 0, 1` removed. The three forms are
//!
//! * `h(u, v) = 2π Σ_{n≥2} n(n²−1) u_n v̄_n` (Hermitian),
//! * `g(u, v) = π Σ_{|n|≥2} |n|(n²−1) u_n v̄_n` (Riemannian),
//! * `ω(u, v) = −iπ Σ_{|n|≥2} n(n²−1) u_n v̄_n` (symplectic),
//!
//! and for real fields `h = g + iω`.
//!
//! The pullback experiment differentiates the period map numerically along the
//! flow of `u` and compares the Siegel metric `Tr(Ū U)` of the resulting tangent
//! matrix with `h(u, u)`. The ratio is expected to be a universal constant.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::action::composition_matrix;
use crate::circle::{flow, VectorField};
use crate::siegel::{metric_at_zero, period_point};
use crate::{par, CMatrix, Error, Result};

/// Default finite-difference step.
pub const DEFAULT_EPS: f64 = 1e-3;

/// Symmetry tolerance applied to tangent matrices before taking the metric.
pub const TANGENT_SYMMETRY_TOL: f64 = 1e-6;

/// A real vector field with no `psu(1,1)` component.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    field: VectorField,
}

impl TangentVector {
    /// Accepts a field whose modes `-1, 0, 1` vanish.
    pub fn new(field: VectorField) -> Result<Self> {
        if field.coeff(0).norm() != 0.0 || field.coeff(1).norm() != 0.0 {
            return Err(Error::Unprojected);
        }
        Ok(Self { field })
    }

    /// `cos(nx)`, `n ≥ 2`.
    pub fn cos_mode(n: usize) -> Result<Self> {
        Self::new(VectorField::cos_mode(n, 1.0))
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.field.coeff(n)
    }

    pub fn band(&self) -> usize {
        self.field.band()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            field: self.field.scaled(s),
        }
    }

    /// Precomposition with the rotation `R_θ`: `u_n ↦ e^{inθ} u_n`.
    pub fn rotated(&self, theta: f64) -> Self {
        let coeffs = self
            .field
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, &c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .collect();
        Self {
            field: VectorField::new(coeffs).expect("rotation keeps coefficients finite"),
        }
    }
}

/// Removes the `psu(1,1)` modes `-1, 0, 1`.
pub fn project_psu11(v: &VectorField) -> TangentVector {
    let mut coeffs = v.coeffs().to_vec();
    for c in coeffs.iter_mut().take(2) {
        *c = Complex64::new(0.0, 0.0);
    }
    TangentVector {
        field: VectorField::new(coeffs).expect("projection keeps coefficients finite"),
    }
}

/// Values of the three Weil–Petersson forms on a pair of tangent vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WpForms {
    pub h: Complex64,
    pub g: f64,
    pub omega: f64,
}

fn weight(n: i64) -> f64 {
    let n = n as f64;
    n * (n * n - 1.0)
}

pub fn wp_forms(u: &TangentVector, v: &TangentVector) -> WpForms {
    let band = u.band().max(v.band()) as i64;
    let pair = |n: i64| u.coeff(n) * v.coeff(n).conj();
    let h: Complex64 = (2..=band).map(|n| weight(n) * pair(n)).sum::<Complex64>() * (2.0 * PI);
    let mut g = Complex64::new(0.0, 0.0);
    let mut w = Complex64::new(0.0, 0.0);
    for n in (-band..=-2).chain(2..=band) {
        g += weight(n).abs() * pair(n);
        w += weight(n) * pair(n);
    }
    let g = g * PI;
    let omega = Complex64::new(0.0, -PI) * w;
    WpForms {
        h,
        g: g.re,
        omega: omega.re,
    }
}

/// Resolution of the numerical period-map derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullbackSettings {
    pub order: usize,
    pub samples: usize,
    pub eps: f64,
    /// Combine steps `ε` and `ε/2` as `(4U(ε/2) − U(ε))/3`.
    pub richardson: bool,
}

impl Default for PullbackSettings {
    fn default() -> Self {
        Self {
            order: 64,
            samples: 256,
            eps: DEFAULT_EPS,
            richardson: false,
        }
    }
}

fn central_difference(
    u: &TangentVector,
    eps: f64,
    order: usize,
    samples: usize,
) -> Result<CMatrix> {
    let z = |t: f64| -> Result<CMatrix> {
        let map = flow(u.field(), t)?;
        Ok(period_point(&composition_matrix(&map, order, samples)?)?.into_matrix())
    };
    let (zp, zm) = (z(eps)?, z(-eps)?);
    Ok((zp - zm).map(|c| c / (2.0 * eps)))
}

/// Tangent matrix `U = (Z(φ_ε) − Z(φ_{−ε}))/(2ε)` of the period map along the
/// flow of `u`.
pub fn tangent_period(u: &TangentVector, settings: &PullbackSettings) -> Result<CMatrix> {
    if !(settings.eps > 0.0) {
        return Err(Error::Invalid(
            "finite-difference step must be positive".into(),
        ));
    }
    let coarse = central_difference(u, settings.eps, settings.order, settings.samples)?;
    if !settings.richardson {
        return Ok(coarse);
    }
    let fine = central_difference(u, settings.eps / 2.0, settings.order, settings.samples)?;
    Ok((fine * Complex64::new(4.0, 0.0) - coarse).map(|c| c / 3.0))
}

/// One row of the pullback experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullbackRow {
    pub h_wp: f64,
    pub trace: f64,
    pub ratio: f64,
    pub symmetry_defect: f64,
}

/// `Tr(Ū U) / h(u, u)` together with its ingredients.
pub fn pullback(u: &TangentVector, settings: &PullbackSettings) -> Result<PullbackRow> {
    let h_wp = wp_forms(u, u).h.re;
    if !(h_wp > 0.0) {
        return Err(Error::ZeroTangent);
    }
    let tangent = tangent_period(u, settings)?;
    let symmetry_defect = (&tangent - tangent.transpose()).norm();
    let trace = metric_at_zero(&tangent, &tangent, TANGENT_SYMMETRY_TOL)?.re;
    Ok(PullbackRow {
        h_wp,
        trace,
        ratio: trace / h_wp,
        symmetry_defect,
    })
}

pub fn pullback_ratio(u: &TangentVector, settings: &PullbackSettings) -> Result<f64> {
    pullback(u, settings).map(|r| r.ratio)
}

/// Runs [`pullback`] for `cos(nx)` over the given modes, in parallel, with rows
/// returned in input order.
pub fn pullback_table(
    modes: &[usize],
    settings: &PullbackSettings,
) -> Result<Vec<(usize, PullbackRow)>> {
    par::map_slice(modes, |&n| {
        let u = TangentVector::cos_mode(n)?;
        pullback(&u, settings).map(|row| (n, row))
    })
    .into_iter()
    .collect()
}

/// Largest relative pairwise deviation `|r_i − r_j| / min(r_i, r_j)`.
pub fn max_pairwise_deviation(ratios: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, &a) in ratios.iter().enumerate() {
        for &b in &ratios[i + 1..] {
            worst = worst.max((a - b).abs() / a.min(b));
        }
    }
    worst
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}
