//! The truncated restricted Siegel disc.
//!
//! A point is a symmetric `N × N` matrix `Z: H₋ → H₊` (in the `H^{1/2}`
//! orthonormal mode basis) with `I − Z Z* > 0`. Symplectic block matrices act by
//! `Z ↦ (gZ + h)(h̄Z + ḡ)⁻¹`; the period point of a circle map is the image of
//! `0` under its composition operator, `Z = h ḡ⁻¹`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::action::SymplecticBlockMatrix;
use crate::{CMatrix, Error, Result};

/// Default cap on the condition number of `ḡ`.
pub const DEFAULT_CONDITION_CAP: f64 = 1e8;

/// Smallest eigenvalue of `I − ZZ*` that still counts as positive.
pub const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    z: CMatrix,
}

/// Disc-membership diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    /// `‖Z − Zᵀ‖_F`.
    pub symmetric_defect: f64,
    /// Smallest eigenvalue of `I − Z Z*`.
    pub min_eig: f64,
    /// `‖Z‖_F`.
    pub hs_norm: f64,
}

impl Membership {
    /// Symmetry defect relative to `max(1, ‖Z‖_F)`.
    pub fn relative_symmetric_defect(&self) -> f64 {
        self.symmetric_defect / self.hs_norm.max(1.0)
    }

    pub fn is_member(&self, symmetry_tol: f64) -> bool {
        self.relative_symmetric_defect() <= symmetry_tol && self.min_eig > POSITIVITY_TOL
    }
}

impl SiegelPoint {
    pub fn new(z: CMatrix) -> Result<Self> {
        if z.nrows() != z.ncols() {
            return Err(Error::Truncation("Siegel points are square".into()));
        }
        Ok(Self { z })
    }

    pub fn origin(order: usize) -> Self {
        Self {
            z: CMatrix::zeros(order, order),
        }
    }

    pub fn order(&self) -> usize {
        self.z.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.z
    }

    pub fn into_matrix(self) -> CMatrix {
        self.z
    }

    pub fn membership(&self) -> Membership {
        disc_membership(&self.z)
    }
}

/// Reports symmetry defect, `min eig(I − ZZ*)` and Frobenius norm.
pub fn disc_membership(z: &CMatrix) -> Membership {
    let n = z.nrows();
    let symmetric_defect = (z - z.transpose()).norm();
    let min_eig = if n == 0 {
        1.0
    } else {
        let mut q = CMatrix::identity(n, n) - z * z.adjoint();
        // enforce exact Hermitian symmetry before the eigensolver
        q = (&q + q.adjoint()).map(|c| c * 0.5);
        SymmetricEigen::new(q)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    Membership {
        symmetric_defect,
        min_eig,
        hs_norm: z.norm(),
    }
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// The period point `Z = h ḡ⁻¹`, image of the origin under `A`.
///
/// Evaluated as `Z = (I + h h*)⁻¹ h gᵀ`, which equals `h ḡ⁻¹` whenever
/// `gᵀḡ − h*h = I`. The truncated `ḡ` of a strongly distorting map can be
/// numerically singular even though the untruncated block is invertible;
/// `I + h h*` is Hermitian with spectrum in `[1, ∞)`.
pub fn period_point(a: &SymplecticBlockMatrix) -> Result<SiegelPoint> {
    let b = a.blocks();
    let n = b.h.nrows();
    let lhs = CMatrix::identity(n, n) + &b.h * b.h.adjoint();
    let rhs = &b.h * b.g.transpose();
    let z = lhs.cholesky().ok_or(Error::Singular)?.solve(&rhs);
    Ok(SiegelPoint { z })
}

/// `Z = h ḡ⁻¹` by a pivoted LU solve against `ḡ`, refusing blocks whose
/// condition number exceeds `cap`.
pub fn period_point_direct(a: &SymplecticBlockMatrix, cap: f64) -> Result<SiegelPoint> {
    let b = a.blocks();
    let g_bar = b.g.map(|c| c.conj());
    let cond = condition_number(&g_bar);
    if !(cond <= cap) {
        return Err(Error::IllConditioned { cond, cap });
    }
    // Z ḡ = h  ⇔  ḡᵀ Zᵀ = hᵀ
    let zt = g_bar
        .transpose()
        .lu()
        .solve(&b.h.transpose())
        .ok_or(Error::Singular)?;
    Ok(SiegelPoint { z: zt.transpose() })
}

/// Condition number of the `ḡ` block, the quantity that limits the direct
/// period-point formula.
pub fn g_bar_condition(a: &SymplecticBlockMatrix) -> f64 {
    condition_number(&a.blocks().g.map(|c| c.conj()))
}

/// Linear fractional action `Z ↦ (gZ + h)(h̄Z + ḡ)⁻¹`.
pub fn moebius_action(a: &SymplecticBlockMatrix, z: &SiegelPoint) -> Result<SiegelPoint> {
    if a.order() != z.order() {
        return Err(Error::Truncation(format!(
            "operator of order {} acting on point of order {}",
            a.order(),
            z.order()
        )));
    }
    let b = a.blocks();
    let num = &b.g * &z.z + &b.h;
    let den = b.h.map(|c| c.conj()) * &z.z + b.g.map(|c| c.conj());
    // W den = num  ⇔  denᵀ Wᵀ = numᵀ
    let lu = den.transpose().lu();
    if lu.u().diagonal().iter().any(|d| d.norm() == 0.0) {
        return Err(Error::Singular);
    }
    let wt = lu.solve(&num.transpose()).ok_or(Error::Singular)?;
    if wt.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(SiegelPoint { z: wt.transpose() })
}

/// Invariant Hermitian metric at the origin, `Tr(V̄ U)`, on symmetric tangent
/// matrices. Inputs whose symmetry defect is within `tol` are symmetrized first.
pub fn metric_at_zero(u: &CMatrix, v: &CMatrix, tol: f64) -> Result<Complex64> {
    if u.shape() != v.shape() || u.nrows() != u.ncols() {
        return Err(Error::Truncation(
            "tangent matrices must be square and equal-sized".into(),
        ));
    }
    let sym = |m: &CMatrix| -> Result<CMatrix> {
        let defect = (m - m.transpose()).norm();
        if defect > tol * m.norm().max(1.0) {
            return Err(Error::NotSymmetric { defect, tol });
        }
        Ok((m + m.transpose()).map(|c| c * 0.5))
    };
    let (u, v) = (sym(u)?, sym(v)?);
    // Tr(V̄U) = Σ_{ij} conj(V_ij) U_ji
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..u.nrows() {
        for j in 0..u.ncols() {
            acc += v[(i, j)].conj() * u[(j, i)];
        }
    }
    Ok(acc)
}

/// `z ↦ (az + b)/(b̄z + ā)` on the open unit disc.
pub fn su11_orbit(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisc(z));
    }
    let defect = (a.norm_sqr() - b.norm_sqr() - 1.0).abs();
    if !(defect <= 1e-10 * a.norm_sqr().max(1.0)) {
        return Err(Error::NotUnimodular { defect });
    }
    Ok((a * z + b) / (b.conj() * z + a.conj()))
}

/// Poincaré-disc Hermitian metric `u v̄ / (1 − |z|²)²`.
pub fn hyperbolic_metric(z: Complex64, u: Complex64, v: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisc(z));
    }
    let s = 1.0 - z.norm_sqr();
    Ok(u * v.conj() / (s * s))
}

/// `1 × 1` block matrix `[[a, b], [b̄, ā]]`.
pub fn rank_one_operator(a: Complex64, b: Complex64) -> SymplecticBlockMatrix {
    let g = DMatrix::from_element(1, 1, a);
    let h = DMatrix::from_element(1, 1, b);
    SymplecticBlockMatrix::from_blocks(&g, &h).expect("1×1 blocks")
}
