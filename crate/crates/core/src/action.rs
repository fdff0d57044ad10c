//! Matrix of the composition operator `V_φ f = f∘φ − (1/2π)∫ f∘φ`.
//!
//! Rows and columns are indexed by the modes `-N..=-1, 1..=N` (the ordering of
//! [`FourierVector`](crate::fourier::FourierVector)). Column `n` holds the
//! coefficients of `V_φ(e^{inx})`, so
//! `A_{mn} = (1/2π)∫ e^{-imx} e^{inφ(x)} dx`.
//!
//! The symplectic block structure `[[g, h], [h̄, ḡ]]` only holds in a basis that
//! is orthonormal for the `H^{1/2}` inner product, `e_n = e^{inx}/√|n|`. The
//! blocks returned by [`SymplecticBlockMatrix::blocks`] are taken in that basis,
//! with `H₋` indexed by `|n|` so that the lower blocks are entrywise conjugates
//! of the upper ones.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circle::CircleMap;
use crate::fourier::{index_mode, mode_index, Analyzer};
use crate::{par, CMatrix, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated composition operator and its `H₊ ⊕ H₋` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticBlockMatrix {
    order: usize,
    raw: CMatrix,
}

/// Upper blocks of the normalized operator together with the reality defect.
#[derive(Debug, Clone)]
pub struct Blocks {
    /// `H₊ → H₊`, `g[j-1][k-1] = Ã_{j,k}`.
    pub g: CMatrix,
    /// `H₋ → H₊`, `h[j-1][k-1] = Ã_{j,-k}`.
    pub h: CMatrix,
    /// `max |A_{-m,-n} − conj(A_{m,n})|`.
    pub reality_defect: f64,
}

impl SymplecticBlockMatrix {
    /// Wraps a raw `2N × 2N` matrix in the `e^{inx}` basis.
    pub fn from_raw(raw: CMatrix) -> Result<Self> {
        if raw.nrows() != raw.ncols() || !raw.nrows().is_multiple_of(2) || raw.nrows() == 0 {
            return Err(Error::Truncation(format!(
                "composition matrix must be 2N × 2N, got {} × {}",
                raw.nrows(),
                raw.ncols()
            )));
        }
        Ok(Self {
            order: raw.nrows() / 2,
            raw,
        })
    }

    /// Assembles `[[g, h], [h̄, ḡ]]` in the `H^{1/2}`-orthonormal basis.
    pub fn from_blocks(g: &CMatrix, h: &CMatrix) -> Result<Self> {
        let n = g.nrows();
        if g.shape() != (n, n) || h.shape() != (n, n) {
            return Err(Error::Truncation(
                "blocks must be square and equal-sized".into(),
            ));
        }
        let mut normalized = CMatrix::zeros(2 * n, 2 * n);
        for j in 1..=n {
            for k in 1..=n {
                let (jp, jm) = (mode_index(n, j as i64), mode_index(n, -(j as i64)));
                let (kp, km) = (mode_index(n, k as i64), mode_index(n, -(k as i64)));
                normalized[(jp, kp)] = g[(j - 1, k - 1)];
                normalized[(jp, km)] = h[(j - 1, k - 1)];
                normalized[(jm, kp)] = h[(j - 1, k - 1)].conj();
                normalized[(jm, km)] = g[(j - 1, k - 1)].conj();
            }
        }
        Ok(Self {
            order: n,
            raw: rescale(&normalized, n, -1.0),
        })
    }

    pub fn identity(order: usize) -> Self {
        Self {
            order,
            raw: CMatrix::identity(2 * order, 2 * order),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Matrix in the `e^{inx}` basis.
    pub fn raw(&self) -> &CMatrix {
        &self.raw
    }

    /// Matrix in the `e^{inx}/√|n|` basis: `Ã_{mn} = √|m| A_{mn} / √|n|`.
    pub fn normalized(&self) -> CMatrix {
        rescale(&self.raw, self.order, 1.0)
    }

    /// `self · other` (apply `other` first).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::Truncation("product of different truncations".into()));
        }
        Ok(Self {
            order: self.order,
            raw: &self.raw * &other.raw,
        })
    }

    /// Extracts `g`, `h` from the normalized operator.
    pub fn blocks(&self) -> Blocks {
        let n = self.order;
        let a = self.normalized();
        let g = DMatrix::from_fn(n, n, |j, k| a[(n + j, n + k)]);
        let h = DMatrix::from_fn(n, n, |j, k| a[(n + j, n - 1 - k)]);
        Blocks {
            g,
            h,
            reality_defect: self.reality_defect(),
        }
    }

    pub fn reality_defect(&self) -> f64 {
        let n = self.order;
        let mut worst: f64 = 0.0;
        for r in 0..2 * n {
            for c in 0..2 * n {
                let (rr, cc) = (2 * n - 1 - r, 2 * n - 1 - c);
                worst = worst.max((self.raw[(rr, cc)] - self.raw[(r, c)].conj()).norm());
            }
        }
        worst
    }

    /// Restriction of the raw matrix to modes `1 ≤ |m|, |n| ≤ core`.
    pub fn core_block(&self, core: usize) -> CMatrix {
        let idx = core_indices(self.order, core);
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.raw[(idx[i], idx[j])])
    }
}

fn core_indices(order: usize, core: usize) -> Vec<usize> {
    let c = core.min(order) as i64;
    (-c..=-1)
        .chain(1..=c)
        .map(|n| mode_index(order, n))
        .collect()
}

/// Multiplies entry `(m, n)` by `(|m|/|n|)^{power/2}`.
fn rescale(a: &CMatrix, order: usize, power: f64) -> CMatrix {
    let w: Vec<f64> = (0..2 * order)
        .map(|i| (index_mode(order, i).unsigned_abs() as f64).powf(0.5 * power))
        .collect();
    DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| a[(r, c)] * (w[r] / w[c]))
}

/// Builds the truncated matrix of `V_φ` from `samples` uniform samples of `φ`.
///
/// Each column samples `e^{inφ(x_j)}` and takes its discrete Fourier
/// coefficients; the mean (mode 0) is dropped. Columns are independent and are
/// computed in parallel.
pub fn composition_matrix(
    map: &CircleMap,
    order: usize,
    samples: usize,
) -> Result<SymplecticBlockMatrix> {
    if order == 0 {
        return Err(Error::Truncation(
            "truncation order must be positive".into(),
        ));
    }
    if samples < 4 * order {
        return Err(Error::Aliasing {
            samples,
            modes: order,
            required: 4 * order,
        });
    }
    let disp = map.displacement_samples(samples);
    let h = TAU / samples as f64;
    for j in 0..samples {
        let next = if j + 1 == samples {
            disp[0]
        } else {
            disp[j + 1]
        };
        if !(h + next - disp[j] > 0.0) {
            return Err(Error::NonMonotone { index: j });
        }
    }
    let analyzer = Analyzer::new(samples, order)?;
    let columns = par::map_indices(2 * order, |col| {
        let n = index_mode(order, col);
        let mut buf: Vec<Complex64> = (0..samples)
            .map(|j| {
                // e^{inx_j} from the exact grid index, times e^{in d(x_j)}
                let k = (n * j as i64).rem_euclid(samples as i64) as f64;
                Complex64::from_polar(1.0, TAU * k / samples as f64)
                    * Complex64::from_polar(1.0, n as f64 * disp[j])
            })
            .collect();
        analyzer.modes_in_place(&mut buf)
    });
    let mut raw = CMatrix::from_element(2 * order, 2 * order, ZERO);
    for (c, column) in columns.into_iter().enumerate() {
        for (r, v) in column.into_iter().enumerate() {
            raw[(r, c)] = v;
        }
    }
    Ok(SymplecticBlockMatrix { order, raw })
}

/// Upper blocks and reality defect.
pub fn block_decompose(a: &SymplecticBlockMatrix) -> Blocks {
    a.blocks()
}

/// `max |Ω(Au, Av) − Ω(u, v)|` over basis vectors `e^{inx}`, `1 ≤ |n| ≤ core`.
pub fn symplectic_defect(a: &SymplecticBlockMatrix, core: usize) -> f64 {
    let order = a.order();
    let cols = core_indices(order, core);
    let weights: Vec<f64> = (0..2 * order)
        .map(|i| index_mode(order, i) as f64)
        .collect();
    let raw = a.raw();
    let rows = par::map_indices(cols.len(), |p| {
        let cp = cols[p];
        let np = index_mode(order, cp);
        let mut worst: f64 = 0.0;
        for &cq in &cols {
            // Ω(Ae_p, Ae_q) = -i Σ_k k A_{kp} conj(A_{kq})
            let s: Complex64 = (0..2 * order)
                .map(|k| weights[k] * raw[(k, cp)] * raw[(k, cq)].conj())
                .sum();
            let omega = Complex64::new(s.im, -s.re);
            let expected = if cp == cq {
                Complex64::new(0.0, -(np as f64))
            } else {
                ZERO
            };
            worst = worst.max((omega - expected).norm());
        }
        worst
    });
    rows.into_iter().fold(0.0, f64::max)
}

/// Hilbert–Schmidt norm of the off-diagonal blocks `H₋ → H₊` and `H₊ → H₋` of
/// the normalized operator.
pub fn hs_offdiag(a: &SymplecticBlockMatrix) -> f64 {
    let n = a.order();
    let na = a.normalized();
    let mut sum = 0.0;
    for r in 0..2 * n {
        for c in 0..2 * n {
            if (r < n) != (c < n) {
                sum += na[(r, c)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Operator norm on modes `|n| ≤ core` of `A(φ∘ψ) − A(ψ)·A(φ)`.
///
/// The composition action is a right action, `V_{φ∘ψ} = V_ψ V_φ`.
pub fn action_composition_residual(
    phi: &CircleMap,
    psi: &CircleMap,
    order: usize,
    samples: usize,
    core: usize,
) -> Result<f64> {
    let both = crate::circle::compose(phi, psi);
    let a_both = composition_matrix(&both, order, samples)?;
    let a_phi = composition_matrix(phi, order, samples)?;
    let a_psi = composition_matrix(psi, order, samples)?;
    let prod = a_psi.mul(&a_phi)?;
    let diff = a_both.core_block(core) - prod.core_block(core);
    Ok(operator_norm(&diff))
}

/// `g g* − h h* − I` and `g hᵀ − h gᵀ` restricted to modes `≤ core`, as
/// max-abs entries.
pub fn block_identity_defects(a: &SymplecticBlockMatrix, core: usize) -> (f64, f64) {
    let b = a.blocks();
    let c = core.min(a.order());
    let unit = &b.g * b.g.adjoint() - &b.h * b.h.adjoint();
    let sym = &b.g * b.h.transpose() - &b.h * b.g.transpose();
    let mut d1: f64 = 0.0;
    let mut d2: f64 = 0.0;
    for i in 0..c {
        for j in 0..c {
            let id = if i == j { 1.0 } else { 0.0 };
            d1 = d1.max((unit[(i, j)] - id).norm());
            d2 = d2.max(sym[(i, j)].norm());
        }
    }
    (d1, d2)
}
