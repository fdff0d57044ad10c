//! Truncated model of `H^{1/2}(S¹, ℂ)/ℂ`.
//!
//! A [`FourierVector`] stores the coefficients `u_n` of `Σ u_n e^{inx}` for
//! `1 ≤ |n| ≤ N`. There is no zero mode: vectors are taken modulo constants.
//! Coefficients are laid out as `[u_{-N}, …, u_{-1}, u_1, …, u_N]`, the same
//! ordering used for the rows and columns of composition matrices.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance for the reality check `u_{-n} = conj(u_n)`.
pub const REALITY_TOL: f64 = 1e-10;

/// Position of mode `n` (`1 ≤ |n| ≤ order`) in a mode-ordered array.
#[inline]
pub fn mode_index(order: usize, n: i64) -> usize {
    debug_assert!(n != 0 && n.unsigned_abs() as usize <= order);
    if n < 0 {
        (n + order as i64) as usize
    } else {
        order + n as usize - 1
    }
}

/// Mode number stored at position `idx` of a mode-ordered array.
#[inline]
pub fn index_mode(order: usize, idx: usize) -> i64 {
    if idx < order {
        idx as i64 - order as i64
    } else {
        (idx - order) as i64 + 1
    }
}

/// Iterator over the modes `-N, …, -1, 1, …, N` in storage order.
pub fn modes(order: usize) -> impl Iterator<Item = i64> + Clone {
    let n = order as i64;
    (-n..=-1).chain(1..=n)
}

/// Which eigenspace of the Hilbert transform to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `H₊`, modes `n ≥ 1`, where `J = i`.
    Plus,
    /// `H₋`, modes `n ≤ -1`, where `J = -i`.
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    order: usize,
    coeffs: Vec<Complex64>,
    is_real: bool,
}

impl FourierVector {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * order],
            is_real: true,
        }
    }

    /// Builds a vector from coefficients in storage order. The reality tag is
    /// not set; use [`FourierVector::into_real`] to assert it.
    pub fn from_coeffs(order: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * order {
            return Err(Error::Truncation(format!(
                "expected {} coefficients for order {order}, got {}",
                2 * order,
                coeffs.len()
            )));
        }
        Ok(Self {
            order,
            coeffs,
            is_real: false,
        })
    }

    /// Builds a vector with `u_n = f(n)`.
    pub fn from_fn(order: usize, f: impl FnMut(i64) -> Complex64) -> Self {
        Self {
            order,
            coeffs: modes(order).map(f).collect(),
            is_real: false,
        }
    }

    /// Builds a real vector from its non-negative half `u_1, …, u_N`;
    /// negative modes are filled in by conjugation.
    pub fn from_positive(positive: &[Complex64]) -> Self {
        let order = positive.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * order];
        for (k, &c) in positive.iter().enumerate() {
            let n = k as i64 + 1;
            coeffs[mode_index(order, n)] = c;
            coeffs[mode_index(order, -n)] = c.conj();
        }
        Self {
            order,
            coeffs,
            is_real: true,
        }
    }

    /// The single mode `e^{inx}`.
    pub fn basis(order: usize, n: i64) -> Self {
        let mut v = Self::zeros(order);
        v.is_real = false;
        v.coeffs[mode_index(order, n)] = Complex64::new(1.0, 0.0);
        v
    }

    /// `cos(nx)`.
    pub fn cos(order: usize, n: usize) -> Self {
        let mut pos = vec![Complex64::new(0.0, 0.0); order];
        pos[n - 1] = Complex64::new(0.5, 0.0);
        Self::from_positive(&pos)
    }

    /// `sin(nx)`.
    pub fn sin(order: usize, n: usize) -> Self {
        let mut pos = vec![Complex64::new(0.0, 0.0); order];
        pos[n - 1] = Complex64::new(0.0, -0.5);
        Self::from_positive(&pos)
    }

    /// Checks `u_{-n} = conj(u_n)` and sets the reality tag.
    pub fn into_real(mut self) -> Result<Self> {
        let defect = self.reality_defect();
        let scale = self.sup_norm().max(1.0);
        if defect > REALITY_TOL * scale {
            return Err(Error::Invalid(format!(
                "vector is not real: max |u_-n - conj(u_n)| = {defect:e}"
            )));
        }
        self.is_real = true;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    /// `u_n`, or zero outside the stored band.
    pub fn get(&self, n: i64) -> Complex64 {
        if n == 0 || n.unsigned_abs() as usize > self.order {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[mode_index(self.order, n)]
        }
    }

    pub fn reality_defect(&self) -> f64 {
        (1..=self.order as i64)
            .map(|n| (self.get(-n) - self.get(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Zero-pads (or truncates) to a new order.
    pub fn resized(&self, order: usize) -> Self {
        Self {
            order,
            coeffs: modes(order).map(|n| self.get(n)).collect(),
            is_real: self.is_real,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            is_real: self.is_real && s.im == 0.0,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        Self {
            order,
            coeffs: modes(order).map(|n| self.get(n) + other.get(n)).collect(),
            is_real: self.is_real && other.is_real,
        }
    }

    /// The `H^{1/2}` inner product `Σ |n| u_n conj(v_n)`.
    pub fn h_half_inner(&self, other: &Self) -> Complex64 {
        paired_sum(self, other, |n| n.unsigned_abs() as f64)
    }

    /// The Hilbert transform `u_n ↦ i·sgn(n)·u_n`.
    pub fn hilbert_transform(&self) -> Self {
        Self {
            order: self.order,
            coeffs: modes(self.order)
                .zip(&self.coeffs)
                .map(|(n, &c)| if n > 0 { I * c } else { -I * c })
                .collect(),
            is_real: self.is_real,
        }
    }

    /// The symplectic form `Ω(u, v) = -i Σ n u_n conj(v_n)`.
    pub fn symplectic_form(&self, other: &Self) -> Complex64 {
        -I * paired_sum(self, other, |n| n as f64)
    }

    /// Orthogonal projection onto `H₊` or `H₋`.
    pub fn project(&self, sign: Sign) -> Self {
        Self {
            order: self.order,
            coeffs: modes(self.order)
                .zip(&self.coeffs)
                .map(|(n, &c)| match sign {
                    Sign::Plus if n > 0 => c,
                    Sign::Minus if n < 0 => c,
                    _ => Complex64::new(0.0, 0.0),
                })
                .collect(),
            is_real: self.is_real && self.coeffs.iter().all(|c| c.norm() == 0.0),
        }
    }

    /// Values `Σ u_n e^{inx_j}` on the uniform grid `x_j = 2πj/M`.
    pub fn synthesize(&self, samples: usize) -> Result<Vec<Complex64>> {
        if samples < 2 * self.order + 1 {
            return Err(Error::Aliasing {
                samples,
                modes: self.order,
                required: 2 * self.order + 1,
            });
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); samples];
        for (n, &c) in modes(self.order).zip(&self.coeffs) {
            buf[n.rem_euclid(samples as i64) as usize] = c;
        }
        FftPlanner::new()
            .plan_fft_inverse(samples)
            .process(&mut buf);
        Ok(buf)
    }

    /// Discrete Fourier coefficients `(1/M) Σ_j f(x_j) e^{-inx_j}` for
    /// `1 ≤ |n| ≤ order`; the mean is discarded.
    pub fn analyze(samples: &[Complex64], order: usize) -> Result<Self> {
        let plan = Analyzer::new(samples.len(), order)?;
        let mut buf = samples.to_vec();
        Ok(Self {
            order,
            coeffs: plan.modes_in_place(&mut buf),
            is_real: false,
        })
    }

    /// Evaluates the truncated series at an arbitrary angle.
    pub fn eval(&self, x: f64) -> Complex64 {
        modes(self.order)
            .zip(&self.coeffs)
            .map(|(n, &c)| c * Complex64::from_polar(1.0, n as f64 * x))
            .sum()
    }
}

/// `Σ w(n) u_n conj(v_n)`, accumulating the `±n` terms together. For real
/// vectors the two terms of a pair are exact conjugates in floating point, so
/// symmetric and antisymmetric weights give exactly symmetric and
/// antisymmetric sums.
fn paired_sum(u: &FourierVector, v: &FourierVector, weight: impl Fn(i64) -> f64) -> Complex64 {
    let order = u.order.max(v.order) as i64;
    (1..=order)
        .map(|n| {
            (u.get(n) * v.get(n).conj()) * weight(n) + (u.get(-n) * v.get(-n).conj()) * weight(-n)
        })
        .sum()
}

/// Reusable forward transform for repeated analysis at fixed `(M, N)`.
pub(crate) struct Analyzer {
    fft: Arc<dyn Fft<f64>>,
    samples: usize,
    order: usize,
}

impl Analyzer {
    pub(crate) fn new(samples: usize, order: usize) -> Result<Self> {
        if samples < 2 * order + 1 {
            return Err(Error::Aliasing {
                samples,
                modes: order,
                required: 2 * order + 1,
            });
        }
        Ok(Self {
            fft: FftPlanner::new().plan_fft_forward(samples),
            samples,
            order,
        })
    }

    /// Transforms `buf` in place and returns the mode-ordered coefficients.
    pub(crate) fn modes_in_place(&self, buf: &mut [Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(buf.len(), self.samples);
        self.fft.process(buf);
        let scale = 1.0 / self.samples as f64;
        modes(self.order)
            .map(|n| buf[n.rem_euclid(self.samples as i64) as usize] * scale)
            .collect()
    }
}
