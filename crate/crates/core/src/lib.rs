//! Truncated Fourier models of the universal Teichmüller space.
//!
//! The crate works with the symplectic Hilbert space `H^{1/2}(S¹)/ℝ` cut off at a
//! finite number of Fourier modes, and builds on it:
//!
//! * [`fourier`]: the mode-space vector type, the `H^{1/2}` inner product, the
//!   Hilbert transform and the symplectic form.
//! * [`circle`]: orientation-preserving circle maps (Möbius, vector-field flows,
//!   sampled lifts), composition, inversion and the quasisymmetry estimator.
//! * [`action`]: the matrix of the composition operator `f ↦ f∘φ − mean` and its
//!   block structure against `H₊ ⊕ H₋`.
//! * [`siegel`]: period points in the restricted Siegel disc, the linear
//!   fractional action and the invariant metric.
//! * [`wp`]: Weil–Petersson forms at the identity coset and the pullback
//!   experiment comparing them to the Siegel metric.
//! * [`beltrami`]: Beltrami coefficients, harmonic Beltrami differentials and
//!   hyperbolic `L²` quadrature on the unit disc.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise. Results are bitwise identical
//! either way.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod beltrami;
pub mod circle;
mod error;
pub mod fourier;
pub mod io;
pub mod mapspec;
pub mod par;
pub mod quadrature;
pub mod random;
pub mod siegel;
pub mod wp;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used for all operator blocks.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
