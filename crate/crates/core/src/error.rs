use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "aliasing: {samples} samples cannot resolve modes up to {modes} (need at least {required})"
    )]
    Aliasing {
        samples: usize,
        modes: usize,
        required: usize,
    },
    #[error("lift is not strictly increasing at node {index}")]
    NonMonotone { index: usize },
    #[error("bisection failed to bracket the preimage of {target}")]
    BisectionFailed { target: f64 },
    #[error("Möbius parameters violate |a|² − |b|² = 1 (defect {defect:e})")]
    NotUnimodular { defect: f64 },
    #[error("degenerate point triple: {0}")]
    DegenerateTriple(&'static str),
    #[error("truncation mismatch: {0}")]
    Truncation(String),
    #[error("block ḡ is ill-conditioned (condition number {cond:e} exceeds cap {cap:e})")]
    IllConditioned { cond: f64, cap: f64 },
    #[error("singular denominator in linear fractional action")]
    Singular,
    #[error("matrix is not symmetric (defect {defect:e} > {tol:e})")]
    NotSymmetric { defect: f64, tol: f64 },
    #[error("point {0} is not inside the open unit disc")]
    OutsideDisc(num_complex::Complex64),
    #[error("tangent vector has non-zero psu(1,1) modes")]
    Unprojected,
    #[error("tangent vector is zero")]
    ZeroTangent,
    #[error("fields live on different polar grids")]
    GridMismatch,
    #[error("integrand does not decay at the boundary; hyperbolic L² norm diverges")]
    Divergent,
    #[error("∂z f vanishes at r = {r}, θ = {theta}")]
    VanishingDerivative { r: f64, theta: f64 },
    #[error("not quasiconformal: |β| = {beta} ≥ |α| = {alpha}")]
    NotQuasiconformal { alpha: f64, beta: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
