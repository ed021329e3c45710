use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, XftError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum XftError {
    #[error("invalid size {n}: at least one sample is required")]
    InvalidSize { n: usize },

    #[error("size {n} exceeds the dense-matrix limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("shape mismatch: expected length {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("Newton iteration for Hermite zero {index} did not converge in {iterations} steps")]
    Convergence { index: usize, iterations: usize },

    #[error("order z = {z} lies outside the closed unit disk")]
    InvalidOrder { z: Complex64 },

    #[error("order z = {z} is singular for the Mehler kernel (1 - z^2 = 0)")]
    SingularOrder { z: Complex64 },

    #[error("parameter b is zero; use the b = 0 branch (lct_b_zero) with a sampler")]
    DegenerateB,

    #[error("parameter b = {b} is nonzero; the b = 0 branch does not apply")]
    NotBZero { b: f64 },

    #[error("parameters are not unimodular: ad - bc = {det}")]
    NotUnimodular { det: f64 },

    #[error("b = 0 branch requires d > 0 (got d = {d})")]
    UnsupportedBranch { d: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrand does not decay at the truncation radius {radius}: |f| = {tail:e} at the boundary")]
    Truncation { radius: f64, tail: f64 },

    #[error("quadrature did not reach tolerance {tol:e} within {points} points")]
    QuadratureLimit { tol: f64, points: usize },
}
