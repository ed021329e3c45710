//! The XFT: a discrete linear canonical transform built from a Hermite-zero
//! discretization of the fractional Fourier transform.
//!
//! - [`fast_lct`]: `O(n log n)` chirp-DFT-chirp evaluation of the LCT and its
//!   Fourier, fractional Fourier and Fresnel special cases.
//! - [`dense_xft`]: dense reference matrices (`F_z = sqrt(2 pi) U^T D(z) U`,
//!   the Mehler kernel, `L = S1 F S2`).
//! - [`analytic_oracle`]: closed-form Gaussian LCT, brute-force quadrature and
//!   error metrics.
//! - [`grid_hermite`]: sampling grids and stable Hermite functions.
//! - [`fft_engine`]: arbitrary-length DFT.

pub mod analytic_oracle;
pub mod cli;
pub mod dense_xft;
pub mod error;
pub mod fast_lct;
pub mod fft_engine;
pub mod grid_hermite;

pub use error::{Result, XftError};
pub use fast_lct::{
    fast_frft, fast_lct, fast_lct_chain, lct_b_zero, xft_fourier, LctParams, Signal,
    TransformResult, XftPlan,
};
pub use grid_hermite::{asymptotic_zeros, HermiteGrid};
pub use num_complex::Complex64;
