//! Sampling grids built from Hermite zeros and a stable Hermite-function
//! recurrence.
//!
//! Indices are 0-based throughout: node `k` here is node `k + 1` in the usual
//! 1-based statement of the asymptotic zero formula
//! `x_k = (2k - N - 1) / sqrt(2N) * pi / 2`.
//!
//! Raw Hermite polynomials `H_m`, `2^m` and `m!` are never formed. Everything
//! is expressed through the orthonormal Hermite functions
//! `psi_m(x) = H_m(x) exp(-x^2/2) / sqrt(2^m m! sqrt(pi))`, which obey
//! `psi_{m+1} = x sqrt(2/(m+1)) psi_m - sqrt(m/(m+1)) psi_{m-1}`.

use std::f64::consts::{LN_2, PI};

use crate::error::{Result, XftError};

/// Newton iteration cap for [`exact_hermite_zeros`].
pub const MAX_NEWTON_ITERATIONS: usize = 100;

/// Default tolerance for [`exact_hermite_zeros`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-14;

// Rescaling is by an exact power of two so it introduces no rounding.
const RESCALE_EXP: i32 = 500;

/// Uniform grid of asymptotic Hermite zeros.
///
/// Node `k` is `m_k * h` with `m_k = 2k - n + 1` and `h = pi / (2 sqrt(2n))`,
/// so the grid is exactly antisymmetric and its spacing is `2h = pi / sqrt(2n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteGrid {
    nodes: Vec<f64>,
    spacing: f64,
}

impl HermiteGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> f64 {
        self.nodes[k]
    }

    /// Uniform spacing `pi / sqrt(2n)`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Index of the node closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let offset = x / self.spacing + (self.len() as f64 - 1.0) / 2.0;
        (offset.round().max(0.0) as usize).min(self.len() - 1)
    }
}

/// Builds the `n`-point grid of asymptotic Hermite zeros.
pub fn asymptotic_zeros(n: usize) -> Result<HermiteGrid> {
    let spacing = grid_spacing(n)?;
    let half = 0.5 * spacing;
    let nodes = (0..n)
        .map(|k| (2 * k as i64 - n as i64 + 1) as f64 * half)
        .collect();
    Ok(HermiteGrid { nodes, spacing })
}

/// Spacing `pi / sqrt(2n)` of the asymptotic grid.
pub fn grid_spacing(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(XftError::InvalidSize { n });
    }
    Ok(PI / (2.0 * n as f64).sqrt())
}

/// Returns `psi_m(x)` for `m = 0..n_max`.
///
/// The recurrence runs on a rescaled sequence whose exponent is tracked
/// separately, so values stay finite (possibly underflowing to zero) for
/// very large degree and argument.
pub fn hermite_function_row(n_max: usize, x: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n_max);
    if n_max == 0 {
        return row;
    }
    let gauss_log = -0.5 * x * x;
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    row.push(cur * gauss_log.exp());
    for m in 0..n_max - 1 {
        let next = step(m, x, cur, prev);
        prev = cur;
        cur = next;
        if cur.abs() > 2f64.powi(RESCALE_EXP) {
            cur *= 2f64.powi(-RESCALE_EXP);
            prev *= 2f64.powi(-RESCALE_EXP);
            log_scale += RESCALE_EXP as f64 * LN_2;
        }
        row.push(cur * (gauss_log + log_scale).exp());
    }
    row
}

#[inline]
fn step(m: usize, x: f64, cur: f64, prev: f64) -> f64 {
    let m1 = (m + 1) as f64;
    x * (2.0 / m1).sqrt() * cur - (m as f64 / m1).sqrt() * prev
}

/// `(psi_n, psi_{n-1})` at `x` up to a common positive factor.
fn scaled_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        let next = step(m, x, cur, prev);
        prev = cur;
        cur = next;
        if cur.abs() > 2f64.powi(RESCALE_EXP) {
            cur *= 2f64.powi(-RESCALE_EXP);
            prev *= 2f64.powi(-RESCALE_EXP);
        }
    }
    (cur, prev)
}

/// Newton correction `psi_n / psi_n'` using `psi_n' = sqrt(2n) psi_{n-1} - x psi_n`.
pub(crate) fn newton_step(n: usize, x: f64) -> f64 {
    let (p, q) = scaled_pair(n, x);
    p / ((2.0 * n as f64).sqrt() * q - x * p)
}

/// WKB estimate of the `k`-th largest zero (1-based): `x = sqrt(2n+1) cos(phi)`
/// with `2 phi - sin(2 phi) = 4 pi (k - 1/4) / (2n+1)`. Accurate to about 1% of
/// the local zero spacing, edges included.
fn wkb_zero_guess(n: usize, k: usize) -> f64 {
    let nu = 2.0 * n as f64 + 1.0;
    let target = 4.0 * PI * (k as f64 - 0.25) / nu;
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if 2.0 * mid - (2.0 * mid).sin() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    nu.sqrt() * (0.5 * (lo + hi)).cos()
}

/// The `n` real zeros of `H_n`, ascending.
///
/// Newton iteration on `psi_n` from a WKB starting value for each zero. Only
/// the non-negative half is iterated; the rest is mirrored. Iteration stops
/// once `|dx| <= tol * max(|x|, 1)`, or once the step has stopped shrinking
/// within a few hundred `tol` (rounding floor of the degree-`n` recurrence).
pub fn exact_hermite_zeros(n: usize, tol: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(XftError::InvalidSize { n });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(XftError::InvalidParameter(format!(
            "zero-finder tolerance must be positive, got {tol}"
        )));
    }
    let half = n.div_ceil(2);
    // Descending: positive[0] is the largest zero.
    let mut positive: Vec<f64> = Vec::with_capacity(half);
    for i in 0..half {
        let ascending_index = n - 1 - i;
        if n % 2 == 1 && i == half - 1 {
            positive.push(0.0);
            break;
        }
        let mut z = wkb_zero_guess(n, i + 1);
        let mut converged = false;
        let mut last_step = f64::INFINITY;
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let dz = newton_step(n, z);
            let scale = z.abs().max(1.0);
            if dz.abs() >= last_step && dz.abs() <= 256.0 * tol * scale {
                converged = true;
                break;
            }
            z -= dz;
            if dz.abs() <= tol * scale {
                converged = true;
                break;
            }
            last_step = dz.abs();
        }
        let ordered = z > 0.0 && positive.last().is_none_or(|&last| z < last);
        if !converged || !ordered || !z.is_finite() {
            return Err(XftError::Convergence {
                index: ascending_index,
                iterations: MAX_NEWTON_ITERATIONS,
            });
        }
        positive.push(z);
    }
    let mut zeros = Vec::with_capacity(n);
    zeros.extend(positive.iter().map(|&p| -p));
    let mirrored_len = if n % 2 == 1 { half - 1 } else { half };
    zeros.extend(positive[..mirrored_len].iter().rev());
    Ok(zeros)
}
