//! Ground truth for validating the fast path.
//!
//! Two independent routes: the closed-form LCT of a shifted Gaussian, and a
//! brute-force trapezoid quadrature of the LCT integral itself. The
//! quadrature is the authority; the closed form is checked against it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, XftError};
use crate::fast_lct::{sqrt_2pi_i_b, LctParams, Signal, TransformResult};
use crate::grid_hermite::HermiteGrid;

/// `f(x) = exp(-(alpha x^2 + 2 beta x + gamma))` with `alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl GaussianParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !beta.is_finite() || !gamma.is_finite() {
            return Err(XftError::InvalidParameter(format!(
                "gaussian requires alpha > 0 and finite beta, gamma (got {alpha}, {beta}, {gamma})"
            )));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Location of the peak, `-beta / alpha`.
    pub fn center(&self) -> f64 {
        -self.beta / self.alpha
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(
            (-(self.alpha * x * x + 2.0 * self.beta * x + self.gamma)).exp(),
            0.0,
        )
    }
}

pub fn gaussian_sample(g: &GaussianParams, grid: &HermiteGrid) -> Signal {
    Signal::from_fn(grid.clone(), |x| g.eval(x)).expect("gaussian samples are finite")
}

/// Closed-form LCT of the Gaussian at `y`:
///
/// ```text
/// G(y) = sqrt(pi) / (sqrt(2 pi i b) (alpha^2 + a^2/4b^2)^(1/4))
///        * exp(alpha (beta^2 - alpha gamma) / (alpha^2 + a^2/4b^2))
///        * exp(i/2 atan(a / (2 alpha b)))
///        * exp(-(alpha y^2 + 2 beta a y + a^2 gamma) / (4 b^2 alpha^2 + a^2))
///        * exp(i a c y^2 / (2 (4 b^2 alpha^2 + a^2)))
///        * exp(i 2b (alpha^2 d y^2 + 2 beta alpha y + beta^2 a) / (4 b^2 alpha^2 + a^2))
/// ```
///
/// The real exponents are summed before exponentiating and likewise the phases.
pub fn gaussian_lct_closed_form(
    g: &GaussianParams,
    params: &LctParams,
    y: f64,
) -> Result<Complex64> {
    let LctParams { a, b, c, d } = *params;
    if b == 0.0 {
        return Err(XftError::DegenerateB);
    }
    let (al, be, ga) = (g.alpha, g.beta, g.gamma);
    let t = al * al + a * a / (4.0 * b * b);
    let den = 4.0 * b * b * al * al + a * a;
    let amplitude = PI.sqrt() / (sqrt_2pi_i_b(b) * t.powf(0.25));
    let decay = al * (be * be - al * ga) / t - (al * y * y + 2.0 * be * a * y + a * a * ga) / den;
    let phase = 0.5 * (a / (2.0 * al * b)).atan()
        + a * c * y * y / (2.0 * den)
        + 2.0 * b * (al * al * d * y * y + 2.0 * be * al * y + be * be * a) / den;
    Ok(amplitude * decay.exp() * Complex64::cis(phase))
}

/// Truncation and refinement settings for [`direct_quadrature_lct`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Half-width of the integration window.
    pub radius: f64,
    /// Centre of the integration window.
    pub center: f64,
    /// Absolute change between successive step halvings at which refinement stops.
    pub tol: f64,
    pub max_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            radius: 12.0,
            center: 0.0,
            tol: 1e-10,
            max_points: 1 << 22,
        }
    }
}

impl QuadratureConfig {
    /// Window `center +- 12/sqrt(alpha)`; the Gaussian is below `e^-144` of its peak at the edges.
    pub fn for_gaussian(g: &GaussianParams) -> Self {
        Self {
            radius: 12.0 / g.alpha.sqrt(),
            center: g.center(),
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }
}

// Boundary magnitude, relative to the sampled peak, above which truncation is reported.
const TAIL_RATIO: f64 = 1e-12;

/// LCT of `f` at `y` by composite trapezoid quadrature of the defining
/// integral over `[center - R, center + R]`, halving the step until two
/// successive results differ by at most `cfg.tol`.
pub fn direct_quadrature_lct(
    params: &LctParams,
    f: &dyn Fn(f64) -> Complex64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let LctParams { a, b, d, .. } = *params;
    if b == 0.0 {
        return Err(XftError::DegenerateB);
    }
    if !(cfg.radius > 0.0 && cfg.tol > 0.0) {
        return Err(XftError::InvalidParameter(format!(
            "quadrature needs positive radius and tolerance (got {}, {})",
            cfg.radius, cfg.tol
        )));
    }
    let lo = cfg.center - cfg.radius;
    let hi = cfg.center + cfg.radius;
    let width = hi - lo;
    let inv_2b = 0.5 / b;
    let integrand = |x: f64| Complex64::cis((a * x * x - 2.0 * x * y) * inv_2b) * f(x);
    let prefactor = Complex64::cis(d * y * y * inv_2b) / sqrt_2pi_i_b(b);

    // Resolve the kernel's fastest local oscillation (a x - y) / b from the start.
    let max_freq = (a.abs() * lo.abs().max(hi.abs()) + y.abs()) / b.abs();
    let h0 = (width / 64.0).min(PI / (2.0 * (max_freq + 1.0)));
    let mut intervals = ((width / h0).ceil() as usize).max(64);
    if intervals + 1 > cfg.max_points {
        return Err(XftError::QuadratureLimit {
            tol: cfg.tol,
            points: cfg.max_points,
        });
    }

    let mut h = width / intervals as f64;
    let mut peak: f64 = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 1..intervals {
        let x = lo + i as f64 * h;
        peak = peak.max(f(x).norm());
        sum += integrand(x);
    }
    let tail = f(lo).norm().max(f(hi).norm());
    peak = peak.max(tail);
    if peak == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if tail > TAIL_RATIO * peak {
        return Err(XftError::Truncation {
            radius: cfg.radius,
            tail,
        });
    }
    sum += 0.5 * (integrand(lo) + integrand(hi));
    let mut estimate = prefactor * sum * h;
    loop {
        if 2 * intervals + 1 > cfg.max_points {
            return Err(XftError::QuadratureLimit {
                tol: cfg.tol,
                points: cfg.max_points,
            });
        }
        let midpoints: Complex64 = (0..intervals)
            .map(|i| integrand(lo + (i as f64 + 0.5) * h))
            .sum();
        sum += midpoints;
        intervals *= 2;
        h = width / intervals as f64;
        let refined = prefactor * sum * h;
        let change = (refined - estimate).norm();
        estimate = refined;
        if change <= cfg.tol {
            return Ok(estimate);
        }
    }
}

/// [`direct_quadrature_lct`] at every `y`, spread over up to `threads` workers.
pub fn direct_quadrature_many(
    params: &LctParams,
    f: &(dyn Fn(f64) -> Complex64 + Sync),
    ys: &[f64],
    cfg: &QuadratureConfig,
    threads: usize,
) -> Result<Vec<Complex64>> {
    let threads = threads.clamp(1, ys.len().max(1));
    if threads == 1 {
        return ys
            .iter()
            .map(|&y| direct_quadrature_lct(params, f, y, cfg))
            .collect();
    }
    let chunk = ys.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = ys
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&y| direct_quadrature_lct(params, f, y, cfg))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(ys.len());
        for h in handles {
            out.extend(h.join().expect("quadrature worker panicked")?);
        }
        Ok(out)
    })
}

/// Error metrics of a transform against oracle values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub max_abs: f64,
    pub rms: f64,
    /// Max absolute error over the central 80% of nodes, `[n/10, 9n/10)`.
    pub max_abs_central: f64,
    /// `max_abs_central` divided by the largest oracle modulus in the same window.
    pub max_rel_central: f64,
}

pub fn compare(result: &TransformResult, oracle_values: &[Complex64]) -> Result<ErrorReport> {
    compare_values(result.values(), oracle_values)
}

pub fn compare_values(values: &[Complex64], oracle_values: &[Complex64]) -> Result<ErrorReport> {
    if values.len() != oracle_values.len() {
        return Err(XftError::ShapeMismatch {
            expected: oracle_values.len(),
            actual: values.len(),
        });
    }
    let n = values.len();
    let errors: Vec<f64> = values
        .iter()
        .zip(oracle_values)
        .map(|(v, o)| (v - o).norm())
        .collect();
    let max_abs = errors.iter().copied().fold(0.0, f64::max);
    let rms = if n == 0 {
        0.0
    } else {
        (errors.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt()
    };
    let central = n / 10..9 * n / 10;
    let max_abs_central = errors[central.clone()].iter().copied().fold(0.0, f64::max);
    let peak = oracle_values[central]
        .iter()
        .map(|o| o.norm())
        .fold(0.0, f64::max);
    let max_rel_central = if max_abs_central == 0.0 {
        0.0
    } else if peak == 0.0 {
        f64::INFINITY
    } else {
        max_abs_central / peak
    };
    Ok(ErrorReport {
        n,
        max_abs,
        rms,
        max_abs_central,
        max_rel_central,
    })
}
