//! Fast discrete linear canonical transform.
//!
//! For `b != 0` the LCT
//!
//! ```text
//! L[f](y) = 1/sqrt(2 pi i b) * integral exp(i/(2b) (a x^2 - 2 x y + d y^2)) f(x) dx
//! ```
//!
//! is a chirp, a `1/b`-scaled Fourier integral and a second chirp. On the
//! asymptotic Hermite grid `x_k` the scaled kernel `dx * exp(-i (4/pi) x_j x_k)`
//! factors exactly into a phase ramp, one length-`n` DFT and another phase ramp,
//! which yields `L[f]` on the output grid `y_j = 4 b x_j / pi`:
//!
//! 1. `u_k = exp(+i pi k (n-1)/n) * exp(i a x_k^2 / (2b)) * f(x_k)`
//! 2. `w = DFT(u)` with kernel `exp(-i 2 pi j k / n)`
//! 3. `G_j = dx * exp(-i pi (n-1)^2 / (2n)) * exp(+i pi j (n-1)/n)
//!    * exp(i d y_j^2 / (2b)) / sqrt(2 pi i b) * w_j`
//!
//! The kernel sign is the one that reproduces the direct quadrature of the
//! definition; the `+i` Fourier kernel, written with the conjugate phases,
//! computes the same values on the reversed output grid (see
//! [`xft_fourier`]). The calibration is pinned by a regression test.
//!
//! Indices are 0-based; all phase ramps reduce their integer arguments modulo
//! the period before converting to floating point.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, XftError};
use crate::fft_engine::{plan_dft, DftPlan, DftSign};
use crate::grid_hermite::{asymptotic_zeros, HermiteGrid};

/// Allowed drift of `ad - bc` from 1.
pub const UNIMODULAR_TOL: f64 = 1e-10;

/// Sign of the DFT exponent used by the fast path.
pub const LCT_DFT_SIGN: DftSign = DftSign::Minus;

/// The parameter matrix `[[a, b], [c, d]]` of an LCT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LctParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LctParams {
    /// Validated constructor: finite entries with `|ad - bc - 1| <= 1e-10`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let p = Self { a, b, c, d };
        p.check_unimodular()?;
        Ok(p)
    }

    /// Fourier transform, `(0, 1, -1, 0)`.
    pub fn fourier() -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            c: -1.0,
            d: 0.0,
        }
    }

    /// Fresnel transform `(1, b, 0, 1)`.
    pub fn fresnel(b: f64) -> Self {
        Self {
            a: 1.0,
            b,
            c: 0.0,
            d: 1.0,
        }
    }

    /// Fractional Fourier transform by `angle` radians: `(cos, sin, -sin, cos)`.
    ///
    /// Components within a few ulps of zero are snapped to zero so that
    /// `angle = pi/2` gives exactly the Fourier parameters.
    pub fn frft(angle: f64) -> Self {
        let snap = |v: f64| if v.abs() < 4.0 * f64::EPSILON { 0.0 } else { v };
        let (s, c) = angle.sin_cos();
        let (s, c) = (snap(s), snap(c));
        Self {
            a: c,
            b: s,
            c: -s,
            d: c,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn check_unimodular(&self) -> Result<()> {
        let det = self.determinant();
        let finite = [self.a, self.b, self.c, self.d]
            .iter()
            .all(|v| v.is_finite());
        if !finite || (det - 1.0).abs() > UNIMODULAR_TOL {
            return Err(XftError::NotUnimodular { det });
        }
        Ok(())
    }

    /// Inverse matrix `(d, -b, -c, a)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Matrix product `self * rhs`; the LCT of the product applies `rhs` first.
    pub fn compose(&self, rhs: &LctParams) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

/// Principal branch `sqrt(2 pi |b|) exp(i pi sign(b) / 4)`.
pub fn sqrt_2pi_i_b(b: f64) -> Complex64 {
    Complex64::from_polar((2.0 * PI * b.abs()).sqrt(), PI * b.signum() / 4.0)
}

/// `exp(i coef x^2)`.
#[inline]
pub(crate) fn chirp(coef: f64, x: f64) -> Complex64 {
    Complex64::cis(coef * x * x)
}

/// `exp(i pi numerator / denominator)` with the integer numerator reduced modulo `2 * denominator`.
#[inline]
pub(crate) fn pi_phase(numerator: i128, denominator: u64) -> Complex64 {
    let period = 2 * denominator as i128;
    let r = numerator.rem_euclid(period);
    Complex64::cis(PI * r as f64 / denominator as f64)
}

/// Samples of a function on an asymptotic Hermite grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: HermiteGrid,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: HermiteGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(XftError::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(index) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(XftError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: HermiteGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: HermiteGrid) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &HermiteGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Transform values on the output grid `y_j = 4 b x_j / pi`
/// (`y_j = x_j` for the `b = 0` branch).
#[derive(Debug, Clone, PartialEq)]
pub struct TransformResult {
    params: LctParams,
    output_nodes: Vec<f64>,
    values: Vec<Complex64>,
}

impl TransformResult {
    pub fn params(&self) -> LctParams {
        self.params
    }

    pub fn output_nodes(&self) -> &[f64] {
        &self.output_nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Output grid scale factor `4b/pi`.
pub fn output_scale(b: f64) -> f64 {
    4.0 * b / PI
}

/// Sign and output ordering of the scaled Fourier kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct KernelConvention {
    pub sign: DftSign,
    pub reverse_output: bool,
}

pub(crate) const CALIBRATED: KernelConvention = KernelConvention {
    sign: LCT_DFT_SIGN,
    reverse_output: false,
};

/// `out_j = sum_k dx exp(sign * i (2 pi / n) (j - c)(k - c)) h_k`, `c = (n - 1)/2`,
/// via phase ramp, one DFT of the same sign, and a second phase ramp.
pub(crate) fn scaled_fourier_kernel(
    dft: &DftPlan,
    spacing: f64,
    h: &[Complex64],
    reverse_output: bool,
) -> Result<Vec<Complex64>> {
    let n = dft.len();
    if h.len() != n {
        return Err(XftError::ShapeMismatch {
            expected: n,
            actual: h.len(),
        });
    }
    let s: i128 = if dft.sign() == DftSign::Plus { 1 } else { -1 };
    let (ni, nu) = (n as i128, n as u64);
    let u: Vec<Complex64> = h
        .iter()
        .enumerate()
        .map(|(k, v)| v * pi_phase(-s * k as i128 * (ni - 1), nu))
        .collect();
    let mut w = dft.apply(&u)?;
    let global = pi_phase(s * (ni - 1) * (ni - 1), 2 * nu) * spacing;
    for (j, v) in w.iter_mut().enumerate() {
        *v *= global * pi_phase(-s * j as i128 * (ni - 1), nu);
    }
    if reverse_output {
        w.reverse();
    }
    Ok(w)
}

/// Per-step phase increments of the two chirps at the grid edge.
///
/// Values approaching `pi` mean the chirp is no longer resolved by the grid
/// and the output is aliased.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpDiagnostic {
    pub input_step: f64,
    pub output_step: f64,
}

pub fn chirp_diagnostic(params: &LctParams, grid: &HermiteGrid) -> ChirpDiagnostic {
    let n = grid.len();
    if n < 2 || params.b == 0.0 {
        return ChirpDiagnostic {
            input_step: 0.0,
            output_step: 0.0,
        };
    }
    let (x1, x0) = (grid.node(n - 1), grid.node(n - 2));
    let s = output_scale(params.b);
    let step = |coef: f64, hi: f64, lo: f64| (coef * (hi * hi - lo * lo)).abs();
    ChirpDiagnostic {
        input_step: step(params.a / (2.0 * params.b), x1, x0),
        output_step: step(params.d / (2.0 * params.b), s * x1, s * x0),
    }
}

/// Reusable fast-LCT plan for one grid size.
#[derive(Debug, Clone)]
pub struct XftPlan {
    grid: HermiteGrid,
    dft: DftPlan,
    check_unimodular: bool,
}

impl XftPlan {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            grid: asymptotic_zeros(n)?,
            dft: plan_dft(n, CALIBRATED.sign)?,
            check_unimodular: true,
        })
    }

    /// Accept parameters whose determinant has drifted from 1.
    pub fn skip_unimodular_check(mut self) -> Self {
        self.check_unimodular = false;
        self
    }

    pub fn grid(&self) -> &HermiteGrid {
        &self.grid
    }

    pub fn apply(&self, params: LctParams, signal: &Signal) -> Result<TransformResult> {
        self.apply_values(params, signal.values())
    }

    pub(crate) fn apply_values(
        &self,
        params: LctParams,
        f: &[Complex64],
    ) -> Result<TransformResult> {
        self.apply_with(params, f, CALIBRATED)
    }

    pub(crate) fn apply_with(
        &self,
        params: LctParams,
        f: &[Complex64],
        convention: KernelConvention,
    ) -> Result<TransformResult> {
        if self.check_unimodular {
            params.check_unimodular()?;
        }
        if params.b == 0.0 {
            return Err(XftError::DegenerateB);
        }
        let n = self.grid.len();
        if f.len() != n {
            return Err(XftError::ShapeMismatch {
                expected: n,
                actual: f.len(),
            });
        }
        let dft = if convention.sign == self.dft.sign() {
            self.dft.clone()
        } else {
            plan_dft(n, convention.sign)?
        };
        let inv_2b = 0.5 / params.b;
        let h: Vec<Complex64> = self
            .grid
            .nodes()
            .iter()
            .zip(f)
            .map(|(&x, v)| chirp(params.a * inv_2b, x) * v)
            .collect();
        let mut values =
            scaled_fourier_kernel(&dft, self.grid.spacing(), &h, convention.reverse_output)?;
        let scale = output_scale(params.b);
        let output_nodes: Vec<f64> = self.grid.nodes().iter().map(|&x| scale * x).collect();
        let prefactor = sqrt_2pi_i_b(params.b).inv();
        for (v, &y) in values.iter_mut().zip(&output_nodes) {
            *v *= chirp(params.d * inv_2b, y) * prefactor;
        }
        Ok(TransformResult {
            params,
            output_nodes,
            values,
        })
    }
}

/// Fast LCT of `signal` for `b != 0`; one DFT plus `O(n)` work.
pub fn fast_lct(params: LctParams, signal: &Signal) -> Result<TransformResult> {
    XftPlan::new(signal.len())?.apply(params, signal)
}

/// Unnormalized Fourier integral `g(y) = integral exp(i y x) f(x) dx` at `y_j = 4 x_j / pi`.
///
/// This is the `+i` kernel `dx * exp(i (4/pi) x_j x_k)`. Because the grid is
/// antisymmetric it equals `sqrt(2 pi i)` times the Fourier-preset LCT read in
/// reverse order: `xft_fourier[j] = sqrt(2 pi i) * fast_lct(fourier)[n - 1 - j]`,
/// which for even `f` is the same vector.
pub fn xft_fourier(signal: &Signal) -> Result<TransformResult> {
    let grid = signal.grid();
    let dft = plan_dft(grid.len(), CALIBRATED.sign)?;
    let values = scaled_fourier_kernel(&dft, grid.spacing(), signal.values(), true)?;
    let scale = output_scale(1.0);
    Ok(TransformResult {
        params: LctParams::fourier(),
        output_nodes: grid.nodes().iter().map(|&x| scale * x).collect(),
        values,
    })
}

/// Fractional Fourier transform by `angle`, i.e. the LCT `(cos, sin, -sin, cos)`.
pub fn fast_frft(angle: f64, signal: &Signal) -> Result<TransformResult> {
    let params = LctParams::frft(angle);
    if params.b == 0.0 {
        return Err(XftError::DegenerateB);
    }
    fast_lct(params, signal)
}

/// The `b = 0` branch: `sqrt(d) exp(i c d y^2 / 2) f(d y)` on the `n`-point grid.
///
/// Takes a sampler because `f(d y)` is off-grid. Only `d > 0` is supported.
pub fn lct_b_zero(
    params: LctParams,
    sampler: impl Fn(f64) -> Complex64,
    n: usize,
) -> Result<TransformResult> {
    params.check_unimodular()?;
    if params.b != 0.0 {
        return Err(XftError::NotBZero { b: params.b });
    }
    if params.d.is_nan() || params.d <= 0.0 {
        return Err(XftError::UnsupportedBranch { d: params.d });
    }
    let grid = asymptotic_zeros(n)?;
    let root = params.d.sqrt();
    let values = grid
        .nodes()
        .iter()
        .map(|&y| root * chirp(0.5 * params.c * params.d, y) * sampler(params.d * y))
        .collect();
    Ok(TransformResult {
        params,
        output_nodes: grid.nodes().to_vec(),
        values,
    })
}

/// Result of applying an LCT to the output of a previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainedResult {
    /// `params * prior.params`.
    pub composite: LctParams,
    pub output_nodes: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Applies `params` to a previous fast-LCT output without resampling.
///
/// The prior values live on `y_j = s x_j`, `s = 4 b_prior / pi`. Reading them
/// as samples of `h(x) = G(|s| x)` on the standard grid and using the dilation
/// identity `G = sqrt(|s|) L_{diag(|s|, 1/|s|)} h`, the chained result is
/// `sqrt(|s|) L_{params * diag(|s|, 1/|s|)} h`. It approximates the composite LCT
/// up to the overall sign ambiguity of composing principal-branch prefactors
/// (the metaplectic double cover): the result is the negated composite LCT
/// exactly when `params.b` and `prior.params().b` share a sign that differs
/// from the sign of the composite `b`.
pub fn fast_lct_chain(params: LctParams, prior: &TransformResult) -> Result<ChainedResult> {
    params.check_unimodular()?;
    let prior_b = prior.params().b;
    if prior_b == 0.0 || params.b == 0.0 {
        return Err(XftError::DegenerateB);
    }
    let s = output_scale(prior_b);
    let mut h = prior.values().to_vec();
    if s < 0.0 {
        h.reverse();
    }
    let s = s.abs();
    let dilation = LctParams {
        a: s,
        b: 0.0,
        c: 0.0,
        d: 1.0 / s,
    };
    let effective = params.compose(&dilation);
    let plan = XftPlan::new(h.len())?.skip_unimodular_check();
    let result = plan.apply_values(effective, &h)?;
    let root = s.sqrt();
    Ok(ChainedResult {
        composite: params.compose(&prior.params()),
        output_nodes: result.output_nodes,
        values: result.values.into_iter().map(|v| v * root).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic_oracle::{
        direct_quadrature_lct, gaussian_lct_closed_form, gaussian_sample, GaussianParams,
        QuadratureConfig,
    };
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs_central(values: &[Complex64], oracle: impl Fn(usize) -> Complex64) -> f64 {
        let n = values.len();
        (n / 10..9 * n / 10)
            .map(|j| (values[j] - oracle(j)).norm())
            .fold(0.0, f64::max)
    }

    fn gaussian_signal(n: usize, g: GaussianParams) -> Signal {
        gaussian_sample(&g, &asymptotic_zeros(n).unwrap())
    }

    #[test]
    fn params_construction() {
        assert!(LctParams::new(1.0, 2.0, 0.5, 2.0).is_ok());
        assert_eq!(
            LctParams::new(1.0, 1.0, 1.0, 1.0).unwrap_err(),
            XftError::NotUnimodular { det: 0.0 }
        );
        assert!(LctParams::new(f64::NAN, 1.0, -1.0, 0.0).is_err());
        assert_eq!(LctParams::frft(PI / 2.0), LctParams::fourier());
        let m = LctParams::new(1.3, -0.4, 0.7, (1.0 + -0.4 * 0.7) / 1.3).unwrap();
        let id = m.compose(&m.inverse());
        assert!((id.a - 1.0).abs() < 1e-15 && id.b.abs() < 1e-15 && id.c.abs() < 1e-15);
    }

    #[test]
    fn prefactor_branch() {
        let p = sqrt_2pi_i_b(1.0);
        assert!((p - (2.0 * PI).sqrt() * Complex64::cis(PI / 4.0)).norm() < 1e-15);
        let m = sqrt_2pi_i_b(-2.0);
        assert!((m - (4.0 * PI).sqrt() * Complex64::cis(-PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn signal_validation() {
        let grid = asymptotic_zeros(4).unwrap();
        assert_eq!(
            Signal::new(grid.clone(), vec![c(0.0, 0.0); 3]).unwrap_err(),
            XftError::ShapeMismatch {
                expected: 4,
                actual: 3
            }
        );
        let bad = vec![c(0.0, 0.0), c(f64::INFINITY, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(
            Signal::new(grid, bad).unwrap_err(),
            XftError::NonFinite { index: 1 }
        );
    }

    #[test]
    fn fourier_of_gaussian() {
        let n = 256;
        let signal = gaussian_signal(n, GaussianParams::new(0.5, 0.0, 0.0).unwrap());
        let out = fast_lct(LctParams::fourier(), &signal).unwrap();
        let expected = |y: f64| Complex64::cis(-PI / 4.0) * (-0.5 * y * y).exp();
        let err = max_abs_central(out.values(), |j| expected(out.output_nodes()[j]));
        assert!(err < 1e-3, "{err}");
        let mid = signal.grid().nearest(0.0);
        assert!((out.values()[mid] - Complex64::cis(-PI / 4.0)).norm() < 5e-3);
    }

    #[test]
    fn output_grid_is_scaled_input_grid() {
        let n = 33;
        let signal = gaussian_signal(n, GaussianParams::new(1.0, 0.0, 0.0).unwrap());
        let p = LctParams::new(0.3, -1.7, 0.0, 1.0 / 0.3).unwrap();
        let out = fast_lct(p, &signal).unwrap();
        for (y, x) in out.output_nodes().iter().zip(signal.grid().nodes()) {
            assert!((y - 4.0 * p.b / PI * x).abs() <= 1e-13 * y.abs().max(1.0));
        }
        assert_eq!(out.n(), n);
    }

    #[test]
    fn chirped_configuration_matches_closed_form() {
        let g = GaussianParams::new(1.0, 2.0, 3.0).unwrap();
        let p = LctParams::new(1.0, 2.0, 0.5, 2.0).unwrap();
        let out = fast_lct(p, &gaussian_signal(512, g)).unwrap();
        let err = max_abs_central(out.values(), |j| {
            gaussian_lct_closed_form(&g, &p, out.output_nodes()[j]).unwrap()
        });
        assert!(err < 1e-12, "{err}");
    }

    // The kernel sign is inherited from the definition's exp(-i x y / b); the
    // literal +i kernel needs an output reversal. Only these two equivalent
    // conventions reproduce the quadrature of the definition.
    #[test]
    fn kernel_sign_calibration() {
        let g = GaussianParams::new(1.0, 2.0, 3.0).unwrap();
        let p = LctParams::new(1.0, 2.0, 0.5, 2.0).unwrap();
        let n = 512;
        let signal = gaussian_signal(n, g);
        let plan = XftPlan::new(n).unwrap();
        let f = |x: f64| g.eval(x);
        let cfg = QuadratureConfig::for_gaussian(&g);
        let probes = [n / 2 - 40, n / 2 - 9, n / 2, n / 2 + 17, n / 2 + 33];
        let mut matching = Vec::new();
        for sign in [DftSign::Plus, DftSign::Minus] {
            for reverse_output in [false, true] {
                let conv = KernelConvention {
                    sign,
                    reverse_output,
                };
                let out = plan.apply_with(p, signal.values(), conv).unwrap();
                let err = probes
                    .iter()
                    .map(|&j| {
                        let q = direct_quadrature_lct(&p, &f, out.output_nodes()[j], &cfg).unwrap();
                        (out.values()[j] - q).norm()
                    })
                    .fold(0.0, f64::max);
                if err < 1e-10 {
                    matching.push(conv);
                } else {
                    assert!(err > 1e-2, "ambiguous convention {conv:?}: {err}");
                }
            }
        }
        assert_eq!(
            matching,
            vec![
                KernelConvention {
                    sign: DftSign::Plus,
                    reverse_output: true
                },
                KernelConvention {
                    sign: DftSign::Minus,
                    reverse_output: false
                },
            ]
        );
        assert!(matching.contains(&CALIBRATED));
    }

    #[test]
    fn zero_signal_maps_to_zero() {
        let grid = asymptotic_zeros(100).unwrap();
        let zero = Signal::zeros(grid);
        let out = fast_lct(LctParams::new(2.0, 0.5, 2.0, 1.0).unwrap(), &zero).unwrap();
        assert!(out.values().iter().all(|v| *v == c(0.0, 0.0)));
        assert!(xft_fourier(&zero)
            .unwrap()
            .values()
            .iter()
            .all(|v| v.norm() == 0.0));
    }

    #[test]
    fn parameter_errors() {
        let signal = gaussian_signal(16, GaussianParams::new(1.0, 0.0, 0.0).unwrap());
        let degenerate = LctParams {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        };
        assert_eq!(
            fast_lct(degenerate, &signal).unwrap_err(),
            XftError::DegenerateB
        );
        let skewed = LctParams {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            d: 1.0,
        };
        assert!(matches!(
            fast_lct(skewed, &signal),
            Err(XftError::NotUnimodular { .. })
        ));
        let drifted = LctParams {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            d: 1.0 + 1e-9,
        };
        assert!(fast_lct(drifted, &signal).is_err());
        let lenient = XftPlan::new(16).unwrap().skip_unimodular_check();
        assert!(lenient.apply(drifted, &signal).is_ok());
        let plan32 = XftPlan::new(32).unwrap();
        assert_eq!(
            plan32.apply(LctParams::fourier(), &signal).unwrap_err(),
            XftError::ShapeMismatch {
                expected: 32,
                actual: 16
            }
        );
        assert_eq!(fast_frft(0.0, &signal).unwrap_err(), XftError::DegenerateB);
        assert_eq!(fast_frft(PI, &signal).unwrap_err(), XftError::DegenerateB);
    }

    #[test]
    fn xft_fourier_of_gaussian() {
        let signal = gaussian_signal(256, GaussianParams::new(0.5, 0.0, 0.0).unwrap());
        let out = xft_fourier(&signal).unwrap();
        let mid = signal.grid().nearest(0.0);
        assert!((out.values()[mid].re - 2.5066).abs() < 1e-2);
        let err = max_abs_central(out.values(), |j| {
            let y = out.output_nodes()[j];
            c((2.0 * PI).sqrt() * (-0.5 * y * y).exp(), 0.0)
        });
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn xft_fourier_relation_to_lct() {
        let n = 97;
        let grid = asymptotic_zeros(n).unwrap();
        let odd = Signal::from_fn(grid.clone(), |x| {
            c(x * (-x * x).exp(), 0.3 * (-(x - 1.0).powi(2)).exp())
        })
        .unwrap();
        let even = gaussian_signal(n, GaussianParams::new(1.0, 0.0, 0.0).unwrap());
        let root = sqrt_2pi_i_b(1.0);
        for (signal, reversed) in [(&odd, true), (&even, false)] {
            let xf = xft_fourier(signal).unwrap();
            let lct = fast_lct(LctParams::fourier(), signal).unwrap();
            let norm = xf.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            for j in 0..n {
                let k = if reversed { n - 1 - j } else { j };
                assert!((xf.values()[j] - root * lct.values()[k]).norm() <= 1e-12 * norm);
            }
        }
    }

    #[test]
    fn fourier_transform_of_odd_function_checks_sign() {
        // integral exp(i y x) x exp(-x^2) dx = i (y/2) sqrt(pi) exp(-y^2/4)
        let grid = asymptotic_zeros(256).unwrap();
        let signal = Signal::from_fn(grid, |x| c(x * (-x * x).exp(), 0.0)).unwrap();
        let out = xft_fourier(&signal).unwrap();
        let err = max_abs_central(out.values(), |j| {
            let y = out.output_nodes()[j];
            c(0.0, 0.5 * y * PI.sqrt() * (-0.25 * y * y).exp())
        });
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn frft_quarter_turn_is_fourier() {
        let signal = gaussian_signal(64, GaussianParams::new(0.7, 0.2, 0.0).unwrap());
        let a = fast_frft(PI / 2.0, &signal).unwrap();
        let b = fast_lct(LctParams::fourier(), &signal).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn frft_eighth_turn_matches_closed_form() {
        let g = GaussianParams::new(0.5, 0.0, 0.0).unwrap();
        let signal = gaussian_signal(512, g);
        let out = fast_frft(PI / 4.0, &signal).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = LctParams::new(h, h, -h, h).unwrap();
        let err = max_abs_central(out.values(), |j| {
            gaussian_lct_closed_form(&g, &p, out.output_nodes()[j]).unwrap()
        });
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn frft_opposite_angles_conjugate_for_real_input() {
        let n = 64;
        let grid = asymptotic_zeros(n).unwrap();
        let signal = Signal::from_fn(grid, |x| {
            c((-(x - 0.4).powi(2)).exp() * (1.0 + 0.2 * x), 0.0)
        })
        .unwrap();
        let theta = 0.9;
        let pos = fast_frft(theta, &signal).unwrap();
        let neg = fast_frft(-theta, &signal).unwrap();
        for j in 0..n {
            assert!((neg.output_nodes()[j] + pos.output_nodes()[j]).abs() < 1e-12);
            assert!((neg.values()[n - 1 - j] - pos.values()[j].conj()).norm() < 1e-10);
        }
        // brute-force check of the positive-angle output against the definition on the grid
        let p = LctParams::frft(theta);
        let x = signal.grid().nodes();
        let dx = signal.grid().spacing();
        for j in [0, 20, 31, 50] {
            let y = pos.output_nodes()[j];
            let sum: Complex64 = x
                .iter()
                .zip(signal.values())
                .map(|(&xk, f)| {
                    Complex64::cis((p.a * xk * xk - 2.0 * xk * y + p.d * y * y) / (2.0 * p.b))
                        * f
                        * dx
                })
                .sum();
            assert!((pos.values()[j] - sum / sqrt_2pi_i_b(p.b)).norm() < 1e-10);
        }
    }

    #[test]
    fn b_zero_branch_examples() {
        let n = 9;
        let grid = asymptotic_zeros(n).unwrap();
        let f = |x: f64| c((-x * x).exp(), 0.25 * x);
        let id = lct_b_zero(LctParams::new(1.0, 0.0, 0.0, 1.0).unwrap(), f, n).unwrap();
        assert_eq!(id.output_nodes(), grid.nodes());
        for (v, &y) in id.values().iter().zip(grid.nodes()) {
            assert_eq!(*v, f(y));
        }
        let scale = lct_b_zero(
            LctParams::new(0.5, 0.0, 0.0, 2.0).unwrap(),
            |x| c((-x * x).exp(), 0.0),
            n,
        )
        .unwrap();
        for (v, &y) in scale.values().iter().zip(grid.nodes()) {
            assert!((v - c(2f64.sqrt() * (-4.0 * y * y).exp(), 0.0)).norm() < 1e-15);
        }
        let lens = lct_b_zero(
            LctParams::new(1.0, 0.0, 3.0, 1.0).unwrap(),
            |_| c(1.0, 0.0),
            n,
        )
        .unwrap();
        for (v, &y) in lens.values().iter().zip(grid.nodes()) {
            assert!((v - Complex64::cis(1.5 * y * y)).norm() < 1e-15);
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn b_zero_branch_errors() {
        let one = |_: f64| c(1.0, 0.0);
        assert_eq!(
            lct_b_zero(LctParams::new(-1.0, 0.0, 0.0, -1.0).unwrap(), one, 4).unwrap_err(),
            XftError::UnsupportedBranch { d: -1.0 }
        );
        assert_eq!(
            lct_b_zero(LctParams::fourier(), one, 4).unwrap_err(),
            XftError::NotBZero { b: 1.0 }
        );
        assert!(lct_b_zero(
            LctParams {
                a: 2.0,
                b: 0.0,
                c: 0.0,
                d: 2.0
            },
            one,
            4
        )
        .is_err());
    }

    #[test]
    fn chirp_diagnostic_flags_fast_chirps() {
        let grid = asymptotic_zeros(256).unwrap();
        let gentle = chirp_diagnostic(&LctParams::new(1.0, 2.0, 0.5, 2.0).unwrap(), &grid);
        assert!(gentle.input_step < PI && gentle.output_step > 0.0);
        let harsh = chirp_diagnostic(&LctParams::new(50.0, 0.1, 90.0, 0.2).unwrap(), &grid);
        assert!(harsh.input_step > PI);
    }

    #[test]
    fn inverse_chain_recovers_input() {
        let g = GaussianParams::new(1.0, 0.5, 0.0).unwrap();
        for p in [
            LctParams::new(1.0, 2.0, 0.5, 2.0).unwrap(),
            LctParams::fourier(),
            LctParams::new(0.5, -1.5, 0.0, 2.0).unwrap(),
        ] {
            let n = 256;
            let fwd = fast_lct(p, &gaussian_signal(n, g)).unwrap();
            let back = fast_lct_chain(p.inverse(), &fwd).unwrap();
            assert!((back.composite.a - 1.0).abs() < 1e-12 && back.composite.b.abs() < 1e-12);
            let err = (n / 10..9 * n / 10)
                .map(|j| (back.values[j] - g.eval(back.output_nodes[j])).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "{p:?}: {err}");
        }
    }

    proptest! {
        #[test]
        fn linearity(seed in any::<u64>(), b in 0.2f64..20.0, a in -2.0f64..2.0, alpha in -3.0f64..3.0) {
            let n = 64;
            let grid = asymptotic_zeros(n).unwrap();
            let mut s = seed;
            let mut rnd = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1); (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5 };
            let f: Vec<Complex64> = (0..n).map(|_| c(rnd(), rnd())).collect();
            let g: Vec<Complex64> = (0..n).map(|_| c(rnd(), rnd())).collect();
            let p = LctParams::new(a, b, (a * 0.5 - 1.0) / b, 0.5).unwrap();
            let beta = c(0.25, -1.0);
            let mix: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| x * alpha + y * beta).collect();
            let plan = XftPlan::new(n).unwrap();
            let lf = plan.apply(p, &Signal::new(grid.clone(), f).unwrap()).unwrap();
            let lg = plan.apply(p, &Signal::new(grid.clone(), g).unwrap()).unwrap();
            let lm = plan.apply(p, &Signal::new(grid, mix).unwrap()).unwrap();
            let num: f64 = lm.values().iter().zip(lf.values().iter().zip(lg.values()))
                .map(|(m, (x, y))| (m - (x * alpha + y * beta)).norm_sqr()).sum();
            let den: f64 = lm.values().iter().map(|v| v.norm_sqr()).sum();
            prop_assert!((num / den).sqrt() <= 1e-12);
        }
    }
}
