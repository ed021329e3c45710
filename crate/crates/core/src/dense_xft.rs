//! Dense `O(n^2)` reference transforms.
//!
//! The discrete fractional Fourier transform is
//! `F_z = sqrt(2 pi) U^T D(z) U` with `D(z) = diag(1, z, ..., z^(n-1))` and `U`
//! the orthogonal eigenvector matrix of the symmetric Hermite Jacobi matrix
//! (`H[m][m+1] = sqrt((m+1)/2)`). Column `k` of `U` is the vector
//! `(psi_0(x_k), ..., psi_{n-1}(x_k))` at the `k`-th zero of `H_n`, normalised;
//! its sign makes the `psi_0` entry positive, which is what the closed-form
//! eigenvector with its `(-1)^(n+k) / H_{n-1}(x_k)` factor gives.
//!
//! These matrices are test oracles, not the product: they are only built for
//! `n <= MAX_DENSE_N`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, XftError};
use crate::fast_lct::{chirp, output_scale, pi_phase, sqrt_2pi_i_b, LctParams, CALIBRATED};
use crate::fft_engine::DftSign;
use crate::grid_hermite::{
    asymptotic_zeros, exact_hermite_zeros, hermite_function_row, DEFAULT_ZERO_TOL,
};

pub const MAX_DENSE_N: usize = 4096;

/// Slack on `|z| <= 1` for orders computed numerically on the unit circle.
pub const ORDER_RADIUS_TOL: f64 = 1e-12;

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(XftError::InvalidSize { n })
    } else if n > MAX_DENSE_N {
        Err(XftError::TooLarge {
            n,
            max: MAX_DENSE_N,
        })
    } else {
        Ok(())
    }
}

/// Complex order `z` in the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrftOrder(Complex64);

impl FrftOrder {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + ORDER_RADIUS_TOL {
            return Err(XftError::InvalidOrder { z });
        }
        Ok(Self(z))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    /// `max |U^T U - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                let dot: f64 = (0..n).map(|m| self.get(m, j) * self.get(m, k)).sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Which construction produced a [`DenseTransform`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Frft(Complex64),
    Lct(LctParams),
    /// The kappa = 4/pi Fourier kernel `dx exp(i (4/pi) x_j x_k)` on the asymptotic grid.
    ChirpFactored,
    Product,
}

/// Dense complex `n x n` transform, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTransform {
    n: usize,
    entries: Vec<Complex64>,
    provenance: Provenance,
}

impl DenseTransform {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.n + k]
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.n {
            return Err(XftError::ShapeMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &DenseTransform) -> Result<DenseTransform> {
        if rhs.n != self.n {
            return Err(XftError::ShapeMismatch {
                expected: self.n,
                actual: rhs.n,
            });
        }
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let out = &mut entries[j * n..(j + 1) * n];
            for m in 0..n {
                let a = self.get(j, m);
                for (o, b) in out.iter_mut().zip(&rhs.entries[m * n..(m + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseTransform {
            n,
            entries,
            provenance: Provenance::Product,
        })
    }

    pub fn max_abs_diff(&self, other: &DenseTransform) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |(s A)(s A)^H - I|`.
    pub fn unitarity_residual(&self, scale: f64) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let dot: Complex64 = (0..n).map(|m| self.get(j, m) * self.get(k, m).conj()).sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot * scale * scale - target).norm());
            }
        }
        worst
    }

    /// `max |A - A^T|`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (self.get(j, k) - self.get(k, j)).norm())
            .fold(0.0, f64::max)
    }
}

/// Orthogonal eigenvector matrix of the Hermite Jacobi matrix; rows index
/// the degree, columns the zeros of `H_n` in ascending order.
pub fn eigenvector_matrix(n: usize) -> Result<RealMatrix> {
    check_size(n)?;
    let zeros = exact_hermite_zeros(n, DEFAULT_ZERO_TOL)?;
    Ok(eigenvector_matrix_at(&zeros))
}

fn eigenvector_matrix_at(zeros: &[f64]) -> RealMatrix {
    let n = zeros.len();
    let mut data = vec![0.0; n * n];
    for (k, &x) in zeros.iter().enumerate() {
        let column = hermite_function_row(n, x);
        let norm = column.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (m, v) in column.iter().enumerate() {
            data[m * n + k] = v / norm;
        }
    }
    RealMatrix { n, data }
}

/// `F_z = sqrt(2 pi) U^T D(z) U`.
pub fn frft_matrix(n: usize, order: FrftOrder) -> Result<DenseTransform> {
    let u = eigenvector_matrix(n)?;
    let z = order.z();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    let mut power = Complex64::new((2.0 * PI).sqrt(), 0.0);
    for m in 0..n {
        if power == Complex64::new(0.0, 0.0) {
            break;
        }
        let row = u.row(m);
        for j in 0..n {
            let pj = power * row[j];
            let out = &mut entries[j * n..(j + 1) * n];
            for k in j..n {
                out[k] += pj * row[k];
            }
        }
        power *= z;
    }
    for j in 0..n {
        for k in 0..j {
            entries[j * n + k] = entries[k * n + j];
        }
    }
    Ok(DenseTransform {
        n,
        entries,
        provenance: Provenance::Frft(z),
    })
}

/// `K_z(x, y) = sqrt(2/(1-z^2)) exp(-((1+z^2)(x^2+y^2) - 4xyz) / (2(1-z^2)))`, principal root.
pub fn mehler_kernel(order: FrftOrder, x: f64, y: f64) -> Result<Complex64> {
    let z = order.z();
    let one_minus = 1.0 - z * z;
    if one_minus.norm() < 1e-14 {
        return Err(XftError::SingularOrder { z });
    }
    let one_plus = 1.0 + z * z;
    let exponent = -(one_plus * (x * x + y * y) - 4.0 * x * y * z) / (2.0 * one_minus);
    Ok((2.0 / one_minus).sqrt() * exponent.exp())
}

/// `K_z(x_j, x_k) dx` on the asymptotic grid.
pub fn frft_matrix_asymptotic(n: usize, order: FrftOrder) -> Result<DenseTransform> {
    check_size(n)?;
    let grid = asymptotic_zeros(n)?;
    let dx = grid.spacing();
    let x = grid.nodes();
    let mut entries = Vec::with_capacity(n * n);
    for &xj in x {
        for &xk in x {
            entries.push(mehler_kernel(order, xj, xk)? * dx);
        }
    }
    Ok(DenseTransform {
        n,
        entries,
        provenance: Provenance::Frft(order.z()),
    })
}

/// `dx exp(sign * i (pi / 2n)(2j - n + 1)(2k - n + 1))`, which equals
/// `dx exp(sign * i (4/pi) x_j x_k)` on the asymptotic grid.
fn kernel_entry(n: usize, j: usize, k: usize, sign: DftSign, dx: f64) -> Complex64 {
    let (n, j, k) = (n as i128, j as i128, k as i128);
    let s = if sign == DftSign::Plus { 1 } else { -1 };
    pi_phase(s * (2 * j - n + 1) * (2 * k - n + 1), 2 * n as u64) * dx
}

/// The scaled Fourier matrix `F` (kappa = 4/pi, `+i` kernel) on the asymptotic grid.
pub fn fourier_kernel_matrix(n: usize) -> Result<DenseTransform> {
    check_size(n)?;
    let dx = asymptotic_zeros(n)?.spacing();
    let entries = (0..n * n)
        .map(|idx| kernel_entry(n, idx / n, idx % n, DftSign::Plus, dx))
        .collect();
    Ok(DenseTransform {
        n,
        entries,
        provenance: Provenance::ChirpFactored,
    })
}

/// Dense discrete LCT `L = S1 F S2` with the same kernel sign as the fast path.
///
/// `S2 = diag(exp(i a x_k^2 / 2b))`, `S1 = diag(exp(i d y_j^2 / 2b) / sqrt(2 pi i b))`,
/// `y_j = 4 b x_j / pi`.
pub fn dense_lct_matrix(n: usize, params: LctParams) -> Result<DenseTransform> {
    check_size(n)?;
    params.check_unimodular()?;
    if params.b == 0.0 {
        return Err(XftError::DegenerateB);
    }
    let grid = asymptotic_zeros(n)?;
    let dx = grid.spacing();
    let inv_2b = 0.5 / params.b;
    let scale = output_scale(params.b);
    let prefactor = sqrt_2pi_i_b(params.b).inv();
    let s2: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&x| chirp(params.a * inv_2b, x))
        .collect();
    let s1: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&x| chirp(params.d * inv_2b, scale * x) * prefactor)
        .collect();
    let mut entries = Vec::with_capacity(n * n);
    for (j, left) in s1.iter().enumerate() {
        let row = if CALIBRATED.reverse_output {
            n - 1 - j
        } else {
            j
        };
        for (k, right) in s2.iter().enumerate() {
            entries.push(left * kernel_entry(n, row, k, CALIBRATED.sign, dx) * right);
        }
    }
    Ok(DenseTransform {
        n,
        entries,
        provenance: Provenance::Lct(params),
    })
}
