//! Arbitrary-length DFT in `O(n log n)`.
//!
//! Power-of-two sizes run an iterative radix-2 decimation-in-time transform.
//! Every other size is embedded into a power-of-two circular convolution with
//! Bluestein's chirp-z identity `jk = (j^2 + k^2 - (j - k)^2) / 2`.
//!
//! A [`DftPlan`] owns only read-only tables and allocates its scratch per call,
//! so a single plan is `Send + Sync` and may be applied from many threads at
//! once.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, XftError};

/// Sign of the exponent: `out[j] = sum_k exp(sign * i 2 pi j k / n) v[k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DftSign {
    Plus,
    Minus,
}

impl DftSign {
    pub fn value(self) -> f64 {
        match self {
            DftSign::Plus => 1.0,
            DftSign::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            DftSign::Plus => DftSign::Minus,
            DftSign::Minus => DftSign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DftRoute {
    Radix2,
    ChirpZ,
}

#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    log2n: u32,
    // Stage tables laid end to end so each stage reads contiguously: the stage
    // of butterfly span `len` owns `exp(sign * i 2 pi k / len)` for k < len/2,
    // starting at offset `len/2 - 1`.
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(n: usize, sign: DftSign) -> Self {
        debug_assert!(n.is_power_of_two());
        let s = sign.value();
        let mut twiddles = Vec::with_capacity(n.saturating_sub(1));
        let mut len = 2;
        while len <= n {
            twiddles
                .extend((0..len / 2).map(|k| Complex64::cis(s * 2.0 * PI * k as f64 / len as f64)));
            len <<= 1;
        }
        Self {
            n,
            log2n: n.trailing_zeros(),
            twiddles,
        }
    }

    fn run(&self, buf: &mut [Complex64]) {
        let n = self.n;
        if n <= 1 {
            return;
        }
        let shift = usize::BITS - self.log2n;
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stage = &self.twiddles[half - 1..len - 1];
            for chunk in buf.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(stage) {
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            len <<= 1;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    // chirp[k] = exp(sign * i pi k^2 / n)
    chirp: Vec<Complex64>,
    // forward transform of the conjugate chirp laid out circularly, pre-divided by m
    kernel_spectrum: Vec<Complex64>,
    forward: Radix2,
    inverse: Radix2,
}

impl Bluestein {
    fn new(n: usize, sign: DftSign) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let s = sign.value();
        let two_n = 2 * n as u128;
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| {
                let r = (k as u128 * k as u128) % two_n;
                Complex64::cis(s * PI * r as f64 / n as f64)
            })
            .collect();
        let forward = Radix2::new(m, DftSign::Minus);
        let inverse = Radix2::new(m, DftSign::Plus);
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for k in 1..n {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        forward.run(&mut kernel);
        let scale = 1.0 / m as f64;
        kernel.iter_mut().for_each(|v| *v *= scale);
        Self {
            chirp,
            kernel_spectrum: kernel,
            forward,
            inverse,
        }
    }

    fn run(&self, input: &[Complex64]) -> Vec<Complex64> {
        let n = self.chirp.len();
        let mut work = vec![Complex64::new(0.0, 0.0); self.forward.n];
        for ((w, x), c) in work.iter_mut().zip(input).zip(&self.chirp) {
            *w = x * c;
        }
        self.forward.run(&mut work);
        for (w, k) in work.iter_mut().zip(&self.kernel_spectrum) {
            *w *= k;
        }
        self.inverse.run(&mut work);
        work.truncate(n);
        for (w, c) in work.iter_mut().zip(&self.chirp) {
            *w *= c;
        }
        work
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Radix2(Radix2),
    ChirpZ(Bluestein),
}

/// Reusable, immutable DFT plan for one size and sign.
#[derive(Debug, Clone)]
pub struct DftPlan {
    n: usize,
    sign: DftSign,
    engine: Engine,
}

impl DftPlan {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sign(&self) -> DftSign {
        self.sign
    }

    pub fn route(&self) -> DftRoute {
        match self.engine {
            Engine::Radix2(_) => DftRoute::Radix2,
            Engine::ChirpZ(_) => DftRoute::ChirpZ,
        }
    }

    /// Equivalent to [`apply_dft`].
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.n {
            return Err(XftError::ShapeMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        Ok(match &self.engine {
            Engine::Radix2(r) => {
                let mut buf = v.to_vec();
                r.run(&mut buf);
                buf
            }
            Engine::ChirpZ(b) => b.run(v),
        })
    }
}

pub fn plan_dft(n: usize, sign: DftSign) -> Result<DftPlan> {
    if n == 0 {
        return Err(XftError::InvalidSize { n });
    }
    let engine = if n.is_power_of_two() {
        Engine::Radix2(Radix2::new(n, sign))
    } else {
        Engine::ChirpZ(Bluestein::new(n, sign))
    };
    Ok(DftPlan { n, sign, engine })
}

/// `out[j] = sum_k exp(sign * i 2 pi j k / n) v[k]`, no normalization.
pub fn apply_dft(plan: &DftPlan, v: &[Complex64]) -> Result<Vec<Complex64>> {
    plan.apply(v)
}
