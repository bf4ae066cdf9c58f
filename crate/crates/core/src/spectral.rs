//! Spectral helpers for uniformly sampled 2π-periodic data.
//!
//! Node counts are restricted to powers of two so one transform convention
//! serves curve differentiation, resampling and the singular-kernel
//! convolution alike. Fourier coefficients use the convention
//! `c_n = (1/N) Σ_j f(s_j) e^{-i n s_j}` with `s_j = 2πj/N`, so the
//! interpolant is `f(s) = Σ_n c_n e^{i n s}` over signed modes `|n| <= N/2`.

use crate::{Complex, Error, Result};
use rustfft::FftPlanner;

/// Checks the power-of-two node contract shared by all spectral code.
pub fn check_node_count(n: usize) -> Result<()> {
    if n >= 16 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::BadNodeCount { n })
    }
}

/// Signed frequency of FFT bin `k` for length `n` (Nyquist bin maps to `n/2`).
fn signed_mode(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Normalized Fourier coefficients of uniform samples.
pub fn fourier_coeffs(values: &[Complex]) -> Vec<Complex> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Samples at the uniform nodes from normalized coefficients.
pub fn from_coeffs(coeffs: &[Complex]) -> Vec<Complex> {
    let mut buf = coeffs.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(coeffs.len())
        .process(&mut buf);
    buf
}

/// Coefficients of the d/ds derivative of given order.
///
/// The Nyquist bin is zeroed: its odd-order derivative is not representable
/// on the grid and analytic data carries no energy there anyway.
pub fn derivative_coeffs(coeffs: &[Complex], order: u32) -> Vec<Complex> {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k == n / 2 {
                Complex::ZERO
            } else {
                c * Complex::new(0.0, signed_mode(k, n) as f64).powu(order)
            }
        })
        .collect()
}

/// Spectral derivative d/ds of given order at the nodes.
pub fn differentiate(values: &[Complex], order: u32) -> Vec<Complex> {
    from_coeffs(&derivative_coeffs(&fourier_coeffs(values), order))
}

/// Principal-value convolution with the periodic cotangent kernel,
/// `(Cg)(s) = pv ∫₀^{2π} (1/2π) cot((t−s)/2) g(t) dt`, evaluated spectrally.
///
/// On modes this acts as `e^{i n s} ↦ i·sgn(n)·e^{i n s}` (so `cos ↦ −sin`,
/// `sin ↦ cos`) and annihilates the constant mode; that sign is fixed by the
/// principal-value quadrature oracle in the tests.
pub fn cotangent_convolution(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let complex: Vec<Complex> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut coeffs = fourier_coeffs(&complex);
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k == 0 || k == n / 2 {
            *c = Complex::ZERO;
        } else {
            let sign = if signed_mode(k, n) > 0 { 1.0 } else { -1.0 };
            *c *= Complex::new(0.0, sign);
        }
    }
    from_coeffs(&coeffs).iter().map(|c| c.re).collect()
}

/// Resamples periodic data to a new power-of-two node count by zero padding
/// or truncating the spectrum.
pub fn resample(values: &[Complex], new_n: usize) -> Result<Vec<Complex>> {
    check_node_count(new_n)?;
    let n = values.len();
    if n == new_n {
        return Ok(values.to_vec());
    }
    let coeffs = fourier_coeffs(values);
    let mut out = vec![Complex::ZERO; new_n];
    let keep = n.min(new_n) / 2;
    out[0] = coeffs[0];
    for m in 1..keep {
        out[m] = coeffs[m];
        out[new_n - m] = coeffs[n - m];
    }
    if new_n > n {
        // Split the old Nyquist mode symmetrically when upsampling.
        let half = coeffs[n / 2] * 0.5;
        out[keep] = half;
        out[new_n - keep] = half;
    } else {
        // Modes ±new_n/2 alias to the same grid values: fold them into the
        // new Nyquist bin so that upsample-then-downsample is exact.
        out[keep] = coeffs[keep] + coeffs[n - keep];
    }
    Ok(from_coeffs(&out))
}

/// Evaluates the trigonometric interpolant at an arbitrary parameter.
pub fn eval_interpolant(coeffs: &[Complex], s: f64) -> Complex {
    let n = coeffs.len();
    let mut acc = Complex::ZERO;
    for (k, &c) in coeffs.iter().enumerate() {
        if k == n / 2 {
            // Nyquist: symmetric half-mode split keeps real data real.
            acc += c * (Complex::new(0.0, (n / 2) as f64 * s).exp()
                + Complex::new(0.0, -((n / 2) as f64) * s).exp())
                * 0.5;
        } else {
            acc += c * Complex::new(0.0, signed_mode(k, n) as f64 * s).exp();
        }
    }
    acc
}
