use rustfft::FftPlanner;

use crate::C64;

/// Normalised Fourier coefficients `a_k = (1/N) Σ_j u_j e^{-ikθ_j}`, stored
/// in FFT order (`k = 0..N/2`, then the negative modes).
pub(crate) fn forward(samples: &[C64]) -> Vec<C64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`forward`].
pub(crate) fn inverse(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

pub(crate) fn forward_real(samples: &[f64]) -> Vec<C64> {
    let buf: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    forward(&buf)
}

/// Signed mode number of FFT bin `k` for a length-`n` transform. The Nyquist
/// bin is reported as `+n/2`.
pub(crate) fn mode(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Trigonometric resampling of a real periodic sequence onto `len >= n`
/// points by zero-padding its spectrum. The Nyquist bin is split evenly.
pub(crate) fn resample_real(samples: &[f64], len: usize) -> Vec<f64> {
    let n = samples.len();
    if len == n {
        return samples.to_vec();
    }
    assert!(len > n && n.is_multiple_of(2));
    let coeffs = forward_real(samples);
    let mut padded = vec![C64::new(0.0, 0.0); len];
    let half = n / 2;
    padded[..half].copy_from_slice(&coeffs[..half]);
    for k in 1..half {
        padded[len - k] = coeffs[n - k];
    }
    padded[half] = coeffs[half] * 0.5;
    padded[len - half] = coeffs[half] * 0.5;
    inverse(&padded).into_iter().map(|c| c.re).collect()
}
