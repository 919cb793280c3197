//! Gaussian smoothing for uniformly sampled series.
//!
//! Lane-distance measurements are noisy enough that differentiating them
//! directly produces useless lateral speeds; a Gaussian filter suppresses
//! the noise without distorting the second-scale lane-change dynamics.

use alloc::vec::Vec;

use crate::fmath::{ceil, exp};

/// Discrete Gaussian kernel truncated at ±4σ. Weights are left
/// unnormalized; the convolution renormalizes over the in-range part so
/// boundaries do not bleed toward zero.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    debug_assert!(sigma > 0.0);
    let radius = ceil(4.0 * sigma) as usize;
    let mut kernel = Vec::with_capacity(2 * radius + 1);
    for i in 0..=2 * radius {
        let x = i as f64 - radius as f64;
        kernel.push(exp(-0.5 * (x / sigma) * (x / sigma)));
    }
    kernel
}

/// Gaussian convolution with boundary renormalization; the output has the
/// same length as the input. Series shorter than 3 samples are returned
/// unchanged.
pub fn gaussian_smooth(series: &[f64], sigma: f64) -> Vec<f64> {
    if series.len() < 3 {
        log::warn!(
            "series of {} samples is too short to smooth; returned unchanged",
            series.len()
        );
        return series.to_vec();
    }
    let kernel = gaussian_kernel(sigma);
    let radius = kernel.len() / 2;
    let n = series.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(radius);
        let hi = (i + radius).min(n - 1);
        let mut acc = 0.0;
        let mut mass = 0.0;
        for j in lo..=hi {
            let w = kernel[j + radius - i];
            acc += w * series[j];
            mass += w;
        }
        out.push(acc / mass);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn constants_pass_through() {
        let series = [3.25; 40];
        for v in gaussian_smooth(&series, 5.0) {
            assert_close(v, 3.25, 1e-12);
        }
    }

    #[test]
    fn impulse_response_sums_to_one() {
        let mut series = [0.0; 41];
        series[20] = 1.0;
        let out = gaussian_smooth(&series, 2.0);
        let total: f64 = out.iter().sum();
        assert_close(total, 1.0, 1e-12);
        // Bump is symmetric and peaked at the impulse.
        assert!(out[20] > out[19] && out[19] > out[18]);
        assert_close(out[19], out[21], 1e-15);
    }

    #[test]
    fn noise_on_ramp_is_attenuated() {
        // Deterministic "uniform" jitter on a linear ramp; the variance of
        // first differences must drop strictly.
        let mut x = 0x9e3779b97f4a7c15u64;
        let mut noise = || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let series: Vec<f64> = (0..200).map(|i| 0.05 * i as f64 + 0.3 * noise()).collect();
        let out = gaussian_smooth(&series, 5.0);
        let diff_var = |s: &[f64]| {
            let d: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
            let mean = d.iter().sum::<f64>() / d.len() as f64;
            d.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d.len() as f64
        };
        assert!(diff_var(&out) < diff_var(&series));
    }

    #[test]
    fn short_series_unchanged() {
        let series = [1.0, 2.0];
        assert_eq!(gaussian_smooth(&series, 3.0), series.to_vec());
    }

    #[test]
    fn mean_preserved_on_interior_dominated_series() {
        let series: Vec<f64> = (0..500)
            .map(|i| if i < 50 || i >= 450 { 1.0 } else { 1.0 + ((i % 7) as f64 - 3.0) * 0.01 })
            .collect();
        let out = gaussian_smooth(&series, 5.0);
        let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        assert_close(mean(&out), mean(&series), 1e-9);
    }
}
