//! Window functions and SNR gain bookkeeping.

/// Periodic Hann window. For n == 1 the window is [1.0] (a zero-length
/// taper would annihilate the signal).
pub fn hann(n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![1.0; n];
    }
    (0..n)
        .map(|k| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()))
        .collect()
}

/// Coherent gain: mean of the window.
pub fn coherent_gain(w: &[f64]) -> f64 {
    w.iter().sum::<f64>() / w.len() as f64
}

/// Noise gain: mean of the squared window.
pub fn noise_gain(w: &[f64]) -> f64 {
    w.iter().map(|x| x * x).sum::<f64>() / w.len() as f64
}

/// SNR gain of one windowed FFT for an on-bin tone: N * CG^2 / NG.
fn fft_snr_gain(n: usize) -> f64 {
    let w = hann(n);
    let cg = coherent_gain(&w);
    let ng = noise_gain(&w);
    n as f64 * cg * cg / ng
}

/// Total map-SNR over sample-SNR gain of the two FFT stages,
/// window-corrected. For periodic Hann this is (2/3 Ns)(2/3 Nc).
pub fn snr_processing_gain(n_samples: usize, n_chirps: usize) -> f64 {
    fft_snr_gain(n_samples) * fft_snr_gain(n_chirps)
}

/// Median of a Gamma(m, 1) (Erlang-m) random variable, used to convert the
/// median of an m-channel non-coherent power sum into its mean. Solved from
/// the integer-shape regularized incomplete gamma by bisection.
pub fn erlang_median(m: usize) -> f64 {
    assert!(m >= 1);
    let cdf = |x: f64| -> f64 {
        // P(m, x) = 1 - exp(-x) * sum_{i<m} x^i / i!
        let mut term = 1.0;
        let mut sum = 1.0;
        for i in 1..m {
            term *= x / i as f64;
            sum += term;
        }
        1.0 - (-x).exp() * sum
    };
    let (mut lo, mut hi) = (0.0_f64, 3.0 * m as f64 + 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
