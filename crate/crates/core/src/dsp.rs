//! Shared DSP primitives: analysis windows, power spectra, the orthonormal
//! DCT-II, and natural cubic spline interpolation.

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Analysis window shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowKind {
    #[default]
    Hamming,
    Hann,
}

impl WindowKind {
    /// Window curve of length `n` (periodic=false, symmetric form).
    pub fn curve(self, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![1.0];
        }
        let denom = (n - 1) as f64;
        (0..n)
            .map(|i| {
                let x = 2.0 * std::f64::consts::PI * i as f64 / denom;
                match self {
                    WindowKind::Hamming => 0.54 - 0.46 * x.cos(),
                    WindowKind::Hann => 0.5 - 0.5 * x.cos(),
                }
            })
            .collect()
    }
}

/// One-sided power spectrum of a frame: entry `k = |DFT_k|^2 / n_fft`,
/// for `k = 0..=n_fft/2`. The frame is zero-padded to `n_fft`.
///
/// Panics if the frame is longer than `n_fft`; callers validate geometry.
pub fn power_spectrum(frame: &[f64], n_fft: usize) -> Vec<f64> {
    assert!(
        frame.len() <= n_fft,
        "frame length {} exceeds n_fft {}",
        frame.len(),
        n_fft
    );
    let mut buf: Vec<Complex64> = frame.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    buf.resize(n_fft, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    let scale = 1.0 / n_fft as f64;
    buf[..=n_fft / 2].iter().map(|c| c.norm_sqr() * scale).collect()
}

/// Orthonormal DCT-II matrix with `n_out` rows and `n_in` columns.
///
/// Row 0 is scaled by `sqrt(1/n_in)` and the remaining rows by
/// `sqrt(2/n_in)`, so the full square matrix is orthogonal.
pub fn dct_ii_matrix(n_out: usize, n_in: usize) -> Array2<f64> {
    let mut m = Array2::zeros((n_out, n_in));
    for i in 0..n_out {
        let norm = if i == 0 {
            (1.0 / n_in as f64).sqrt()
        } else {
            (2.0 / n_in as f64).sqrt()
        };
        for j in 0..n_in {
            m[[i, j]] = norm
                * (std::f64::consts::PI * i as f64 * (j as f64 + 0.5) / n_in as f64).cos();
        }
    }
    m
}

/// Natural cubic spline through `(xs, ys)`, evaluated at `xq`.
///
/// `xs` must be strictly increasing with at least two knots. Queries are
/// clamped to the knot range (our callers never extrapolate by more than
/// rounding slack at the grid ends).
pub fn cubic_spline(xs: &[f64], ys: &[f64], xq: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert_eq!(n, ys.len(), "knot arrays must have equal length");
    assert!(n >= 2, "spline needs at least two knots");
    debug_assert!(xs.windows(2).all(|w| w[1] > w[0]));

    if n == 2 {
        // Degenerates to linear interpolation.
        let slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        return xq
            .iter()
            .map(|&x| ys[0] + slope * (x.clamp(xs[0], xs[1]) - xs[0]))
            .collect();
    }

    // Second derivatives from the natural boundary tridiagonal system,
    // solved with the Thomas algorithm.
    let mut m = vec![0.0; n];
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        let a = h0;
        let b = 2.0 * (h0 + h1);
        let c = h1;
        let d = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        let w = b - a * c_prime[i - 1];
        c_prime[i] = c / w;
        d_prime[i] = (d - a * d_prime[i - 1]) / w;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }

    xq.iter()
        .map(|&x| {
            let x = x.clamp(xs[0], xs[n - 1]);
            // xs is sorted; binary search for the containing interval.
            let i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                Ok(i) => i.min(n - 2),
                Err(i) => i.saturating_sub(1).min(n - 2),
            };
            let h = xs[i + 1] - xs[i];
            let a = (xs[i + 1] - x) / h;
            let b = (x - xs[i]) / h;
            a * ys[i]
                + b * ys[i + 1]
                + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0
        })
        .collect()
}
