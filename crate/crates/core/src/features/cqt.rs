//! Constant-Q transform and constant-Q cepstral coefficients.
//!
//! Bin `k` sits at `f_k = fmin * 2^(k/B)` and is analyzed with a kernel of
//! `N_k = round(q * fs / f_k)` samples, `q = 1/(2^(1/B) - 1)`, so the ratio
//! of center frequency to bandwidth is the same for every bin. Kernels are
//! evaluated as direct inner products on the MFCC frame grid, which makes
//! the CQCC time axis match the MFCC time axis by construction.

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use super::{num_frames, FeatureError, FeatureKind, FeatureMatrix};
use super::{CqtParams, FrameParams, LOG_FLOOR};
use crate::audio::AudioClip;
use crate::dsp::{cubic_spline, dct_ii_matrix, WindowKind};

/// Precomputed per-bin temporal kernels.
///
/// Kernel application is a plain inner product; swapping in an
/// FFT-accelerated backend only has to reproduce `apply_at`.
pub struct CqtKernels {
    kernels: Vec<Vec<Complex64>>,
    freqs: Vec<f64>,
    q: f64,
}

impl CqtKernels {
    pub fn new(params: &CqtParams, sample_rate: u32) -> Result<Self, FeatureError> {
        params.validate(sample_rate)?;
        let fmin = params.fmin(sample_rate);
        if fmin <= 0.0 {
            return Err(FeatureError::InvalidGeometry("fmin must be positive".into()));
        }
        let q = params.q_factor();
        let b = params.bins_per_octave as f64;
        let n_bins = params.n_bins();

        let mut kernels = Vec::with_capacity(n_bins);
        let mut freqs = Vec::with_capacity(n_bins);
        for k in 0..n_bins {
            let f_k = fmin * 2f64.powf(k as f64 / b);
            let n_k = (q * sample_rate as f64 / f_k).round() as usize;
            let window = WindowKind::Hamming.curve(n_k.max(1));
            let center = (n_k.saturating_sub(1)) as f64 / 2.0;
            let norm = 1.0 / n_k as f64;
            let kernel = (0..n_k)
                .map(|n| {
                    let phase = -2.0 * std::f64::consts::PI * f_k * (n as f64 - center)
                        / sample_rate as f64;
                    Complex64::from_polar(window[n] * norm, phase)
                })
                .collect();
            kernels.push(kernel);
            freqs.push(f_k);
        }
        Ok(Self { kernels, freqs, q })
    }

    pub fn n_bins(&self) -> usize {
        self.kernels.len()
    }

    pub fn center_freq(&self, k: usize) -> f64 {
        self.freqs[k]
    }

    pub fn window_len(&self, k: usize) -> usize {
        self.kernels[k].len()
    }

    /// Bandwidth of bin `k` implied by the constant-Q construction.
    pub fn bandwidth(&self, k: usize) -> f64 {
        self.freqs[k] / self.q
    }

    pub fn max_window_len(&self) -> usize {
        self.kernels.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Inner product of bin `k`'s kernel centered at sample `center`;
    /// samples outside the clip contribute zero.
    fn apply_at(&self, samples: &[f64], k: usize, center: isize) -> Complex64 {
        let kernel = &self.kernels[k];
        let half = kernel.len() as isize / 2;
        let start = center - half;
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, coeff) in kernel.iter().enumerate() {
            let idx = start + n as isize;
            if idx >= 0 && (idx as usize) < samples.len() {
                acc += samples[idx as usize] * coeff;
            }
        }
        acc
    }
}

/// Constant-Q transform sampled on the frame grid: a `(time_step, n_bins)`
/// complex matrix whose rows line up with MFCC frames for the same
/// `FrameParams`.
pub fn cqt(
    clip: &AudioClip,
    cp: &CqtParams,
    fp: &FrameParams,
) -> Result<Array2<Complex64>, FeatureError> {
    fp.validate(clip.sample_rate)?;
    let kernels = CqtKernels::new(cp, clip.sample_rate)?;
    cqt_with_kernels(clip, &kernels, fp)
}

pub fn cqt_with_kernels(
    clip: &AudioClip,
    kernels: &CqtKernels,
    fp: &FrameParams,
) -> Result<Array2<Complex64>, FeatureError> {
    let win = fp.win_samples(clip.sample_rate);
    let hop = fp.hop_samples(clip.sample_rate);
    let t_max = num_frames(clip.samples.len(), win, hop).ok_or(FeatureError::ClipTooShort {
        got: clip.samples.len(),
        need: win,
    })?;
    let longest = kernels.max_window_len();
    if longest > clip.samples.len() {
        return Err(FeatureError::KernelTooLong {
            need: longest,
            got: clip.samples.len(),
        });
    }

    let mut out = Array2::from_elem((t_max, kernels.n_bins()), Complex64::new(0.0, 0.0));
    for t in 0..t_max {
        let center = (t * hop + win / 2) as isize;
        for k in 0..kernels.n_bins() {
            out[[t, k]] = kernels.apply_at(&clip.samples, k, center);
        }
    }
    Ok(out)
}

/// CQCC: log CQT power, cubic-spline resampling from the geometric bin
/// frequencies onto a linear grid with step `fmin / resample_period`, then
/// orthonormal DCT-II keeping the first `n_ceps` coefficients.
pub fn cqcc(
    clip: &AudioClip,
    cp: &CqtParams,
    fp: &FrameParams,
) -> Result<FeatureMatrix, FeatureError> {
    fp.validate(clip.sample_rate)?;
    let kernels = CqtKernels::new(cp, clip.sample_rate)?;
    let spectrum = cqt_with_kernels(clip, &kernels, fp)?;

    let n_bins = kernels.n_bins();
    let geo_freqs: Vec<f64> = (0..n_bins).map(|k| kernels.center_freq(k)).collect();
    let step = kernels.center_freq(0) / cp.resample_period as f64;
    let top = kernels.center_freq(n_bins - 1);
    let n_lin = ((top - geo_freqs[0]) / step).floor() as usize + 1;
    if n_lin < cp.n_ceps {
        return Err(FeatureError::InvalidGeometry(format!(
            "linear resampling grid has {n_lin} points, fewer than n_ceps {}",
            cp.n_ceps
        )));
    }
    let lin_freqs: Vec<f64> = (0..n_lin).map(|j| geo_freqs[0] + j as f64 * step).collect();
    let dct = dct_ii_matrix(cp.n_ceps, n_lin);

    let t_max = spectrum.nrows();
    let mut out = Array2::zeros((t_max, cp.n_ceps));
    let mut log_power = vec![0.0; n_bins];
    for t in 0..t_max {
        for k in 0..n_bins {
            log_power[k] = (spectrum[[t, k]].norm_sqr().max(LOG_FLOOR)).ln();
        }
        let uniform = ndarray::Array1::from_vec(cubic_spline(&geo_freqs, &log_power, &lin_freqs));
        out.row_mut(t).assign(&dct.dot(&uniform));
    }
    Ok(FeatureMatrix {
        data: out,
        kind: FeatureKind::Cqcc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{mfcc, MelParams};

    // Reduced geometry keeps kernels shorter than a one-second clip.
    fn small_params() -> CqtParams {
        CqtParams {
            bins_per_octave: 12,
            fmax: Some(4000.0),
            n_octaves: 4,
            resample_period: 16,
            n_ceps: 60,
        }
    }

    fn tone(freq: f64, secs: f64) -> AudioClip {
        let n = (16000.0 * secs) as usize;
        let samples = (0..n)
            .map(|i| 0.5 * (2.0 * std::f64::consts::PI * freq * i as f64 / 16000.0).sin())
            .collect();
        AudioClip::new(samples, 16000, "tone")
    }

    fn argmax_row(m: &Array2<Complex64>, t: usize) -> usize {
        (0..m.ncols())
            .max_by(|&a, &b| {
                m[[t, a]]
                    .norm_sqr()
                    .partial_cmp(&m[[t, b]].norm_sqr())
                    .unwrap()
            })
            .unwrap()
    }

    #[test]
    fn default_geometry() {
        let p = CqtParams::default();
        assert_eq!(p.n_bins(), 864);
        assert!((p.fmin(16000) - 15.625).abs() < 1e-12);
    }

    #[test]
    fn tone_at_fmin_peaks_at_bin_zero() {
        let p = small_params();
        let clip = tone(p.fmin(16000), 1.0);
        let spec = cqt(&clip, &p, &FrameParams::default()).unwrap();
        let mid = spec.nrows() / 2;
        assert_eq!(argmax_row(&spec, mid), 0);
    }

    #[test]
    fn tone_one_octave_up_peaks_at_bin_b() {
        let p = small_params();
        let clip = tone(p.fmin(16000) * 2.0, 1.0);
        let spec = cqt(&clip, &p, &FrameParams::default()).unwrap();
        let mid = spec.nrows() / 2;
        assert_eq!(argmax_row(&spec, mid), p.bins_per_octave);
    }

    #[test]
    fn constant_q_ratio_holds_across_bins() {
        let p = small_params();
        let kernels = CqtKernels::new(&p, 16000).unwrap();
        let one_over_q = 2f64.powf(1.0 / p.bins_per_octave as f64) - 1.0;
        for k in 0..kernels.n_bins() {
            let ratio = kernels.center_freq(k) * one_over_q / kernels.bandwidth(k);
            assert!((ratio - 1.0).abs() < 1e-9);
            let expect_len =
                (kernels.q() * 16000.0 / kernels.center_freq(k)).round() as usize;
            assert_eq!(kernels.window_len(k), expect_len);
        }
    }

    #[test]
    fn kernel_longer_than_clip_errors() {
        let p = small_params();
        // fmin = 250 Hz needs ~1076 samples; give it 600.
        let clip = tone(500.0, 600.0 / 16000.0);
        assert!(matches!(
            cqt(&clip, &p, &FrameParams::default()),
            Err(FeatureError::KernelTooLong { .. })
        ));
    }

    #[test]
    fn cqcc_has_60_columns_and_matches_mfcc_frames() {
        let clip = tone(997.0, 1.0);
        let fp = FrameParams::default();
        let c = cqcc(&clip, &small_params(), &fp).unwrap();
        let m = mfcc(&clip, &fp, &MelParams::default()).unwrap();
        assert_eq!(c.dim(), 60);
        assert_eq!(c.time_step(), m.time_step());
    }

    #[test]
    fn cqcc_of_silence_is_time_constant() {
        let clip = AudioClip::new(vec![0.0; 16000], 16000, "silence");
        let c = cqcc(&clip, &small_params(), &FrameParams::default()).unwrap();
        for t in 1..c.time_step() {
            for j in 0..c.dim() {
                assert_eq!(c.data[[t, j]], c.data[[0, j]]);
            }
        }
    }
}
