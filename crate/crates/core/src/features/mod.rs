//! Cepstral feature extraction: MFCC and CQCC with optional delta stacking.
//!
//! Both extractors share one frame grid (`FrameParams`), so a clip yields the
//! same number of frames whichever feature is chosen. MFCC frames are 13
//! coefficients, CQCC frames 60; stacking deltas doubles the width.

mod cqt;
mod mel;

pub use cqt::{cqcc, cqt, CqtKernels};
pub use mel::{hz_to_mel, mel_filterbank, mel_to_hz, mfcc};

use crate::audio::AudioClip;
use crate::dsp::WindowKind;
use ndarray::Array2;
use thiserror::Error;

/// Energy floor applied before every log so silence stays finite.
pub const LOG_FLOOR: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("clip too short: {got} samples, need at least {need}")]
    ClipTooShort { got: usize, need: usize },
    #[error("degenerate mel filter: points {0} and {1} fall on the same FFT bin")]
    DegenerateFilter(usize, usize),
    #[error("CQT kernel too long: lowest bin needs {need} samples, clip has {got}")]
    KernelTooLong { need: usize, got: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

/// Framing parameters shared by MFCC and CQCC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameParams {
    pub win_len: f64,
    pub hop: f64,
    pub window: WindowKind,
    pub pre_emphasis: f64,
}

impl Default for FrameParams {
    fn default() -> Self {
        Self {
            win_len: 0.025,
            hop: 0.010,
            window: WindowKind::Hamming,
            pre_emphasis: 0.97,
        }
    }
}

impl FrameParams {
    pub fn win_samples(&self, sample_rate: u32) -> usize {
        (self.win_len * sample_rate as f64).round() as usize
    }

    pub fn hop_samples(&self, sample_rate: u32) -> usize {
        (self.hop * sample_rate as f64).round() as usize
    }

    pub fn validate(&self, sample_rate: u32) -> Result<(), FeatureError> {
        if !(self.hop > 0.0 && self.hop <= self.win_len) {
            return Err(FeatureError::InvalidGeometry(format!(
                "need 0 < hop <= win_len, got hop {} win {}",
                self.hop, self.win_len
            )));
        }
        if self.win_samples(sample_rate) < 2 {
            return Err(FeatureError::InvalidGeometry(
                "window shorter than 2 samples".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.pre_emphasis) {
            return Err(FeatureError::InvalidGeometry(format!(
                "pre-emphasis {} outside [0, 1)",
                self.pre_emphasis
            )));
        }
        Ok(())
    }
}

/// Mel filterbank / MFCC parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MelParams {
    pub n_filters: usize,
    pub n_ceps: usize,
    pub fmin: f64,
    /// Upper band edge; `None` means the Nyquist frequency.
    pub fmax: Option<f64>,
    /// FFT size; `None` picks the next power of two at or above the window.
    pub n_fft: Option<usize>,
}

impl Default for MelParams {
    fn default() -> Self {
        Self {
            n_filters: 26,
            n_ceps: 13,
            fmin: 0.0,
            fmax: None,
            n_fft: None,
        }
    }
}

impl MelParams {
    pub fn effective_fmax(&self, sample_rate: u32) -> f64 {
        self.fmax.unwrap_or(sample_rate as f64 / 2.0)
    }

    pub fn effective_n_fft(&self, win_samples: usize) -> usize {
        self.n_fft
            .unwrap_or_else(|| win_samples.next_power_of_two())
    }

    pub fn validate(&self, sample_rate: u32, win_samples: usize) -> Result<(), FeatureError> {
        let fmax = self.effective_fmax(sample_rate);
        let nyquist = sample_rate as f64 / 2.0;
        if self.n_ceps == 0 || self.n_ceps > self.n_filters {
            return Err(FeatureError::InvalidGeometry(format!(
                "need 0 < n_ceps <= n_filters, got {} and {}",
                self.n_ceps, self.n_filters
            )));
        }
        if !(self.fmin >= 0.0 && self.fmin < fmax && fmax <= nyquist) {
            return Err(FeatureError::InvalidGeometry(format!(
                "need 0 <= fmin < fmax <= nyquist, got fmin {} fmax {fmax}",
                self.fmin
            )));
        }
        let n_fft = self.effective_n_fft(win_samples);
        if !n_fft.is_power_of_two() || n_fft < win_samples {
            return Err(FeatureError::InvalidGeometry(format!(
                "n_fft {n_fft} must be a power of two >= window length {win_samples}"
            )));
        }
        Ok(())
    }
}

/// Constant-Q transform / CQCC parameters.
///
/// The geometry is anchored at the top: `fmin = fmax / 2^n_octaves`, and the
/// quality factor `q = 1/(2^(1/B) - 1)` follows from the bins-per-octave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqtParams {
    pub bins_per_octave: usize,
    /// Top analysis frequency; `None` means the Nyquist frequency.
    pub fmax: Option<f64>,
    pub n_octaves: usize,
    /// Density divisor for the uniform-frequency resampling grid: the linear
    /// grid step is `fmin / resample_period`.
    pub resample_period: usize,
    pub n_ceps: usize,
}

impl Default for CqtParams {
    fn default() -> Self {
        Self {
            bins_per_octave: 96,
            fmax: None,
            n_octaves: 9,
            resample_period: 16,
            n_ceps: 60,
        }
    }
}

impl CqtParams {
    pub fn effective_fmax(&self, sample_rate: u32) -> f64 {
        self.fmax.unwrap_or(sample_rate as f64 / 2.0)
    }

    pub fn fmin(&self, sample_rate: u32) -> f64 {
        self.effective_fmax(sample_rate) / 2f64.powi(self.n_octaves as i32)
    }

    pub fn q_factor(&self) -> f64 {
        1.0 / (2f64.powf(1.0 / self.bins_per_octave as f64) - 1.0)
    }

    pub fn n_bins(&self) -> usize {
        self.bins_per_octave * self.n_octaves
    }

    pub fn validate(&self, sample_rate: u32) -> Result<(), FeatureError> {
        if self.bins_per_octave == 0 || self.n_octaves == 0 {
            return Err(FeatureError::InvalidGeometry(
                "bins_per_octave and n_octaves must be >= 1".into(),
            ));
        }
        if self.resample_period == 0 || self.n_ceps == 0 {
            return Err(FeatureError::InvalidGeometry(
                "resample_period and n_ceps must be >= 1".into(),
            ));
        }
        let fmax = self.effective_fmax(sample_rate);
        if !(fmax > 0.0 && fmax <= sample_rate as f64 / 2.0) {
            return Err(FeatureError::InvalidGeometry(format!(
                "fmax {fmax} outside (0, nyquist]"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Mfcc,
    Cqcc,
}

impl FeatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Mfcc => "mfcc",
            FeatureKind::Cqcc => "cqcc",
        }
    }
}

impl std::str::FromStr for FeatureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mfcc" => Ok(FeatureKind::Mfcc),
            "cqcc" => Ok(FeatureKind::Cqcc),
            other => Err(format!("unknown feature kind `{other}`")),
        }
    }
}

/// A `(time_step, dim)` feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub data: Array2<f64>,
    pub kind: FeatureKind,
}

impl FeatureMatrix {
    pub fn time_step(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }
}

/// Slice a clip into hop-spaced frames and apply the analysis window.
/// Frame count is `1 + floor((N - win) / hop)`.
pub fn frame_and_window(
    clip: &AudioClip,
    params: &FrameParams,
) -> Result<Vec<Vec<f64>>, FeatureError> {
    params.validate(clip.sample_rate)?;
    frame_signal(&clip.samples, clip.sample_rate, params)
}

pub(crate) fn frame_signal(
    samples: &[f64],
    sample_rate: u32,
    params: &FrameParams,
) -> Result<Vec<Vec<f64>>, FeatureError> {
    let win = params.win_samples(sample_rate);
    let hop = params.hop_samples(sample_rate);
    if samples.len() < win {
        return Err(FeatureError::ClipTooShort {
            got: samples.len(),
            need: win,
        });
    }
    let curve = params.window.curve(win);
    let n_frames = 1 + (samples.len() - win) / hop;
    let mut frames = Vec::with_capacity(n_frames);
    for t in 0..n_frames {
        let start = t * hop;
        frames.push(
            samples[start..start + win]
                .iter()
                .zip(curve.iter())
                .map(|(s, w)| s * w)
                .collect(),
        );
    }
    Ok(frames)
}

pub(crate) fn num_frames(n_samples: usize, win: usize, hop: usize) -> Option<usize> {
    if n_samples < win {
        None
    } else {
        Some(1 + (n_samples - win) / hop)
    }
}

pub(crate) fn pre_emphasize(samples: &[f64], coeff: f64) -> Vec<f64> {
    if samples.is_empty() || coeff == 0.0 {
        return samples.to_vec();
    }
    let mut out = Vec::with_capacity(samples.len());
    out.push(samples[0]);
    for i in 1..samples.len() {
        out.push(samples[i] - coeff * samples[i - 1]);
    }
    out
}

/// Regression-based time derivative over `+/- half_width` frames, with
/// replicate-boundary clamping:
/// `d_t = sum_m m*(c_{t+m} - c_{t-m}) / (2 * sum_m m^2)`.
pub fn delta(features: &FeatureMatrix, half_width: usize) -> FeatureMatrix {
    let t_max = features.time_step();
    let dim = features.dim();
    let norm = 2.0 * (1..=half_width).map(|m| (m * m) as f64).sum::<f64>();
    let mut out = Array2::zeros((t_max, dim));
    for t in 0..t_max {
        for m in 1..=half_width {
            let ahead = (t + m).min(t_max - 1);
            let behind = t.saturating_sub(m);
            for j in 0..dim {
                out[[t, j]] +=
                    m as f64 * (features.data[[ahead, j]] - features.data[[behind, j]]);
            }
        }
    }
    out.mapv_inplace(|v| v / norm);
    FeatureMatrix {
        data: out,
        kind: features.kind,
    }
}

/// Concatenate static coefficients with their deltas: `(T, dim) -> (T, 2*dim)`.
pub fn stack_with_delta(features: &FeatureMatrix, half_width: usize) -> FeatureMatrix {
    let d = delta(features, half_width);
    let data = ndarray::concatenate![ndarray::Axis(1), features.data, d.data];
    FeatureMatrix {
        data,
        kind: features.kind,
    }
}

/// Row-major flatten of the first `n_frames` rows, zero-padded so the output
/// length is always `n_frames * dim` regardless of clip duration.
pub fn flatten_first_frames(features: &FeatureMatrix, n_frames: usize) -> Vec<f64> {
    let dim = features.dim();
    let mut out = vec![0.0; n_frames * dim];
    let take = features.time_step().min(n_frames);
    for t in 0..take {
        for j in 0..dim {
            out[t * dim + j] = features.data[[t, j]];
        }
    }
    out
}
