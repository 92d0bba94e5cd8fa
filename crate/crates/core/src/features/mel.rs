//! Mel filterbank construction and MFCC extraction.

use ndarray::{Array1, Array2};

use super::{frame_signal, pre_emphasize, FeatureError, FeatureKind, FeatureMatrix};
use super::{FrameParams, MelParams, LOG_FLOOR};
use crate::audio::AudioClip;
use crate::dsp::{dct_ii_matrix, power_spectrum};

pub fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

pub fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular mel filterbank as an `n_filters x (n_fft/2 + 1)` matrix.
///
/// Band points are equally spaced on the mel scale between `fmin` and `fmax`;
/// each filter rises from its left neighbor's center and falls to its right
/// neighbor's, so adjacent triangles overlap at the centers.
pub fn mel_filterbank(
    params: &MelParams,
    sample_rate: u32,
    n_fft: usize,
) -> Result<Array2<f64>, FeatureError> {
    let fmax = params.effective_fmax(sample_rate);
    let mel_lo = hz_to_mel(params.fmin);
    let mel_hi = hz_to_mel(fmax);
    let n_points = params.n_filters + 2;

    let bins: Vec<usize> = (0..n_points)
        .map(|i| {
            let mel = mel_lo + (mel_hi - mel_lo) * i as f64 / (n_points - 1) as f64;
            ((n_fft + 1) as f64 * mel_to_hz(mel) / sample_rate as f64).floor() as usize
        })
        .collect();
    for i in 0..n_points - 1 {
        if bins[i] == bins[i + 1] {
            return Err(FeatureError::DegenerateFilter(i, i + 1));
        }
    }

    let mut fb = Array2::zeros((params.n_filters, n_fft / 2 + 1));
    for m in 0..params.n_filters {
        let (left, center, right) = (bins[m], bins[m + 1], bins[m + 2]);
        for k in left..=center {
            fb[[m, k]] = (k - left) as f64 / (center - left) as f64;
        }
        for k in center..=right.min(n_fft / 2) {
            fb[[m, k]] = (right - k) as f64 / (right - center) as f64;
        }
        fb[[m, center]] = 1.0;
    }
    Ok(fb)
}

/// MFCC: pre-emphasis, framing and windowing, power spectrum, mel filterbank
/// energies, floored log, orthonormal DCT-II, first `n_ceps` coefficients.
pub fn mfcc(
    clip: &AudioClip,
    fp: &FrameParams,
    mp: &MelParams,
) -> Result<FeatureMatrix, FeatureError> {
    fp.validate(clip.sample_rate)?;
    let win = fp.win_samples(clip.sample_rate);
    mp.validate(clip.sample_rate, win)?;
    let n_fft = mp.effective_n_fft(win);

    let emphasized = pre_emphasize(&clip.samples, fp.pre_emphasis);
    let frames = frame_signal(&emphasized, clip.sample_rate, fp)?;
    let fb = mel_filterbank(mp, clip.sample_rate, n_fft)?;
    let dct = dct_ii_matrix(mp.n_ceps, mp.n_filters);

    let mut out = Array2::zeros((frames.len(), mp.n_ceps));
    for (t, frame) in frames.iter().enumerate() {
        let spectrum = Array1::from_vec(power_spectrum(frame, n_fft));
        let log_energies = fb.dot(&spectrum).mapv(|e| e.max(LOG_FLOOR).ln());
        out.row_mut(t).assign(&dct.dot(&log_energies));
    }
    Ok(FeatureMatrix {
        data: out,
        kind: FeatureKind::Mfcc,
    })
}
