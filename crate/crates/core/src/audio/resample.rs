//! Windowed-sinc sample-rate conversion with a Kaiser window.

use super::AudioClip;

#[derive(Debug, Clone, Copy)]
pub struct ResampleParams {
    /// Filter taps per output sample at unity ratio; when downsampling the
    /// kernel is stretched by the inverse ratio so the cutoff still lands
    /// below the output Nyquist.
    pub taps: usize,
    pub kaiser_beta: f64,
}

impl Default for ResampleParams {
    fn default() -> Self {
        Self {
            taps: 64,
            kaiser_beta: 8.6,
        }
    }
}

/// Resample to `target_rate` with default filter parameters. Equal rates
/// return the input unchanged, bit for bit.
pub fn resample(clip: &AudioClip, target_rate: u32) -> AudioClip {
    resample_with(clip, target_rate, ResampleParams::default())
}

pub fn resample_with(clip: &AudioClip, target_rate: u32, params: ResampleParams) -> AudioClip {
    assert!(target_rate > 0, "target rate must be positive");
    if target_rate == clip.sample_rate {
        return clip.clone();
    }

    let src = clip.sample_rate as f64;
    let dst = target_rate as f64;
    let ratio = dst / src;
    // Cutoff relative to the input Nyquist; 1.0 when upsampling.
    let cutoff = ratio.min(1.0);
    let half_width = (params.taps as f64 / 2.0) / cutoff;
    let inv_i0_beta = 1.0 / bessel_i0(params.kaiser_beta);

    let n_in = clip.samples.len();
    let n_out = ((n_in as u64 * target_rate as u64) / clip.sample_rate as u64).max(1) as usize;

    let mut out = Vec::with_capacity(n_out);
    for m in 0..n_out {
        let center = m as f64 / ratio;
        let lo = ((center - half_width).ceil() as i64).max(0);
        let hi = ((center + half_width).floor() as i64).min(n_in as i64 - 1);
        let mut acc = 0.0;
        for k in lo..=hi {
            let x = center - k as f64;
            let u = x / half_width;
            let w = bessel_i0(params.kaiser_beta * (1.0 - u * u).max(0.0).sqrt()) * inv_i0_beta;
            acc += clip.samples[k as usize] * cutoff * sinc(cutoff * x) * w;
        }
        out.push(acc.clamp(-1.0, 1.0));
    }

    AudioClip::new(out, target_rate, clip.source_id.clone())
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-16 {
            break;
        }
    }
    sum
}
