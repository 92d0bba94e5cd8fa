//! Audio ingestion: WAV decoding into normalized mono buffers and
//! sample-rate conversion to the pipeline's canonical rate.

mod resample;
mod wav;

pub use resample::{resample, resample_with, ResampleParams};
pub use wav::{load_wav, write_wav_16bit};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("malformed container: {0}")]
    MalformedContainer(String),
    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("file contains no audio frames")]
    EmptyAudio,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Mono sample buffer with amplitudes in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub source_id: String,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate: u32, source_id: impl Into<String>) -> Self {
        debug_assert!(sample_rate > 0);
        debug_assert!(samples.iter().all(|s| s.is_finite() && s.abs() <= 1.0));
        Self {
            samples,
            sample_rate,
            source_id: source_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}
