//! Speech anti-spoofing countermeasure toolkit.
//!
//! The pipeline mirrors the classic countermeasure recipe: decode audio to a
//! canonical 16 kHz mono buffer, extract cepstral features (MFCC or CQCC),
//! train a bonafide-vs-spoof classifier (dual-GMM log-likelihood ratio,
//! RBF-kernel SVM, or AdaBoost over SVM), then evaluate scored trials with
//! accuracy, EER, and the normalized minimum t-DCF.
//!
//! Modules:
//! - [`audio`]: WAV decoding and windowed-sinc resampling.
//! - [`features`]: framing, MFCC, CQT/CQCC, delta stacking.
//! - [`models`]: GMM (EM), SVM (SMO), AdaBoost, and model serialization.
//! - [`metrics`]: accuracy, DET curve, EER, minimum normalized t-DCF.
//! - [`protocol`]: trial protocol parsing, balanced sampling, feature cache.
//! - [`toy`]: a seeded synthetic corpus so everything runs without external data.

pub mod audio;
pub mod dsp;
pub mod features;
pub mod metrics;
pub mod models;
pub mod protocol;
pub mod toy;

pub use audio::AudioClip;
pub use features::FeatureMatrix;
pub use metrics::ScoreSet;
