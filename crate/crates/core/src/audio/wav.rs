//! Minimal RIFF/WAVE reader and a 16-bit PCM writer.
//!
//! Reads little-endian PCM (8/16/24/32-bit integer) and 32-bit IEEE float
//! `data` payloads, honoring the `fmt ` chunk and skipping unknown chunks.
//! Integer samples are scaled by the magnitude of the type's minimum value
//! (16-bit: /32768); multichannel audio is averaged to mono.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{AudioClip, AudioError};

const FORMAT_PCM: u16 = 1;
const FORMAT_IEEE_FLOAT: u16 = 3;

struct FmtChunk {
    audio_format: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

/// Decode a WAV file into a normalized mono clip. The file stem becomes the
/// clip's `source_id`.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip, AudioError> {
    let path = path.as_ref();
    let source_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut reader = BufReader::new(File::open(path)?);

    let mut riff = [0u8; 12];
    reader
        .read_exact(&mut riff)
        .map_err(|_| AudioError::MalformedContainer("file shorter than RIFF header".into()))?;
    if &riff[0..4] != b"RIFF" || &riff[8..12] != b"WAVE" {
        return Err(AudioError::MalformedContainer(
            "missing RIFF/WAVE magic".into(),
        ));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<Vec<u8>> = None;
    loop {
        let mut header = [0u8; 8];
        match reader.read_exact(&mut header) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
        let id = [header[0], header[1], header[2], header[3]];
        let size = u32::from_le_bytes([header[4], header[5], header[6], header[7]]) as usize;
        match &id {
            b"fmt " => {
                if size < 16 {
                    return Err(AudioError::MalformedContainer("fmt chunk too small".into()));
                }
                let mut body = vec![0u8; size];
                reader.read_exact(&mut body).map_err(|_| {
                    AudioError::MalformedContainer("truncated fmt chunk".into())
                })?;
                fmt = Some(FmtChunk {
                    audio_format: u16::from_le_bytes([body[0], body[1]]),
                    channels: u16::from_le_bytes([body[2], body[3]]),
                    sample_rate: u32::from_le_bytes([body[4], body[5], body[6], body[7]]),
                    bits_per_sample: u16::from_le_bytes([body[14], body[15]]),
                });
            }
            b"data" => {
                let mut body = vec![0u8; size];
                reader.read_exact(&mut body).map_err(|_| {
                    AudioError::MalformedContainer("truncated data chunk".into())
                })?;
                data = Some(body);
            }
            _ => {
                // Unknown chunk: skip payload plus the RIFF pad byte.
                let skip = size + (size & 1);
                std::io::copy(&mut reader.by_ref().take(skip as u64), &mut std::io::sink())?;
                continue;
            }
        }
        // Chunks are word-aligned; odd sizes carry one pad byte.
        if size & 1 == 1 {
            let mut pad = [0u8; 1];
            let _ = reader.read_exact(&mut pad);
        }
    }

    let fmt = fmt.ok_or_else(|| AudioError::MalformedContainer("missing fmt chunk".into()))?;
    let data = data.ok_or_else(|| AudioError::MalformedContainer("missing data chunk".into()))?;
    if fmt.channels == 0 || fmt.sample_rate == 0 {
        return Err(AudioError::MalformedContainer(
            "fmt declares zero channels or zero sample rate".into(),
        ));
    }

    let decode_one: fn(&[u8]) -> f64 = match (fmt.audio_format, fmt.bits_per_sample) {
        (FORMAT_PCM, 8) => |b| (b[0] as i16 - 128) as f64 / 128.0,
        (FORMAT_PCM, 16) => |b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0,
        (FORMAT_PCM, 24) => |b| {
            let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
            v as f64 / 8_388_608.0
        },
        (FORMAT_PCM, 32) => |b| {
            i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64 / 2_147_483_648.0
        },
        (FORMAT_IEEE_FLOAT, 32) => |b| {
            (f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64).clamp(-1.0, 1.0)
        },
        (f, bits) => {
            return Err(AudioError::UnsupportedEncoding(format!(
                "audio format {f} with {bits} bits per sample"
            )))
        }
    };

    let bytes_per_sample = (fmt.bits_per_sample / 8) as usize;
    let frame_bytes = bytes_per_sample * fmt.channels as usize;
    let n_frames = data.len() / frame_bytes;
    if n_frames == 0 {
        return Err(AudioError::EmptyAudio);
    }

    let mut samples = Vec::with_capacity(n_frames);
    let inv_channels = 1.0 / fmt.channels as f64;
    for frame in data[..n_frames * frame_bytes].chunks_exact(frame_bytes) {
        let sum: f64 = frame
            .chunks_exact(bytes_per_sample)
            .map(decode_one)
            .sum();
        samples.push(sum * inv_channels);
    }

    Ok(AudioClip::new(samples, fmt.sample_rate, source_id))
}

/// Write a mono clip as 16-bit PCM. Samples are clamped to `[-1, 1]` and
/// quantized with rounding, so a read-back differs by at most one LSB.
pub fn write_wav_16bit(clip: &AudioClip, path: impl AsRef<Path>) -> Result<(), AudioError> {
    let mut w = BufWriter::new(File::create(path)?);
    let data_len = clip.samples.len() as u32 * 2;

    w.write_all(b"RIFF")?;
    w.write_all(&(36 + data_len).to_le_bytes())?;
    w.write_all(b"WAVE")?;
    w.write_all(b"fmt ")?;
    w.write_all(&16u32.to_le_bytes())?;
    w.write_all(&FORMAT_PCM.to_le_bytes())?;
    w.write_all(&1u16.to_le_bytes())?; // channels
    w.write_all(&clip.sample_rate.to_le_bytes())?;
    w.write_all(&(clip.sample_rate * 2).to_le_bytes())?; // byte rate
    w.write_all(&2u16.to_le_bytes())?; // block align
    w.write_all(&16u16.to_le_bytes())?;
    w.write_all(b"data")?;
    w.write_all(&data_len.to_le_bytes())?;
    for &s in &clip.samples {
        let q = (s.clamp(-1.0, 1.0) * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_all(&q.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wav_bytes(channels: u16, rate: u32, bits: u16, format: u16, payload: &[u8]) -> Vec<u8> {
        let mut v = Vec::new();
        v.extend_from_slice(b"RIFF");
        v.extend_from_slice(&(36 + payload.len() as u32).to_le_bytes());
        v.extend_from_slice(b"WAVE");
        v.extend_from_slice(b"fmt ");
        v.extend_from_slice(&16u32.to_le_bytes());
        v.extend_from_slice(&format.to_le_bytes());
        v.extend_from_slice(&channels.to_le_bytes());
        v.extend_from_slice(&rate.to_le_bytes());
        let block = channels as u32 * bits as u32 / 8;
        v.extend_from_slice(&(rate * block).to_le_bytes());
        v.extend_from_slice(&(block as u16).to_le_bytes());
        v.extend_from_slice(&bits.to_le_bytes());
        v.extend_from_slice(b"data");
        v.extend_from_slice(&(payload.len() as u32).to_le_bytes());
        v.extend_from_slice(payload);
        v
    }

    fn load_from_bytes(bytes: &[u8]) -> Result<AudioClip, AudioError> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.wav");
        std::fs::write(&path, bytes).unwrap();
        load_wav(&path)
    }

    #[test]
    fn max_positive_16bit_sample_scaling() {
        let clip = load_from_bytes(&wav_bytes(1, 16000, 16, 1, &32767i16.to_le_bytes())).unwrap();
        assert_eq!(clip.samples.len(), 1);
        assert!((clip.samples[0] - 32767.0 / 32768.0).abs() < 1e-12);
    }

    #[test]
    fn stereo_averages_to_mono() {
        let mut payload = Vec::new();
        payload.extend_from_slice(&16384i16.to_le_bytes());
        payload.extend_from_slice(&(-16384i16).to_le_bytes());
        let clip = load_from_bytes(&wav_bytes(2, 16000, 16, 1, &payload)).unwrap();
        assert_eq!(clip.samples, vec![0.0]);
    }

    #[test]
    fn one_second_header_arithmetic() {
        let payload = vec![0u8; 16000 * 2];
        let clip = load_from_bytes(&wav_bytes(1, 16000, 16, 1, &payload)).unwrap();
        assert_eq!(clip.samples.len(), 16000);
        assert_eq!(clip.sample_rate, 16000);
    }

    #[test]
    fn bad_magic_is_malformed() {
        let mut bytes = wav_bytes(1, 16000, 16, 1, &[0u8; 4]);
        bytes[0] = b'X';
        assert!(matches!(
            load_from_bytes(&bytes),
            Err(AudioError::MalformedContainer(_))
        ));
    }

    #[test]
    fn compressed_codec_is_unsupported() {
        // Format tag 85 = MPEG layer 3.
        let bytes = wav_bytes(1, 16000, 16, 85, &[0u8; 4]);
        assert!(matches!(
            load_from_bytes(&bytes),
            Err(AudioError::UnsupportedEncoding(_))
        ));
    }

    #[test]
    fn zero_frames_is_empty_audio() {
        let bytes = wav_bytes(1, 16000, 16, 1, &[]);
        assert!(matches!(load_from_bytes(&bytes), Err(AudioError::EmptyAudio)));
    }

    #[test]
    fn unknown_chunks_are_skipped() {
        let mut v = Vec::new();
        let payload = 1234i16.to_le_bytes();
        v.extend_from_slice(b"RIFF");
        v.extend_from_slice(&(4 + 8 + 5 + 1 + 8 + 16 + 8 + 2u32).to_le_bytes());
        v.extend_from_slice(b"WAVE");
        v.extend_from_slice(b"JUNK");
        v.extend_from_slice(&5u32.to_le_bytes());
        v.extend_from_slice(&[9u8; 5]);
        v.push(0); // pad byte for odd-sized chunk
        v.extend_from_slice(b"fmt ");
        v.extend_from_slice(&16u32.to_le_bytes());
        v.extend_from_slice(&1u16.to_le_bytes());
        v.extend_from_slice(&1u16.to_le_bytes());
        v.extend_from_slice(&16000u32.to_le_bytes());
        v.extend_from_slice(&32000u32.to_le_bytes());
        v.extend_from_slice(&2u16.to_le_bytes());
        v.extend_from_slice(&16u16.to_le_bytes());
        v.extend_from_slice(b"data");
        v.extend_from_slice(&2u32.to_le_bytes());
        v.extend_from_slice(&payload);
        let clip = load_from_bytes(&v).unwrap();
        assert!((clip.samples[0] - 1234.0 / 32768.0).abs() < 1e-12);
    }

    #[test]
    fn float_wav_is_clamped() {
        let mut payload = Vec::new();
        payload.extend_from_slice(&1.5f32.to_le_bytes());
        payload.extend_from_slice(&(-0.25f32).to_le_bytes());
        let clip = load_from_bytes(&wav_bytes(1, 16000, 32, 3, &payload)).unwrap();
        assert_eq!(clip.samples[0], 1.0);
        assert!((clip.samples[1] + 0.25).abs() < 1e-9);
    }

    #[test]
    fn write_read_round_trip_within_one_lsb() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.wav");
        let samples: Vec<f64> = (0..500)
            .map(|i| (i as f64 * 0.05).sin() * 0.9)
            .collect();
        let clip = AudioClip::new(samples.clone(), 16000, "rt");
        write_wav_16bit(&clip, &path).unwrap();
        let back = load_wav(&path).unwrap();
        for (a, b) in back.samples.iter().zip(samples.iter()) {
            assert!((a - b).abs() <= 1.0 / 32768.0);
        }
    }
}
