//! Closed-form models and decode-quality metrics.
//!
//! `n_eff` below is the number of hash calls per encoded message: `N` when
//! there are no checksum bits and `N + 1` otherwise (see
//! [`CodeParams::hashes_per_message`]).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CodeParams, Message};

/// Expected marks produced by `m` distinct messages:
/// `Z(m) = n_eff*m - m*log2(m) + 3m/2`.
pub fn expected_marks(m: f64, n_eff: f64) -> f64 {
    n_eff * m - m * m.log2() + 1.5 * m
}

/// Expected decoder hash calls with noise fraction `mu`: `2Z + mu*Z`.
pub fn expected_hash_calls(m: f64, mu: f64, n_eff: f64) -> f64 {
    let z = expected_marks(m, n_eff);
    2.0 * z + mu * z
}

/// Signal-to-noise ratio `Z(m) / (mu * (L - Z(m)))`, infinite at `mu = 0`.
pub fn signal_to_noise(m: f64, mu: f64, params: &CodeParams) -> Result<f64> {
    let z = expected_marks(m, params.hashes_per_message() as f64);
    let len = params.codeword_len() as f64;
    if m.is_nan() || m < 1.0 {
        return Err(Error::params("at least one message is required"));
    }
    if z >= len {
        return Err(Error::params(format!("Z({m}) = {z} fills the {len}-bit codeword")));
    }
    if !(0.0..=0.5).contains(&mu) {
        return Err(Error::params(format!("noise fraction {mu} outside [0, 0.5]")));
    }
    if mu == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(z / (mu * (len - z)))
}

/// Reciprocal of [`signal_to_noise`]; zero at `mu = 0`.
pub fn noise_to_signal(m: f64, mu: f64, params: &CodeParams) -> Result<f64> {
    Ok(1.0 / signal_to_noise(m, mu, params)?)
}

/// CDMA processing gain `2^(N+k+1) / (m*N*f)`.
pub fn processing_gain_cdma(m: f64, n: u32, k: u32, f: f64) -> f64 {
    2f64.powi((n + k + 1) as i32) / (m * n as f64 * f)
}

/// Concurrent-code gain `2^(N+k+1) / (N+k)`; independent of message count.
pub fn processing_gain_cc(n: u32, k: u32) -> f64 {
    2f64.powi((n + k + 1) as i32) / (n + k) as f64
}

/// Fraction of decoded messages that were never encoded.
///
/// Empty `decoded` gives 1.0 when `truth` is non-empty, else 0.0.
pub fn decoded_error_fraction(truth: &[Message], decoded: &[Message]) -> f64 {
    if decoded.is_empty() {
        return if truth.is_empty() { 0.0 } else { 1.0 };
    }
    let truth: BTreeSet<&Message> = truth.iter().collect();
    let decoded: BTreeSet<&Message> = decoded.iter().collect();
    decoded.iter().filter(|m| !truth.contains(*m)).count() as f64 / decoded.len() as f64
}

/// Fraction of positions where `decoded` differs from `truth`. Missing
/// positions count as errors.
pub fn positional_error_fraction(truth: &[Message], decoded: &[Message]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let wrong = truth
        .iter()
        .enumerate()
        .filter(|(i, t)| decoded.get(*i) != Some(t))
        .count();
    wrong as f64 / truth.len() as f64
}

/// Decoder hash calls for `total_bits` of data sent as one open-code
/// message (`2A`) or as `A/N` closed-code messages (`2Z(A/N)`).
pub fn open_vs_closed_hash_calls(total_bits: u64, n: u32, k: u32) -> Result<(f64, f64)> {
    if n == 0 || total_bits == 0 || !total_bits.is_multiple_of(n as u64) {
        return Err(Error::params(format!(
            "{total_bits} bits do not split into {n}-bit messages"
        )));
    }
    let m = (total_bits / n as u64) as f64;
    let n_eff = (n + u32::from(k > 0)) as f64;
    Ok((2.0 * total_bits as f64, 2.0 * expected_marks(m, n_eff)))
}

/// One measured or modelled value from an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub experiment: String,
    pub m: usize,
    pub mu: f64,
    pub gap_fraction: f64,
    pub n: u32,
    pub k: u32,
    pub codeword_bits: usize,
    pub seed: u64,
    /// `None` marks the per-point mean (or model) row.
    pub repeat: Option<u32>,
    pub metric: String,
    pub value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msgs(values: &[u64]) -> Vec<Message> {
        values.iter().map(|&v| Message::new(v, 8).unwrap()).collect()
    }

    #[test]
    fn mark_model_values() {
        assert_eq!(expected_marks(128.0, 9.0), 448.0);
        assert_eq!(expected_marks(1.0, 9.0), 10.5);
        for m in 3..2000 {
            assert!(expected_marks(m as f64, 9.0) < 9.0 * m as f64);
        }
    }

    #[test]
    fn hash_call_model() {
        let z = expected_marks(100.0, 9.0);
        assert_eq!(expected_hash_calls(100.0, 0.0, 9.0), 2.0 * z);
        assert!((expected_hash_calls(100.0, 0.3, 9.0) - 2.3 * z).abs() < 1e-9);
    }

    #[test]
    fn signal_to_noise_values() {
        let p = CodeParams::closed(8, 2).unwrap();
        assert_eq!(signal_to_noise(10.0, 0.0, &p).unwrap(), f64::INFINITY);
        assert_eq!(noise_to_signal(10.0, 0.0, &p).unwrap(), 0.0);
        // Independent arithmetic: Z = 90 - 10*log2(10) + 15.
        let z = 105.0 - 10.0 * (10f64.ln() / 2f64.ln());
        assert!((z - 71.780_719).abs() < 1e-5);
        let s = signal_to_noise(10.0, 0.3, &p).unwrap();
        assert!((s - z / (0.3 * (2048.0 - z))).abs() < 1e-12);
        assert!((s - 0.121_07).abs() < 1e-4, "{s}");
        assert!(signal_to_noise(10.0, 0.6, &p).is_err());
        assert!(signal_to_noise(0.0, 0.1, &p).is_err());
    }

    #[test]
    fn noise_to_signal_grows_with_noise() {
        let p = CodeParams::closed(8, 2).unwrap();
        let mut prev = 0.0;
        for i in 1..=50 {
            let ns = noise_to_signal(10.0, i as f64 / 100.0, &p).unwrap();
            assert!(ns > prev);
            prev = ns;
        }
    }

    #[test]
    fn gains() {
        assert_eq!(processing_gain_cdma(128.0, 8, 2, 2.0), 1.0);
        assert_eq!(processing_gain_cdma(1.0, 8, 2, 2.0), 128.0);
        for m in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
            assert_eq!(
                processing_gain_cdma(2.0 * m, 8, 2, 2.0) * 2.0,
                processing_gain_cdma(m, 8, 2, 2.0)
            );
        }
        assert_eq!(processing_gain_cc(8, 2), 204.8);
        assert_eq!(processing_gain_cc(3, 1), 8.0);
    }

    #[test]
    fn error_fractions() {
        let truth = msgs(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert_eq!(decoded_error_fraction(&truth, &truth), 0.0);
        let mut decoded = truth.clone();
        decoded.extend(msgs(&[100, 101, 102, 103, 104]));
        assert!((decoded_error_fraction(&truth, &decoded) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(decoded_error_fraction(&truth, &[]), 1.0);
        assert_eq!(decoded_error_fraction(&[], &[]), 0.0);

        let sent = msgs(&[1, 2, 3, 4]);
        assert_eq!(positional_error_fraction(&sent, &msgs(&[1, 2, 9, 4])), 0.25);
        assert_eq!(positional_error_fraction(&sent, &msgs(&[1, 2])), 0.5);
    }

    #[test]
    fn open_versus_closed() {
        assert_eq!(open_vs_closed_hash_calls(8, 8, 2).unwrap(), (16.0, 21.0));
        for a in (64..=4096).step_by(8) {
            let (open, closed) = open_vs_closed_hash_calls(a, 8, 2).unwrap();
            assert!(closed < open, "A={a}: {closed} >= {open}");
        }
        // Ordering flips between 5 and 6 messages.
        let (o5, c5) = open_vs_closed_hash_calls(40, 8, 2).unwrap();
        let (o6, c6) = open_vs_closed_hash_calls(48, 8, 2).unwrap();
        assert!(c5 > o5 && c6 < o6);
        assert!(open_vs_closed_hash_calls(12, 8, 2).is_err());
    }
}
