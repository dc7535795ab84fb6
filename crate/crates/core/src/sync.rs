//! Inherent synchronisation.
//!
//! Every message marks `H(x0)` and `H(x1 x0)`, so any codeword with a
//! handful of messages carries marks at some of the six addresses
//! `H("0"), H("1"), H("00"), H("01"), H("10"), H("11")`. A receiver that
//! knows the hash slides this pattern along the received stream and scores
//! each offset by how many of the six addresses hold a mark.
//!
//! This module also holds the closed-form models for how many principle
//! marks `m` random messages fill and how many chance correlations noise
//! produces.

use std::ops::Range;

use crate::codec::GapRegion;
use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::hash::HashFunction;
use crate::params::{CodeParams, Prefix};

pub const PATTERN_SIZE: usize = 6;

pub const DEFAULT_Q_THRESHOLD: u32 = 5;

/// Addresses of the two primary and four secondary marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrincipleMarkPattern {
    /// In the order `H("0"), H("1"), H("00"), H("01"), H("10"), H("11")`.
    pub addresses: [usize; PATTERN_SIZE],
}

impl PrincipleMarkPattern {
    pub fn primary(&self) -> &[usize] {
        &self.addresses[..2]
    }

    pub fn secondary(&self) -> &[usize] {
        &self.addresses[2..]
    }

    pub fn max_address(&self) -> usize {
        *self.addresses.iter().max().unwrap()
    }

    /// Number of pattern addresses marked when the codeword starts at `offset`.
    #[inline]
    pub fn score_at(&self, stream: &Codeword, offset: usize) -> u32 {
        self.addresses.iter().filter(|&&a| stream.get(offset + a)).count() as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SyncCandidate {
    pub offset: usize,
    pub score: u32,
}

pub fn principle_marks<H: HashFunction + ?Sized>(hash: &H) -> PrincipleMarkPattern {
    // MSB-first strings "0", "1", "00", "01", "10", "11".
    let prefixes = [(0, 1), (1, 1), (0, 2), (1, 2), (2, 2), (3, 2)];
    PrincipleMarkPattern {
        addresses: prefixes.map(|(v, len)| hash.address(&Prefix::from_raw(v, len))),
    }
}

/// Scores every offset in `offsets`; stream bits past the end read as zero.
pub fn correlate(stream: &Codeword, pattern: &PrincipleMarkPattern, offsets: Range<usize>) -> Vec<SyncCandidate> {
    offsets
        .map(|offset| SyncCandidate {
            offset,
            score: pattern.score_at(stream, offset),
        })
        .collect()
}

/// Offsets scoring at least `q_threshold`, best first (descending score,
/// then ascending offset). Every stream position is a candidate start.
pub fn synchronize<H: HashFunction + ?Sized>(
    stream: &Codeword,
    hash: &H,
    params: &CodeParams,
    q_threshold: u32,
) -> Result<Vec<SyncCandidate>> {
    synchronize_with_gaps(stream, hash, params, q_threshold, &[])
}

/// Like [`synchronize`], but an offset's threshold drops by one for every
/// pattern address that lands inside one of `gaps` (stream coordinates).
/// The effective threshold never falls below one.
pub fn synchronize_with_gaps<H: HashFunction + ?Sized>(
    stream: &Codeword,
    hash: &H,
    params: &CodeParams,
    q_threshold: u32,
    gaps: &[GapRegion],
) -> Result<Vec<SyncCandidate>> {
    if !(1..=PATTERN_SIZE as u32).contains(&q_threshold) {
        return Err(Error::params(format!("q threshold {q_threshold} outside 1..=6")));
    }
    if hash.codeword_len() != params.codeword_len() {
        return Err(Error::params("hash and code parameters disagree on codeword length"));
    }
    let pattern = principle_marks(hash);
    let in_gap = |pos: usize| gaps.iter().any(|g| g.contains(pos));
    let mut found: Vec<SyncCandidate> = correlate(stream, &pattern, 0..stream.len())
        .into_iter()
        .filter(|c| {
            let threshold = if gaps.is_empty() {
                q_threshold
            } else {
                let hidden = pattern.addresses.iter().filter(|&&a| in_gap(c.offset + a)).count() as u32;
                q_threshold.saturating_sub(hidden).max(1)
            };
            c.score >= threshold
        })
        .collect();
    found.sort_by(|a, b| b.score.cmp(&a.score).then(a.offset.cmp(&b.offset)));
    Ok(found)
}

/// `P(y | x)`: probability that adding one random message moves the count
/// of filled principle marks from `x` to `y`. Indexed `[x - 2][y - 2]`.
const TRANSITIONS: [[f64; 5]; 5] = [
    // to:  2     3     4     5     6
    [0.25, 0.25, 0.50, 0.00, 0.00], // from 2
    [0.00, 0.50, 0.00, 0.50, 0.00], // from 3
    [0.00, 0.00, 0.50, 0.50, 0.00], // from 4
    [0.00, 0.00, 0.00, 0.75, 0.25], // from 5
    [0.00, 0.00, 0.00, 0.00, 1.00], // from 6
];

/// Distribution of filled principle marks after `m` messages:
/// `dist[a - 2] = P(a)_m` for `a` in `2..=6`. Starts from `P(2)_1 = 1`.
pub fn principle_mark_distribution(m: usize) -> Result<[f64; 5]> {
    if m == 0 {
        return Err(Error::params("at least one message is required"));
    }
    let mut dist = [1.0, 0.0, 0.0, 0.0, 0.0];
    for _ in 1..m {
        let mut next = [0.0; 5];
        for (from, &p) in dist.iter().enumerate() {
            for (to, &t) in TRANSITIONS[from].iter().enumerate() {
                next[to] += p * t;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Mean number of filled principle marks after `m` random messages, which
/// is also the expected correlation score at the true offset.
pub fn expected_principle_marks(m: usize) -> Result<f64> {
    let dist = principle_mark_distribution(m)?;
    Ok(dist.iter().enumerate().map(|(i, p)| (i + 2) as f64 * p).sum())
}

/// Chance `q`-fold correlations in a noise-filled space of `codeword_len`
/// positions: `L * mu^q`.
pub fn false_correlation_rate(q: u32, mu: f64, codeword_len: usize) -> f64 {
    codeword_len as f64 * mu.powi(q as i32)
}

/// Noise fraction at which `L * mu^q` equals `f_target`.
pub fn acceptable_noise(q: u32, f_target: f64, codeword_len: usize) -> f64 {
    (f_target / codeword_len as f64).powf(1.0 / q as f64)
}

/// Expected number of offsets whose six-tap score reaches `q` when each
/// tap is independently marked with probability `mu`:
/// `L * P(Binomial(6, mu) >= q)`.
pub fn threshold_correlation_rate(q: u32, mu: f64, codeword_len: usize) -> f64 {
    let n = PATTERN_SIZE as u32;
    let tail: f64 = (q..=n)
        .map(|j| binomial(n, j) * mu.powi(j as i32) * (1.0 - mu).powi((n - j) as i32))
        .sum();
    codeword_len as f64 * tail
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
