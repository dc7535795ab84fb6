//! Encoding message sets into a codeword and decoding them back through the
//! prefix tree.
//!
//! Decoding proceeds in rounds. Round `j` extends every live branch by a 0
//! and a 1 bit and keeps each child whose hashed address holds a mark. After
//! the last data round, when checksum bits are in use, each branch is hashed
//! once more with the fixed checksum appended and survives only if that mark
//! is present too. With gap bridging enabled, an address inside a detected
//! burst gap counts as a mark in every round, the checksum round included.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::hash::HashFunction;
use crate::params::{checksum_prefix, message_prefixes, CodeParams, Message, Prefix};

/// A run of zeros treated as a burst erasure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapRegion {
    pub start: usize,
    pub length: usize,
}

impl GapRegion {
    pub fn new(start: usize, length: usize) -> Self {
        GapRegion { start, length }
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn contains(&self, index: usize) -> bool {
        index >= self.start && index < self.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOptions {
    pub bridge_gaps: bool,
    /// Expected number of chance zero runs per codeword tolerated when
    /// sizing the minimum gap length.
    pub gap_false_positive_target: f64,
    /// Gaps to bridge instead of detecting them.
    pub explicit_gaps: Option<Vec<GapRegion>>,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            bridge_gaps: false,
            gap_false_positive_target: 0.01,
            explicit_gaps: None,
        }
    }
}

impl DecodeOptions {
    pub fn bridging() -> Self {
        DecodeOptions {
            bridge_gaps: true,
            ..Default::default()
        }
    }

    pub fn with_gaps(gaps: Vec<GapRegion>) -> Self {
        DecodeOptions {
            bridge_gaps: true,
            explicit_gaps: Some(gaps),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Decoded messages in ascending numeric order, hallucinations included.
    pub messages: Vec<Message>,
    pub hash_calls: u64,
    pub gaps_used: Vec<GapRegion>,
    /// Live branches after each round: `N` data rounds, then the checksum
    /// round when `k > 0`.
    pub live_branch_counts: Vec<usize>,
}

impl DecodeResult {
    pub fn contains(&self, message: &Message) -> bool {
        self.messages.binary_search(message).is_ok()
    }
}

fn check_hash<H: HashFunction + ?Sized>(hash: &H, params: &CodeParams) -> Result<()> {
    if hash.codeword_len() != params.codeword_len() {
        return Err(Error::params(format!(
            "hash addresses {} bits but the code uses {}",
            hash.codeword_len(),
            params.codeword_len()
        )));
    }
    Ok(())
}

/// Marks every hashed prefix of every message. Duplicates merge.
pub fn encode<'a, I, H>(messages: I, hash: &H, params: &CodeParams) -> Result<Codeword>
where
    I: IntoIterator<Item = &'a Message>,
    H: HashFunction + ?Sized,
{
    check_hash(hash, params)?;
    let mut cw = Codeword::zeros(params.codeword_len());
    for m in messages {
        for p in message_prefixes(m, params)? {
            cw.set(hash.address(&p));
        }
    }
    Ok(cw)
}

pub fn decode<H: HashFunction + ?Sized>(
    codeword: &Codeword,
    hash: &H,
    params: &CodeParams,
    options: &DecodeOptions,
) -> Result<DecodeResult> {
    check_hash(hash, params)?;
    let len = params.codeword_len();
    if codeword.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: codeword.len(),
        });
    }

    let gaps_used = if !options.bridge_gaps {
        Vec::new()
    } else if let Some(gaps) = &options.explicit_gaps {
        for g in gaps {
            if g.end() > len {
                return Err(Error::OutOfRange {
                    start: g.start,
                    end: g.end(),
                    len,
                });
            }
        }
        gaps.clone()
    } else {
        detect_gaps(codeword, options.gap_false_positive_target)?
    };

    // Bridged addresses read as marks.
    let effective = if gaps_used.is_empty() {
        None
    } else {
        let mut c = codeword.clone();
        for g in &gaps_used {
            for i in g.start..g.end() {
                c.set(i);
            }
        }
        Some(c)
    };
    let present = effective.as_ref().unwrap_or(codeword);

    let mut hash_calls = 0u64;
    let mut live_branch_counts = Vec::with_capacity(params.prefix_bits() as usize + 1);
    let mut is_live = |p: &Prefix| {
        hash_calls += 1;
        present.get(hash.address(p))
    };

    let mut live: Vec<Prefix> = [false, true]
        .into_iter()
        .map(|b| Prefix::from_raw(u64::from(b), 1))
        .filter(|p| is_live(p))
        .collect();
    live_branch_counts.push(live.len());

    for _ in 1..params.n_data() {
        let mut next = Vec::with_capacity(live.len() * 2);
        for b in &live {
            for bit in [false, true] {
                let child = b.child(bit);
                if is_live(&child) {
                    next.push(child);
                }
            }
        }
        live = next;
        live_branch_counts.push(live.len());
    }

    if params.n_checksum() > 0 {
        live.retain(|b| is_live(&checksum_prefix(b.value(), params)));
        live_branch_counts.push(live.len());
    }

    let n = params.n_data();
    let mut messages: Vec<Message> = live
        .into_iter()
        .map(|p| Message::new(p.value(), n).expect("branch value fits in N bits"))
        .collect();
    messages.sort_unstable();

    Ok(DecodeResult {
        messages,
        hash_calls,
        gaps_used,
        live_branch_counts,
    })
}

/// Gaps improbable at the codeword's own mark density; none when the
/// density is 0 or 1.
pub fn detect_gaps(codeword: &Codeword, false_positive_target: f64) -> Result<Vec<GapRegion>> {
    let density = codeword.density();
    if density <= 0.0 || density >= 1.0 {
        return Ok(Vec::new());
    }
    let min_len = gap_threshold(density, false_positive_target, codeword.len())?;
    Ok(find_gaps(codeword, min_len))
}

/// Every maximal zero run of at least `min_gap_len` bits, in ascending
/// order. Runs touching either end of the codeword are included.
pub fn find_gaps(codeword: &Codeword, min_gap_len: usize) -> Vec<GapRegion> {
    let min_gap_len = min_gap_len.max(1);
    let mut gaps = Vec::new();
    let mut run_start = 0usize;
    let mut push = |start: usize, end: usize| {
        if end - start >= min_gap_len {
            gaps.push(GapRegion::new(start, end - start));
        }
    };
    for mark in codeword.marks() {
        push(run_start, mark);
        run_start = mark + 1;
    }
    push(run_start, codeword.len());
    gaps
}

/// Smallest run length `g` with `L * (1 - density)^g <= false_positive_target`,
/// i.e. the shortest zero run expected to occur by chance fewer than
/// `false_positive_target` times in a codeword of `codeword_len` bits.
pub fn gap_threshold(density: f64, false_positive_target: f64, codeword_len: usize) -> Result<usize> {
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::DegenerateDensity(density));
    }
    if false_positive_target.is_nan() || false_positive_target <= 0.0 {
        return Err(Error::params("false-positive target must be positive"));
    }
    let expected = |g: usize| codeword_len as f64 * (1.0 - density).powi(g as i32);
    let estimate = ((false_positive_target / codeword_len as f64).ln() / (1.0 - density).ln()).ceil();
    let mut g = if estimate.is_finite() && estimate > 1.0 {
        estimate as usize
    } else {
        1
    };
    // Correct for rounding in the logarithms.
    while g > 1 && expected(g - 1) <= false_positive_target {
        g -= 1;
    }
    while expected(g) > false_positive_target {
        g += 1;
    }
    Ok(g)
}

/// Messages of `decoded` that are not in `truth`.
pub fn hallucinations<'a>(truth: &[Message], decoded: &'a [Message]) -> Vec<&'a Message> {
    let truth: BTreeSet<&Message> = truth.iter().collect();
    decoded.iter().filter(|m| !truth.contains(m)).collect()
}
