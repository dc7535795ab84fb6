//! Spread-spectrum comparison baseline.
//!
//! Each `N`-bit message is split into 4-bit nibbles, each nibble is encoded
//! with the extended (8,4) Hamming code, the `B` resulting blocks are
//! interleaved, and every interleaved bit occupies a slot of `G` chips:
//! chip `t` of slot `s` is `bit XOR code[s][t]`. The receiver XORs each slot
//! with its code and takes a majority vote (a tie reads as 0).
//!
//! `G = floor(L / (m * N * f))` with `f = 2`. For power-of-two `m` the slots
//! fill the codeword exactly; otherwise the trailing chips stay zero.

pub mod hamming;
pub mod interleave;

pub use hamming::{hamming84_decode, hamming84_encode, DecodeStatus};
pub use interleave::{deinterleave, interleave, BLOCK_SIZE};

use rand::seq::SliceRandom;

use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::params::Message;
use crate::rng_from_seed;

/// Expansion factor of the (8,4) code.
pub const EXPANSION: usize = 2;

const NIBBLE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CdmaParams {
    messages: usize,
    data_bits: usize,
    codeword_len: usize,
    chip_len: usize,
    spreading_seed: u64,
}

impl CdmaParams {
    /// `messages` 8-bit messages in a codeword of `codeword_len` chips.
    pub fn new(messages: usize, codeword_len: usize, spreading_seed: u64) -> Result<Self> {
        CdmaParams::with_data_bits(messages, 8, codeword_len, spreading_seed)
    }

    pub fn with_data_bits(messages: usize, data_bits: usize, codeword_len: usize, spreading_seed: u64) -> Result<Self> {
        if messages == 0 {
            return Err(Error::params("at least one message is required"));
        }
        if data_bits == 0 || !data_bits.is_multiple_of(NIBBLE) || data_bits > 64 {
            return Err(Error::params(format!(
                "data bits {data_bits} must be a multiple of 4 up to 64"
            )));
        }
        let coded = messages * data_bits * EXPANSION;
        let chip_len = codeword_len / coded;
        if chip_len == 0 {
            return Err(Error::params(format!(
                "{messages} messages need {coded} coded bits, more than the {codeword_len}-chip codeword"
            )));
        }
        Ok(CdmaParams {
            messages,
            data_bits,
            codeword_len,
            chip_len,
            spreading_seed,
        })
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn data_bits(&self) -> usize {
        self.data_bits
    }

    pub fn codeword_len(&self) -> usize {
        self.codeword_len
    }

    /// Chips per coded bit (the processing gain `G`).
    pub fn chip_len(&self) -> usize {
        self.chip_len
    }

    pub fn spreading_seed(&self) -> u64 {
        self.spreading_seed
    }

    /// Hamming blocks in the interleaver (`B`).
    pub fn blocks(&self) -> usize {
        self.messages * self.data_bits / NIBBLE
    }

    /// Coded bits, one spreading slot each.
    pub fn slots(&self) -> usize {
        self.blocks() * BLOCK_SIZE
    }

    /// True when the slots fill the codeword with no padding.
    pub fn is_exact(&self) -> bool {
        self.slots() * self.chip_len == self.codeword_len
    }
}

/// Per-slot chip sequences shared by encoder and decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadingCodes {
    chip_len: usize,
    chips: Vec<bool>,
}

impl SpreadingCodes {
    /// One shuffled sequence of `floor(G/2)` ones and `ceil(G/2)` zeros per
    /// slot; `G = 1` gives the single chip 0.
    pub fn generate(params: &CdmaParams) -> Self {
        let g = params.chip_len();
        let mut rng = rng_from_seed(params.spreading_seed());
        let mut chips = Vec::with_capacity(params.slots() * g);
        let mut slot: Vec<bool> = (0..g).map(|t| t < g / 2).collect();
        for _ in 0..params.slots() {
            slot.shuffle(&mut rng);
            chips.extend_from_slice(&slot);
        }
        SpreadingCodes { chip_len: g, chips }
    }

    pub fn slot(&self, index: usize) -> &[bool] {
        &self.chips[index * self.chip_len..(index + 1) * self.chip_len]
    }
}

fn check_messages(messages: &[Message], params: &CdmaParams) -> Result<()> {
    if messages.len() != params.messages() {
        return Err(Error::params(format!(
            "expected {} messages, got {}",
            params.messages(),
            messages.len()
        )));
    }
    if let Some(m) = messages.iter().find(|m| m.len() as usize != params.data_bits()) {
        return Err(Error::LengthMismatch {
            expected: params.data_bits(),
            actual: m.len() as usize,
        });
    }
    Ok(())
}

/// Hamming-encoded blocks of all messages, nibble 0 (the low bits) first.
fn coded_blocks(messages: &[Message], params: &CdmaParams) -> Vec<bool> {
    let nibbles = params.data_bits() / NIBBLE;
    let mut bits = Vec::with_capacity(params.slots());
    for m in messages {
        for n in 0..nibbles {
            let word = hamming84_encode(((m.value() >> (n * NIBBLE)) & 0xF) as u8);
            bits.extend((0..BLOCK_SIZE).map(|i| (word >> i) & 1 == 1));
        }
    }
    bits
}

pub fn cdma_encode(messages: &[Message], params: &CdmaParams) -> Result<Codeword> {
    cdma_encode_with(messages, params, &SpreadingCodes::generate(params))
}

pub fn cdma_encode_with(messages: &[Message], params: &CdmaParams, codes: &SpreadingCodes) -> Result<Codeword> {
    check_messages(messages, params)?;
    let stream = interleave(&coded_blocks(messages, params), params.blocks())?;
    let g = params.chip_len();
    let mut cw = Codeword::zeros(params.codeword_len());
    for (s, &bit) in stream.iter().enumerate() {
        for (t, &chip) in codes.slot(s).iter().enumerate() {
            if bit ^ chip {
                cw.set(s * g + t);
            }
        }
    }
    Ok(cw)
}

/// Despreads, deinterleaves and Hamming-decodes; always returns exactly
/// `m` messages.
pub fn cdma_decode(codeword: &Codeword, params: &CdmaParams) -> Result<Vec<Message>> {
    Ok(cdma_decode_detailed(codeword, params, &SpreadingCodes::generate(params))?.0)
}

/// Like [`cdma_decode`], also returning the status of every Hamming block.
pub fn cdma_decode_detailed(
    codeword: &Codeword,
    params: &CdmaParams,
    codes: &SpreadingCodes,
) -> Result<(Vec<Message>, Vec<DecodeStatus>)> {
    if codeword.len() != params.codeword_len() {
        return Err(Error::LengthMismatch {
            expected: params.codeword_len(),
            actual: codeword.len(),
        });
    }
    let g = params.chip_len();
    let despread: Vec<bool> = (0..params.slots())
        .map(|s| {
            let ones = codes
                .slot(s)
                .iter()
                .enumerate()
                .filter(|&(t, &chip)| codeword.get(s * g + t) ^ chip)
                .count();
            2 * ones > g
        })
        .collect();
    let blocks = deinterleave(&despread, params.blocks())?;

    let nibbles = params.data_bits() / NIBBLE;
    let mut statuses = Vec::with_capacity(params.blocks());
    let mut messages = Vec::with_capacity(params.messages());
    for chunk in blocks.chunks(BLOCK_SIZE * nibbles) {
        let mut value = 0u64;
        for (n, block) in chunk.chunks(BLOCK_SIZE).enumerate() {
            let word = block
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i));
            let (nibble, status) = hamming84_decode(word);
            statuses.push(status);
            value |= u64::from(nibble) << (n * NIBBLE);
        }
        messages.push(Message::new(value, params.data_bits() as u32)?);
    }
    Ok((messages, statuses))
}
