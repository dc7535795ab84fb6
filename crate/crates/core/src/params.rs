//! Code parameters, messages and bit-string prefixes.
//!
//! Messages are stored with bit 0 as the least significant bit, and prefixes
//! grow from there: the length-`j` prefix of a message is its bits
//! `0..j`. Text forms are written most significant bit first, so the
//! message `"1001"` has prefixes `"1"`, `"01"`, `"001"`, `"1001"`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `N + k` accepted in closed mode. The collision-free table holds
/// `2^(N+k+1) - 2` addresses.
pub const MAX_CLOSED_BITS: u32 = 24;

/// Largest `N + k` in any mode; prefixes are packed into a `u64`.
pub const MAX_PREFIX_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeMode {
    /// Every message encodes uniquely; codeword length is `2^(N+k+1)`.
    Closed,
    /// Message space exceeds the codeword; hash collisions are tolerated.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    n_data: u32,
    n_checksum: u32,
    codeword_len: usize,
    checksum_value: u64,
    mode: CodeMode,
}

impl CodeParams {
    /// Closed code with `n_data` message bits and `n_checksum` all-ones
    /// checksum bits.
    pub fn closed(n_data: u32, n_checksum: u32) -> Result<Self> {
        validate_bits(n_data, n_checksum)?;
        let total = n_data + n_checksum;
        if total > MAX_CLOSED_BITS {
            return Err(Error::params(format!(
                "closed codes support N + k <= {MAX_CLOSED_BITS}, got {total}"
            )));
        }
        Ok(CodeParams {
            n_data,
            n_checksum,
            codeword_len: 1usize << (total + 1),
            checksum_value: low_mask(n_checksum),
            mode: CodeMode::Closed,
        })
    }

    /// Open code over an arbitrary codeword length.
    pub fn open(n_data: u32, n_checksum: u32, codeword_len: usize) -> Result<Self> {
        validate_bits(n_data, n_checksum)?;
        if codeword_len < 2 {
            return Err(Error::params("codeword length must be at least 2"));
        }
        Ok(CodeParams {
            n_data,
            n_checksum,
            codeword_len,
            checksum_value: low_mask(n_checksum),
            mode: CodeMode::Open,
        })
    }

    /// Replaces the fixed checksum value (bit 0 is the first checksum bit).
    pub fn with_checksum_value(mut self, value: u64) -> Result<Self> {
        if value & !low_mask(self.n_checksum) != 0 {
            return Err(Error::params(format!(
                "checksum value {value:#b} does not fit in {} bits",
                self.n_checksum
            )));
        }
        self.checksum_value = value;
        Ok(self)
    }

    pub fn n_data(&self) -> u32 {
        self.n_data
    }

    pub fn n_checksum(&self) -> u32 {
        self.n_checksum
    }

    pub fn codeword_len(&self) -> usize {
        self.codeword_len
    }

    pub fn checksum_value(&self) -> u64 {
        self.checksum_value
    }

    pub fn mode(&self) -> CodeMode {
        self.mode
    }

    /// `N + k`: the length of the longest hashed string.
    pub fn prefix_bits(&self) -> u32 {
        self.n_data + self.n_checksum
    }

    /// Hash calls per encoded message: one per data bit plus one for the
    /// combined checksum string when `k > 0`.
    pub fn hashes_per_message(&self) -> u32 {
        self.n_data + u32::from(self.n_checksum > 0)
    }

    /// Number of distinct prefixes of length `1..=N+k`.
    pub fn prefix_domain(&self) -> Option<usize> {
        let bits = self.prefix_bits() + 1;
        (bits < usize::BITS).then(|| (1usize << bits) - 2)
    }

    pub fn message_count_limit(&self) -> u64 {
        if self.n_data >= 64 {
            u64::MAX
        } else {
            1u64 << self.n_data
        }
    }
}

fn validate_bits(n_data: u32, n_checksum: u32) -> Result<()> {
    if n_data == 0 {
        return Err(Error::params("n_data must be at least 1"));
    }
    if n_data + n_checksum > MAX_PREFIX_BITS {
        return Err(Error::params(format!(
            "N + k must not exceed {MAX_PREFIX_BITS}, got {}",
            n_data + n_checksum
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

/// Writes the low `len` bits of `value` most significant bit first.
fn fmt_bits(f: &mut fmt::Formatter<'_>, value: u64, len: u32) -> fmt::Result {
    for i in (0..len).rev() {
        f.write_str(if (value >> i) & 1 == 1 { "1" } else { "0" })?;
    }
    Ok(())
}

fn parse_bits(s: &str) -> Result<(u64, u32)> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty bit string".into()));
    }
    if s.len() > 64 {
        return Err(Error::Parse(format!("bit string of {} bits exceeds 64", s.len())));
    }
    let mut value = 0u64;
    for c in s.chars() {
        value = (value << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
            };
    }
    Ok((value, s.len() as u32))
}

/// A fixed-length message; bit 0 is the least significant bit.
///
/// Ordering is by numeric value, then length.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    value: u64,
    len: u32,
}

impl Message {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::params(format!("message length {len} outside 1..=64")));
        }
        if value & !low_mask(len) != 0 {
            return Err(Error::params(format!("value {value} does not fit in {len} bits")));
        }
        Ok(Message { value, len })
    }

    /// Parses an MSB-first `'0'`/`'1'` string.
    pub fn parse(s: &str) -> Result<Self> {
        let (value, len) = parse_bits(s)?;
        Message::new(value, len)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bit(&self, index: u32) -> bool {
        index < self.len && (self.value >> index) & 1 == 1
    }

    /// The length-`len` prefix (bits `0..len`).
    pub fn prefix(&self, len: u32) -> Prefix {
        assert!(
            len >= 1 && len <= self.len,
            "prefix length {len} outside 1..={}",
            self.len
        );
        Prefix {
            value: self.value & low_mask(len),
            len,
        }
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bits(f, self.value, self.len)
    }
}

impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Message({self})")
    }
}

/// A bit string of length `1..=64` read LSB-first from a message.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prefix {
    value: u64,
    len: u32,
}

impl Prefix {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::params(format!("prefix length {len} outside 1..=64")));
        }
        if value & !low_mask(len) != 0 {
            return Err(Error::params(format!("value {value} does not fit in {len} bits")));
        }
        Ok(Prefix { value, len })
    }

    /// Unchecked constructor for callers that already masked `value`.
    #[inline]
    pub(crate) fn from_raw(value: u64, len: u32) -> Self {
        debug_assert!((1..=64).contains(&len) && value & !low_mask(len) == 0);
        Prefix { value, len }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (value, len) = parse_bits(s)?;
        Prefix::new(value, len)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Appends one bit above the current most significant bit.
    #[inline]
    pub fn child(&self, bit: bool) -> Prefix {
        assert!(self.len < 64);
        Prefix {
            value: self.value | (u64::from(bit) << self.len),
            len: self.len + 1,
        }
    }

    /// Position in the canonical enumeration: length-major, then numeric
    /// value. Length 1 occupies indices 0..2, length 2 occupies 2..6, etc.
    #[inline]
    pub fn canonical_index(&self) -> usize {
        assert!(self.len < usize::BITS - 1);
        (1usize << self.len) - 2 + self.value as usize
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bits(f, self.value, self.len)
    }
}

impl fmt::Debug for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prefix({self})")
    }
}

/// The strings hashed when encoding `message`: its `N` data prefixes, then
/// (when `k > 0`) the full `N + k` bit string with the checksum appended.
pub fn message_prefixes(message: &Message, params: &CodeParams) -> Result<Vec<Prefix>> {
    let n = params.n_data();
    if message.len() != n {
        return Err(Error::LengthMismatch {
            expected: n as usize,
            actual: message.len() as usize,
        });
    }
    let mut out: Vec<Prefix> = (1..=n).map(|j| message.prefix(j)).collect();
    if params.n_checksum() > 0 {
        out.push(checksum_prefix(message.value(), params));
    }
    Ok(out)
}

/// `data ∥ checksum_value` as one `N + k` bit prefix.
#[inline]
pub(crate) fn checksum_prefix(data: u64, params: &CodeParams) -> Prefix {
    let n = params.n_data();
    let cs = if n >= 64 { 0 } else { params.checksum_value() << n };
    Prefix::from_raw(data | cs, params.prefix_bits())
}
