//! Fixed-length bit arrays used for codewords and received streams.
//!
//! Two on-disk forms are supported:
//!
//! * text: one line of `'0'`/`'1'`, character `i` is address `i`;
//! * binary: a 32-bit little-endian length header, then the bits packed eight
//!   per byte with address 0 in the least significant bit of the first byte.

use std::fmt;
use std::io::{Read, Write};
use std::ops::Range;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    words: Vec<u64>,
    len: usize,
}

impl Codeword {
    pub fn zeros(len: usize) -> Self {
        Codeword {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut cw = Codeword {
            words: vec![!0; len.div_ceil(WORD_BITS)],
            len,
        };
        cw.clear_tail();
        cw
    }

    /// Builds a codeword of `len` bits with marks at `positions`.
    pub fn from_marks<I: IntoIterator<Item = usize>>(len: usize, positions: I) -> Result<Self> {
        let mut cw = Codeword::zeros(len);
        for p in positions {
            if p >= len {
                return Err(Error::OutOfRange {
                    start: p,
                    end: p + 1,
                    len,
                });
            }
            cw.set(p);
        }
        Ok(cw)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut cw = Codeword::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                cw.set(i);
            }
        }
        cw
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at `index`; positions past the end read as zero.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        index < self.len && (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize) {
        assert!(index < self.len, "bit {index} out of range for length {}", self.len);
        self.words[index / WORD_BITS] |= 1 << (index % WORD_BITS);
    }

    #[inline]
    pub fn clear(&mut self, index: usize) {
        assert!(index < self.len, "bit {index} out of range for length {}", self.len);
        self.words[index / WORD_BITS] &= !(1 << (index % WORD_BITS));
    }

    #[inline]
    pub fn toggle(&mut self, index: usize) {
        assert!(index < self.len, "bit {index} out of range for length {}", self.len);
        self.words[index / WORD_BITS] ^= 1 << (index % WORD_BITS);
    }

    #[inline]
    pub fn assign(&mut self, index: usize, value: bool) {
        if value {
            self.set(index)
        } else {
            self.clear(index)
        }
    }

    /// Zeroes every bit in `range`.
    pub fn clear_range(&mut self, range: Range<usize>) {
        assert!(range.end <= self.len);
        for i in range {
            self.clear(i);
        }
    }

    pub fn mark_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Fraction of positions holding a mark; zero for an empty array.
    pub fn density(&self) -> f64 {
        if self.len == 0 {
            0.0
        } else {
            self.mark_count() as f64 / self.len as f64
        }
    }

    /// Ascending positions of all marks.
    pub fn marks(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// In-place OR with another array of the same length.
    pub fn union_with(&mut self, other: &Codeword) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// True when every mark of `other` is also a mark of `self`.
    pub fn is_superset_of(&self, other: &Codeword) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| b & !a == 0)
    }

    /// Copies `len` bits starting at `offset`; bits past the end read as zero.
    pub fn window(&self, offset: usize, len: usize) -> Codeword {
        let mut out = Codeword::zeros(len);
        for i in 0..len {
            if self.get(offset + i) {
                out.set(i);
            }
        }
        out
    }

    /// Writes `other` into `self` starting at `offset` (OR-combined).
    pub fn embed(&mut self, other: &Codeword, offset: usize) -> Result<()> {
        if offset + other.len > self.len {
            return Err(Error::OutOfRange {
                start: offset,
                end: offset + other.len,
                len: self.len,
            });
        }
        for p in other.marks() {
            self.set(offset + p);
        }
        Ok(())
    }

    pub fn to_text01(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Parses a line of `'0'`/`'1'`; surrounding whitespace is ignored.
    pub fn parse_text01(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut cw = Codeword::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => cw.set(i),
                other => return Err(Error::Parse(format!("unexpected character {other:?} at {i}"))),
            }
        }
        Ok(cw)
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let len = u32::try_from(self.len).expect("codeword longer than u32::MAX bits");
        let mut out = Vec::with_capacity(4 + self.len.div_ceil(8));
        out.extend_from_slice(&len.to_le_bytes());
        for byte_index in 0..self.len.div_ceil(8) {
            let word = self.words[byte_index / 8];
            out.push((word >> ((byte_index % 8) * 8)) as u8);
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(Error::Parse("binary codeword shorter than its header".into()));
        }
        let len = u32::from_le_bytes(bytes[..4].try_into().unwrap()) as usize;
        let body = &bytes[4..];
        if body.len() != len.div_ceil(8) {
            return Err(Error::Parse(format!(
                "binary codeword of {len} bits needs {} body bytes, found {}",
                len.div_ceil(8),
                body.len()
            )));
        }
        let mut cw = Codeword::zeros(len);
        for (i, &b) in body.iter().enumerate() {
            cw.words[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        if cw
            .words
            .iter()
            .zip(Codeword::ones(len).words.iter())
            .any(|(w, m)| w & !m != 0)
        {
            return Err(Error::Parse("padding bits past the codeword length are set".into()));
        }
        Ok(cw)
    }

    pub fn write_text01<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.to_text01())?;
        Ok(())
    }

    pub fn read_text01<R: Read>(mut r: R) -> Result<Self> {
        let mut s = String::new();
        r.read_to_string(&mut s)?;
        Codeword::parse_text01(&s)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "Codeword({})", self.to_text01())
        } else {
            write!(f, "Codeword {{ len: {}, marks: {} }}", self.len, self.mark_count())
        }
    }
}
