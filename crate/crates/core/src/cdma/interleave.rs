//! Column-major block interleaver over 8-bit blocks.
//!
//! With `B` blocks, output position `j * B + b` carries bit `j` of block `b`.
//! Consecutive output positions therefore come from different blocks, and
//! any run of at most `B` consecutive positions touches each block at most
//! once.

use crate::error::{Error, Result};

pub const BLOCK_SIZE: usize = 8;

fn check_len(len: usize, blocks: usize) -> Result<()> {
    if len != blocks * BLOCK_SIZE {
        return Err(Error::LengthMismatch {
            expected: blocks * BLOCK_SIZE,
            actual: len,
        });
    }
    Ok(())
}

pub fn interleave<T: Copy>(bits: &[T], blocks: usize) -> Result<Vec<T>> {
    check_len(bits.len(), blocks)?;
    let mut out = Vec::with_capacity(bits.len());
    for j in 0..BLOCK_SIZE {
        for b in 0..blocks {
            out.push(bits[b * BLOCK_SIZE + j]);
        }
    }
    Ok(out)
}

pub fn deinterleave<T: Copy + Default>(bits: &[T], blocks: usize) -> Result<Vec<T>> {
    check_len(bits.len(), blocks)?;
    let mut out = vec![T::default(); bits.len()];
    for j in 0..BLOCK_SIZE {
        for b in 0..blocks {
            out[b * BLOCK_SIZE + j] = bits[j * blocks + b];
        }
    }
    Ok(out)
}
