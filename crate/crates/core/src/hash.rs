//! Prefix-to-address hash functions.
//!
//! [`TableHash`] is the collision-free table used by closed codes: a seeded
//! partial permutation of `[0, L)` assigned to prefixes in canonical order
//! (length-major, then numeric value). [`ModularHash`] is a seeded mixing
//! function reduced modulo `L` for open codes, where a full table is out of
//! the question and collisions are tolerated.
//!
//! A table can be dumped and replayed bit-exactly:
//!
//! ```text
//! u32 LE  N
//! u32 LE  k
//! u32 LE  L
//! u64 LE  seed
//! u32 LE  address, one per prefix in canonical order (2^(N+k+1) - 2 entries)
//! ```

use std::io::{Read, Write};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::params::{CodeMode, CodeParams, Prefix};
use crate::{rng_from_seed, splitmix64};

/// Deterministic map from prefixes to codeword addresses in `[0, L)`.
pub trait HashFunction {
    fn address(&self, prefix: &Prefix) -> usize;

    fn codeword_len(&self) -> usize;
}

impl<H: HashFunction + ?Sized> HashFunction for &H {
    fn address(&self, prefix: &Prefix) -> usize {
        (**self).address(prefix)
    }

    fn codeword_len(&self) -> usize {
        (**self).codeword_len()
    }
}

impl<H: HashFunction + ?Sized> HashFunction for Box<H> {
    fn address(&self, prefix: &Prefix) -> usize {
        (**self).address(prefix)
    }

    fn codeword_len(&self) -> usize {
        (**self).codeword_len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableHash {
    n_data: u32,
    n_checksum: u32,
    codeword_len: usize,
    seed: u64,
    table: Vec<u32>,
}

/// Builds the collision-free table for a closed code.
///
/// The addresses `[0, L)` are shuffled with ChaCha8 seeded from `seed` and
/// the first `2^(N+k+1) - 2` are handed out in canonical prefix order.
pub fn build_table_hash(params: &CodeParams, seed: u64) -> Result<TableHash> {
    if params.mode() != CodeMode::Closed {
        return Err(Error::params("a collision-free table requires a closed code"));
    }
    let domain = params
        .prefix_domain()
        .ok_or_else(|| Error::params("prefix domain overflows usize"))?;
    let len = params.codeword_len();
    if domain > len {
        return Err(Error::DomainExceedsCodeword {
            domain,
            codeword_len: len,
        });
    }
    if len > u32::MAX as usize {
        return Err(Error::params("codeword length exceeds u32 addresses"));
    }
    let mut addresses: Vec<u32> = (0..len as u32).collect();
    let mut rng = rng_from_seed(seed);
    let (chosen, _) = addresses.partial_shuffle(&mut rng, domain);
    let table = chosen.to_vec();
    Ok(TableHash {
        n_data: params.n_data(),
        n_checksum: params.n_checksum(),
        codeword_len: len,
        seed,
        table,
    })
}

impl TableHash {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Addresses in canonical prefix order.
    pub fn addresses(&self) -> &[u32] {
        &self.table
    }

    pub fn max_prefix_len(&self) -> u32 {
        self.n_data + self.n_checksum
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.n_data.to_le_bytes())?;
        w.write_all(&self.n_checksum.to_le_bytes())?;
        w.write_all(&(self.codeword_len as u32).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for a in &self.table {
            w.write_all(&a.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dumped table, checking its size, range and injectivity.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut u32buf = [0u8; 4];
        let mut read_u32 = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut u32buf)?;
            Ok(u32::from_le_bytes(u32buf))
        };
        let n_data = read_u32(&mut r)?;
        let n_checksum = read_u32(&mut r)?;
        let codeword_len = read_u32(&mut r)? as usize;
        let mut seed_buf = [0u8; 8];
        r.read_exact(&mut seed_buf)?;
        let seed = u64::from_le_bytes(seed_buf);

        let params = CodeParams::closed(n_data, n_checksum)?;
        if params.codeword_len() != codeword_len {
            return Err(Error::Parse(format!(
                "table header length {codeword_len} does not match 2^(N+k+1) = {}",
                params.codeword_len()
            )));
        }
        let domain = params.prefix_domain().unwrap();
        let mut bytes = vec![0u8; domain * 4];
        r.read_exact(&mut bytes)?;
        let table: Vec<u32> = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mut seen = vec![false; codeword_len];
        for &a in &table {
            let a = a as usize;
            if a >= codeword_len || std::mem::replace(&mut seen[a], true) {
                return Err(Error::Parse(format!("table address {a} is out of range or repeated")));
            }
        }
        Ok(TableHash {
            n_data,
            n_checksum,
            codeword_len,
            seed,
            table,
        })
    }
}

impl HashFunction for TableHash {
    #[inline]
    fn address(&self, prefix: &Prefix) -> usize {
        assert!(
            prefix.len() <= self.max_prefix_len(),
            "prefix of length {} outside table domain (max {})",
            prefix.len(),
            self.max_prefix_len()
        );
        self.table[prefix.canonical_index()] as usize
    }

    fn codeword_len(&self) -> usize {
        self.codeword_len
    }
}

/// Seeded mixing hash reduced modulo `L`; collisions allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularHash {
    seed: u64,
    codeword_len: usize,
}

impl ModularHash {
    pub fn new(codeword_len: usize, seed: u64) -> Result<Self> {
        if codeword_len == 0 {
            return Err(Error::params("codeword length must be positive"));
        }
        Ok(ModularHash { seed, codeword_len })
    }

    pub fn for_params(params: &CodeParams, seed: u64) -> Result<Self> {
        ModularHash::new(params.codeword_len(), seed)
    }
}

impl HashFunction for ModularHash {
    #[inline]
    fn address(&self, prefix: &Prefix) -> usize {
        let h = splitmix64(self.seed ^ splitmix64(prefix.value()) ^ (u64::from(prefix.len()) << 56));
        (h % self.codeword_len as u64) as usize
    }

    fn codeword_len(&self) -> usize {
        self.codeword_len
    }
}
