//! Concurrent codes: superimposed hash-prefix encoding into indelible-mark
//! codewords.
//!
//! Every prefix of a message (grown from the least significant bit) is hashed
//! to an address in a large codeword and a mark is set there. Many messages
//! share one codeword and share marks wherever they share prefixes. Decoding
//! walks the prefix tree, keeping a branch alive while its next mark is
//! present. Noise can only add marks, so encoded messages are always decoded;
//! noise may add false decodes (hallucinations), which fixed checksum bits
//! suppress. Long zero runs that are improbable at the codeword's mark density
//! are treated as burst erasures and bridged.
//!
//! The crate also carries the pieces needed to evaluate the scheme:
//!
//! * [`sync`]: inherent synchronisation from the six principle marks.
//! * [`channel`]: seeded noise and burst-erasure models.
//! * [`cdma`]: a Hamming(8,4) + interleaving + spreading baseline.
//! * [`analysis`]: closed-form mark, hash-call, S:N and gain models.
//! * [`experiment`]: seeded parameter sweeps that emit CSV.

pub mod analysis;
pub mod cdma;
pub mod channel;
pub mod codec;
pub mod codeword;
pub mod error;
pub mod experiment;
pub mod hash;
pub mod params;
pub mod sync;

pub use codec::{decode, encode, find_gaps, gap_threshold, DecodeOptions, DecodeResult, GapRegion};
pub use codeword::Codeword;
pub use error::{Error, Result};
pub use hash::{build_table_hash, HashFunction, ModularHash, TableHash};
pub use params::{message_prefixes, CodeMode, CodeParams, Message, Prefix};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives an independent sub-seed from `seed` for the named stream `tag`.
///
/// Experiments use one seed per repeat and split it into streams (table,
/// messages, noise, burst placement, chips) so changing how one stream is
/// consumed never shifts another.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The PRNG used everywhere a seed is accepted.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
