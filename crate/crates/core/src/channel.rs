//! Seeded corruption models.
//!
//! Noise is an exact-count draw: `round(mu * L)` distinct positions chosen
//! uniformly without replacement. For an indelible-mark channel those
//! positions are set to one and nothing is ever cleared. A burst erasure
//! zeroes one contiguous region and never sets a bit.
//!
//! [`flip_noise`] toggles the drawn positions instead; the CDMA arm of the
//! comparison experiments uses it.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codec::GapRegion;
use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BurstStart {
    At(usize),
    /// Uniform over every start at which the burst fits.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Noise sets bits (marks coexist with signal).
    Mark,
    /// Noise toggles bits.
    Flip,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub noise_fraction: f64,
    pub gap_fraction: f64,
    pub burst_start: BurstStart,
    pub noise_kind: NoiseKind,
    pub seed: u64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            noise_fraction: 0.0,
            gap_fraction: 0.0,
            burst_start: BurstStart::Random,
            noise_kind: NoiseKind::Mark,
            seed: 0,
        }
    }
}

/// Result of passing a codeword through a [`ChannelSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Received {
    pub codeword: Codeword,
    /// The erased region, if any bits were erased.
    pub burst: Option<GapRegion>,
}

impl ChannelSpec {
    /// Applies noise, then the burst. Noise and burst draw from separate
    /// streams of `seed`.
    pub fn apply(&self, codeword: &Codeword) -> Result<Received> {
        let noise_seed = derive_seed(self.seed, 1);
        let noisy = match self.noise_kind {
            NoiseKind::Mark => add_noise(codeword, self.noise_fraction, noise_seed)?,
            NoiseKind::Flip => flip_noise(codeword, self.noise_fraction, noise_seed)?,
        };
        let (codeword, region) = burst_erase(&noisy, self.gap_fraction, self.burst_start, derive_seed(self.seed, 2))?;
        Ok(Received {
            codeword,
            burst: (region.length > 0).then_some(region),
        })
    }
}

fn check_fraction(name: &str, f: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::params(format!("{name} {f} outside [0, 1]")));
    }
    Ok(())
}

/// `round(fraction * len)` distinct positions, uniformly drawn.
pub fn noise_positions(len: usize, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    check_fraction("noise fraction", fraction)?;
    let count = ((fraction * len as f64).round() as usize).min(len);
    let mut rng = rng_from_seed(seed);
    Ok(index::sample(&mut rng, len, count).into_vec())
}

/// Sets `round(mu * L)` uniformly chosen positions to one.
pub fn add_noise(codeword: &Codeword, mu: f64, seed: u64) -> Result<Codeword> {
    let mut out = codeword.clone();
    for p in noise_positions(codeword.len(), mu, seed)? {
        out.set(p);
    }
    Ok(out)
}

/// Toggles `round(mu * L)` uniformly chosen positions.
pub fn flip_noise(codeword: &Codeword, mu: f64, seed: u64) -> Result<Codeword> {
    let mut out = codeword.clone();
    for p in noise_positions(codeword.len(), mu, seed)? {
        out.toggle(p);
    }
    Ok(out)
}

/// Zeroes `round(gap_fraction * L)` contiguous bits from `start`.
///
/// Returns the corrupted codeword and the erased region. The region never
/// wraps past the end of the codeword.
pub fn burst_erase(
    codeword: &Codeword,
    gap_fraction: f64,
    start: BurstStart,
    seed: u64,
) -> Result<(Codeword, GapRegion)> {
    check_fraction("gap fraction", gap_fraction)?;
    let len = codeword.len();
    let length = ((gap_fraction * len as f64).round() as usize).min(len);
    let start = match start {
        BurstStart::At(s) => s,
        BurstStart::Random => rng_from_seed(seed).gen_range(0..=len - length),
    };
    if start + length > len {
        return Err(Error::OutOfRange {
            start,
            end: start + length,
            len,
        });
    }
    let mut out = codeword.clone();
    out.clear_range(start..start + length);
    Ok((out, GapRegion::new(start, length)))
}
