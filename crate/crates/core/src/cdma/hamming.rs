//! Extended (8,4) Hamming code, single-error-correcting and
//! double-error-detecting.
//!
//! Bit `i` of a codeword byte is position `i` of
//! `(p1, p2, d0, p3, d1, d2, d3, P)`, where `d0..d3` are bits 0..3 of the
//! nibble and `P` is the parity of the first seven positions.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    Clean,
    Corrected,
    DetectedUncorrectable,
}

#[inline]
fn bit(x: u8, i: u32) -> u8 {
    (x >> i) & 1
}

pub fn hamming84_encode(nibble: u8) -> u8 {
    assert!(nibble < 16, "nibble {nibble} has more than 4 bits");
    let (d0, d1, d2, d3) = (bit(nibble, 0), bit(nibble, 1), bit(nibble, 2), bit(nibble, 3));
    let p1 = d0 ^ d1 ^ d3;
    let p2 = d0 ^ d2 ^ d3;
    let p3 = d1 ^ d2 ^ d3;
    let seven = p1 | p2 << 1 | d0 << 2 | p3 << 3 | d1 << 4 | d2 << 5 | d3 << 6;
    seven | ((seven.count_ones() as u8 & 1) << 7)
}

fn extract(word: u8) -> u8 {
    bit(word, 2) | bit(word, 4) << 1 | bit(word, 5) << 2 | bit(word, 6) << 3
}

/// Decodes one received byte.
///
/// A nonzero syndrome with even overall parity means two errors: the status
/// is [`DecodeStatus::DetectedUncorrectable`] and the nibble is read after
/// flipping the position the syndrome names.
pub fn hamming84_decode(received: u8) -> (u8, DecodeStatus) {
    // Syndrome bit i checks 1-based positions with bit i set.
    let s1 = bit(received, 0) ^ bit(received, 2) ^ bit(received, 4) ^ bit(received, 6);
    let s2 = bit(received, 1) ^ bit(received, 2) ^ bit(received, 5) ^ bit(received, 6);
    let s3 = bit(received, 3) ^ bit(received, 4) ^ bit(received, 5) ^ bit(received, 6);
    let syndrome = s1 | s2 << 1 | s3 << 2;
    let parity_ok = received.count_ones().is_multiple_of(2);

    match (syndrome, parity_ok) {
        (0, true) => (extract(received), DecodeStatus::Clean),
        // Only the overall parity bit flipped.
        (0, false) => (extract(received), DecodeStatus::Corrected),
        (s, false) => (extract(received ^ (1 << (s - 1))), DecodeStatus::Corrected),
        (s, true) => (extract(received ^ (1 << (s - 1))), DecodeStatus::DetectedUncorrectable),
    }
}
