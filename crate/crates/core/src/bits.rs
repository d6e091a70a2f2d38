//! Bit strings as `Vec<u8>` of 0/1 values, and the ASCII `0`/`1` file format.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("invalid character {ch:?} at offset {offset}; only '0', '1' and newlines are allowed")]
    InvalidChar { ch: char, offset: usize },
}

/// Parses a string of `0`/`1` characters. Newlines (`\n`, `\r\n`) are
/// ignored wherever they appear.
pub fn parse_bits(s: &str) -> Result<Vec<u8>, BitsError> {
    s.char_indices()
        .filter(|(_, ch)| *ch != '\n' && *ch != '\r')
        .map(|(offset, ch)| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(BitsError::InvalidChar { ch, offset }),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Contents of a bit file: the bits followed by a single newline.
pub fn to_bit_file(bits: &[u8]) -> String {
    let mut s = format_bits(bits);
    s.push('\n');
    s
}

/// Greedy two-pointer test for `short` being a subsequence of `long`.
pub fn is_subsequence(short: &[u8], long: &[u8]) -> bool {
    if short.len() > long.len() {
        return false;
    }
    let mut it = long.iter();
    short.iter().all(|s| it.any(|l| l == s))
}

/// FNV-1a over the bit string, truncated to `bits` bits (at most 64).
pub fn digest(data: &[u8], key: u64, bits: u32) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ key;
    for chunk in data.chunks(8) {
        let byte = chunk.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1));
        h ^= byte as u64;
        h = h.wrapping_mul(PRIME);
    }
    // Length is folded in so that trailing zero bits change the digest.
    h ^= data.len() as u64;
    h = h.wrapping_mul(PRIME);
    if bits >= 64 {
        h
    } else {
        h & ((1u64 << bits) - 1)
    }
}
