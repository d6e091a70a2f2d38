//! Guess-and-check codes.
//!
//! A `k`-bit message is cut into `k' = ⌈k/ℓ⌉` blocks of `ℓ` bits, each block
//! read as a GF(2^ℓ) symbol. A systematic erasure code adds `c` parity
//! symbols, and only the parity bits are protected by a `(δ+1)`-fold
//! repetition code. The codeword is the raw message followed by the
//! repeated parity bits, `n = k + c(δ+1)ℓ`.
//!
//! The decoder first recovers the parities exactly from the repetition-coded
//! tail, then guesses every way of distributing the observed edits over the
//! blocks. Each guess erases the blocks it touches, fills them from the
//! leading parities and keeps the guess only if the remaining parities agree
//! and every refilled block is consistent with the bits actually received.
//! Decoding succeeds when all surviving guesses agree on one message.

mod cases;
mod decode;
mod tail;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{self, FieldElement, FieldError, FieldSpec};
use crate::mds::{GeneratorSpec, MdsError};

pub use cases::{enumerate_cases, CaseAssignment};
pub use decode::{decode, decode_case, decode_case_symbols, decode_with_parities, subsequence_check};
pub use tail::{recover_parities_del, recover_parities_ins, ParityRecovery, Split};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcError {
    #[error("invalid code parameters: {0}")]
    ParamViolation(String),
    #[error("expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("received {received} bits but codeword length is {n} and at most {delta} edits are corrected")]
    InputLengthOutOfRange { received: usize, n: usize, delta: usize },
    #[error("parity tail is inconsistent with at most {0} edits")]
    MalformedTail(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mds(#[from] MdsError),
}

/// Largest number of parity symbols the decoder handles.
pub const MAX_PARITIES: usize = 64;

/// Which edit channel the decoder should invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Deletions,
    Insertions,
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EditKind::Deletions => "deletions",
            EditKind::Insertions => "insertions",
        })
    }
}

/// Code parameters `(k, ℓ, c, δ)` and the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcParams {
    k: usize,
    ell: usize,
    c: usize,
    delta: usize,
    k_prime: usize,
    last_len: usize,
    generator: GeneratorSpec,
}

impl GcParams {
    pub fn new(k: usize, ell: usize, c: usize, delta: usize) -> Result<Self, GcError> {
        let bad = |msg: String| Err(GcError::ParamViolation(msg));
        if k == 0 {
            return bad("k must be positive".into());
        }
        if !(field::MIN_DEGREE as usize..=field::MAX_DEGREE as usize).contains(&ell) {
            return bad(format!("chunk length ℓ = {ell} must lie in 2..=16"));
        }
        if delta == 0 || c <= delta {
            return bad(format!("need c > δ >= 1, got c = {c}, δ = {delta}"));
        }
        if c > MAX_PARITIES {
            return bad(format!("c = {c} exceeds the supported maximum of {MAX_PARITIES}"));
        }
        if delta > ell {
            return bad(format!("δ = {delta} exceeds chunk length ℓ = {ell}"));
        }
        let k_prime = k.div_ceil(ell);
        let q = 1usize << ell;
        if k_prime + c > q {
            return bad(format!("k' + c = {} exceeds field size 2^{ell} = {q}", k_prime + c));
        }
        let fs = FieldSpec::standard(ell as u32)?;
        let generator = GeneratorSpec::new(k_prime, c, fs)?;
        Ok(GcParams { k, ell, c, delta, k_prime, last_len: k - (k_prime - 1) * ell, generator })
    }

    /// Parameters with `ℓ = ⌈log2 k⌉`.
    pub fn with_log_chunk(k: usize, c: usize, delta: usize) -> Result<Self, GcError> {
        GcParams::new(k, log2_ceil(k).max(2), c, delta)
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn ell(&self) -> usize {
        self.ell
    }
    pub fn c(&self) -> usize {
        self.c
    }
    pub fn delta(&self) -> usize {
        self.delta
    }
    /// Number of blocks `⌈k/ℓ⌉`.
    pub fn k_prime(&self) -> usize {
        self.k_prime
    }
    /// Length of the final block, `1 <= ℓ_last <= ℓ`.
    pub fn last_len(&self) -> usize {
        self.last_len
    }
    pub fn generator(&self) -> &GeneratorSpec {
        &self.generator
    }
    pub fn field(&self) -> &'static FieldSpec {
        self.generator.field()
    }

    /// Codeword length `k + c(δ+1)ℓ`.
    pub fn n(&self) -> usize {
        self.k + self.redundancy()
    }

    pub fn redundancy(&self) -> usize {
        self.c * (self.delta + 1) * self.ell
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n() as f64
    }

    /// Number of parity bits before repetition.
    pub fn parity_bits_len(&self) -> usize {
        self.c * self.ell
    }

    /// Nominal length of block `i` (0-based).
    #[inline]
    pub fn block_len(&self, i: usize) -> usize {
        if i + 1 == self.k_prime {
            self.last_len
        } else {
            self.ell
        }
    }

    pub fn block_caps(&self) -> Vec<usize> {
        (0..self.k_prime).map(|i| self.block_len(i)).collect()
    }

    /// Same parameters with a different number of parity symbols.
    pub fn with_c(&self, c: usize) -> Result<Self, GcError> {
        GcParams::new(self.k, self.ell, c, self.delta)
    }

    /// Message bits as `k'` symbols, the final block right-padded with zeros.
    pub fn message_symbols(&self, message: &[u8]) -> Result<Vec<FieldElement>, GcError> {
        if message.len() != self.k {
            return Err(GcError::LengthMismatch { expected: self.k, actual: message.len() });
        }
        Ok(message.chunks(self.ell).map(|block| self.block_symbol(block)).collect())
    }

    /// Symbol of a block of nominal length `bits.len() <= ℓ`, padded on the right.
    #[inline]
    pub(crate) fn block_symbol(&self, bits: &[u8]) -> FieldElement {
        FieldElement(field::pack_bits(bits) << (self.ell - bits.len()))
    }

    /// MDS parity symbols of a message.
    pub fn parity_symbols(&self, message: &[u8]) -> Result<Vec<FieldElement>, GcError> {
        let symbols = self.message_symbols(message)?;
        Ok(self.generator.encode(&symbols)?)
    }

    /// Parity bits before the repetition step, `c·ℓ` bits.
    pub fn parity_bits(&self, message: &[u8]) -> Result<Vec<u8>, GcError> {
        let parities = self.parity_symbols(message)?;
        Ok(self.symbols_to_bits(&parities))
    }

    pub(crate) fn symbols_to_bits(&self, symbols: &[FieldElement]) -> Vec<u8> {
        let mut out = vec![0u8; symbols.len() * self.ell];
        for (s, chunk) in symbols.iter().zip(out.chunks_mut(self.ell)) {
            field::write_bits(*s, chunk);
        }
        out
    }

    pub(crate) fn bits_to_symbols(&self, bits: &[u8]) -> Vec<FieldElement> {
        bits.chunks(self.ell).map(|b| FieldElement(field::pack_bits(b))).collect()
    }
}

impl fmt::Display for GcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GC(k={}, ℓ={}, c={}, δ={})", self.k, self.ell, self.c, self.delta)
    }
}

pub fn log2_ceil(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Encodes a `k`-bit message into an `n`-bit codeword.
pub fn encode(message: &[u8], params: &GcParams) -> Result<Vec<u8>, GcError> {
    let parity = params.parity_bits(message)?;
    let rep = params.delta + 1;
    let mut out = Vec::with_capacity(params.n());
    out.extend_from_slice(message);
    for b in parity {
        out.extend(std::iter::repeat_n(b, rep));
    }
    Ok(out)
}

/// Result of a GC decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// Every possible case led to the same message. `witness` is the first
    /// case (in enumeration order) that produced it.
    Success { message: Vec<u8>, witness: CaseAssignment },
    /// Two or more distinct messages survived, sorted.
    Failure { candidates: Vec<Vec<u8>> },
    /// No case survived; only possible when the input violates the channel model.
    NoCandidate,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeOutcome::Success { .. })
    }

    pub fn message(&self) -> Option<&[u8]> {
        match self {
            DecodeOutcome::Success { message, .. } => Some(message),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;

    #[test]
    fn derived_quantities() {
        let p = GcParams::new(16, 4, 2, 1).unwrap();
        assert_eq!((p.k_prime(), p.last_len(), p.n()), (4, 4, 32));
        let p = GcParams::new(512, 9, 3, 2).unwrap();
        assert_eq!((p.k_prime(), p.last_len(), p.n()), (57, 8, 512 + 81));
        let p = GcParams::with_log_chunk(1024, 5, 4).unwrap();
        assert_eq!(p.ell(), 10);
        assert_eq!(p.n() - p.k(), 5 * 5 * 10);
        assert_eq!(log2_ceil(256), 8);
        assert_eq!(log2_ceil(257), 9);
        assert_eq!(log2_ceil(1000), 10);
    }

    #[test]
    fn parameter_violations() {
        assert!(GcParams::new(16, 4, 1, 1).is_err());
        assert!(GcParams::new(16, 4, 2, 0).is_err());
        assert!(GcParams::new(16, 4, 6, 5).is_err());
        assert!(GcParams::new(64, 4, 2, 1).is_err()); // k' = 16, 16 + 2 > 16
        assert!(GcParams::new(16, 1, 2, 1).is_err());
        assert!(GcParams::new(16, 17, 2, 1).is_err());
        assert!(GcParams::new(0, 4, 2, 1).is_err());
    }

    #[test]
    fn encode_worked_examples() {
        let p = GcParams::new(16, 4, 2, 1).unwrap();
        let u = parse_bits("1110000011010001").unwrap();
        assert_eq!(p.parity_bits(&u).unwrap(), parse_bits("00100111").unwrap());
        let x = encode(&u, &p).unwrap();
        assert_eq!(x.len(), 32);
        assert_eq!(&x[..16], &u[..]);
        assert_eq!(&x[16..], &parse_bits("0000110000111111").unwrap()[..]);

        let u = parse_bits("1101000010000101").unwrap();
        assert_eq!(p.parity_bits(&u).unwrap(), parse_bits("00000101").unwrap());

        assert_eq!(encode(&[0; 16], &p).unwrap(), vec![0; 32]);
        assert!(matches!(encode(&[0; 15], &p), Err(GcError::LengthMismatch { .. })));
    }

    #[test]
    fn last_block_is_right_padded() {
        let p = GcParams::new(10, 4, 2, 1).unwrap();
        let u = parse_bits("1111000011").unwrap();
        let s = p.message_symbols(&u).unwrap();
        assert_eq!(s, vec![FieldElement(15), FieldElement(0), FieldElement(0b1100)]);
    }
}
