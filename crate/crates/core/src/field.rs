//! Arithmetic in GF(2^m) for 2 <= m <= 16.
//!
//! Elements are stored as `u16` values where bit `i` is the coefficient of
//! `α^i` in the polynomial basis. Addition is XOR; multiplication and
//! inversion go through log/antilog tables built once per field.
//!
//! The primitive polynomial for each degree is fixed. Degrees 4 and 5 use
//! `x^4 + x + 1` and `x^5 + x^2 + 1`, which are the fields the worked
//! GC-code examples are written in; the rest are standard published
//! primitive trinomials/pentanomials. Every table is validated at
//! construction by checking that `α = 2` has full multiplicative order.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Primitive polynomials indexed by degree, with the `x^m` term included.
const PRIMITIVE_POLYS: [u32; 17] = [
    0, 0, 0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} outside supported range {MIN_DEGREE}..={MAX_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#x} is not a primitive polynomial of degree {m}")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value {value} is not an element of GF(2^{m})")]
    OutOfField { m: u32, value: u32 },
}

/// An element of some GF(2^m). The field it belongs to is carried by the
/// [`FieldSpec`] used to operate on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u16> for FieldElement {
    fn from(v: u16) -> Self {
        FieldElement(v)
    }
}

/// Description of GF(2^m) together with its log/antilog tables.
#[derive(Clone)]
pub struct FieldSpec {
    m: u32,
    primitive_poly: u32,
    order: usize,
    // exp[i] = α^i for i in 0..2*(q-1), doubled so log sums need no reduction.
    exp: Vec<u16>,
    // log[x] = discrete log of x; log[0] is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("m", &self.m)
            .field("primitive_poly", &format_args!("{:#x}", self.primitive_poly))
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.primitive_poly == other.primitive_poly
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds GF(2^m) over the given polynomial (bit `i` = coefficient of
    /// `x^i`, bit `m` must be set).
    pub fn new(m: u32, primitive_poly: u32) -> Result<Self, FieldError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::UnsupportedDegree(m));
        }
        let bad = FieldError::NotPrimitive { m, poly: primitive_poly };
        if primitive_poly >> m != 1 || primitive_poly & 1 == 0 {
            return Err(bad);
        }
        let order = 1usize << m;
        let period = order - 1;
        let mut exp = vec![0u16; 2 * period];
        let mut log = vec![0u32; order];
        let mut x: u32 = 1;
        for (i, slot) in exp[..period].iter_mut().enumerate() {
            if i > 0 && x == 1 {
                // α's order is a proper divisor of 2^m - 1.
                return Err(bad);
            }
            *slot = x as u16;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(bad);
        }
        exp.copy_within(..period, period);
        Ok(FieldSpec { m, primitive_poly, order, exp, log })
    }

    /// The fixed field of degree `m`, built once and shared.
    pub fn standard(m: u32) -> Result<&'static FieldSpec, FieldError> {
        static FIELDS: [OnceLock<FieldSpec>; 17] = [const { OnceLock::new() }; 17];
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::UnsupportedDegree(m));
        }
        Ok(FIELDS[m as usize].get_or_init(|| {
            FieldSpec::new(m, PRIMITIVE_POLYS[m as usize]).expect("built-in primitive polynomial table is valid")
        }))
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of field elements, `q = 2^m`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Checks that `value` fits in the field.
    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if (value as usize) < self.order {
            Ok(FieldElement(value as u16))
        } else {
            Err(FieldError::OutOfField { m: self.m, value })
        }
    }

    /// The primitive element `α`.
    pub fn alpha(&self) -> FieldElement {
        FieldElement(2)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[s as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let period = (self.order - 1) as u32;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((period - l) % period) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let period = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % period)) % period) as usize])
    }

    /// `α^e`, with the exponent reduced modulo `2^m - 1`.
    #[inline]
    pub fn alpha_pow(&self, e: usize) -> FieldElement {
        FieldElement(self.exp[e % (self.order - 1)])
    }

    /// Maps `m` bits to a symbol, leftmost bit most significant.
    pub fn bits_to_symbol(&self, bits: &[u8]) -> Result<FieldElement, FieldError> {
        if bits.len() != self.m as usize {
            return Err(FieldError::LengthMismatch { expected: self.m as usize, actual: bits.len() });
        }
        Ok(FieldElement(pack_bits(bits)))
    }

    /// Inverse of [`FieldSpec::bits_to_symbol`].
    pub fn symbol_to_bits(&self, s: FieldElement) -> Vec<u8> {
        let mut out = vec![0u8; self.m as usize];
        write_bits(s, &mut out);
        out
    }
}

/// Packs a short bit slice MSB first. Callers guarantee `bits.len() <= 16`.
#[inline]
pub(crate) fn pack_bits(bits: &[u8]) -> u16 {
    bits.iter().fold(0u16, |acc, &b| (acc << 1) | (b & 1) as u16)
}

/// Writes the low `out.len()` bits of `s` into `out`, MSB first.
#[inline]
pub(crate) fn write_bits(s: FieldElement, out: &mut [u8]) {
    let m = out.len();
    for (i, o) in out.iter_mut().enumerate() {
        *o = ((s.0 >> (m - 1 - i)) & 1) as u8;
    }
}
