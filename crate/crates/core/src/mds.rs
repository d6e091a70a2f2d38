//! Systematic `(k' + c, k')` erasure code over GF(2^ℓ).
//!
//! Parity `r` (1-based) is the inner product of the message with the
//! transposed-Vandermonde vector `(1, α^(r-1), α^(2(r-1)), ...)`, so parity 1
//! is the plain sum of the symbols. Erasures only ever hit systematic
//! positions and are solved with the leading parities, which gives a
//! Vandermonde system over distinct nodes `α^j` and is always invertible.

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdsError {
    #[error("expected {expected} symbols, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{erased} erasures exceed the {available} parities supplied")]
    TooManyErasures { erased: usize, available: usize },
    #[error("k' = {k_prime} and c = {c} do not fit GF(2^{m})")]
    FieldTooSmall { k_prime: usize, c: usize, m: u32 },
    #[error("singular erasure system")]
    SingularSystem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    k_prime: usize,
    c: usize,
    field: &'static FieldSpec,
}

impl GeneratorSpec {
    pub fn new(k_prime: usize, c: usize, field: &'static FieldSpec) -> Result<Self, MdsError> {
        let q = field.order();
        if k_prime == 0 || k_prime > q - 1 || k_prime + c > q {
            return Err(MdsError::FieldTooSmall { k_prime, c, m: field.degree() });
        }
        Ok(GeneratorSpec { k_prime, c, field })
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn field(&self) -> &'static FieldSpec {
        self.field
    }

    /// Generator entry for systematic index `j` (0-based) and parity `r` (1-based).
    #[inline]
    pub fn parity_column(&self, j: usize, r: usize) -> FieldElement {
        self.field.alpha_pow(j * (r - 1))
    }

    /// The `c` parity symbols of `message`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>, MdsError> {
        self.check_len(message.len())?;
        Ok((1..=self.c).map(|r| self.parity_value(message, r)).collect())
    }

    /// `Σ_j symbols[j]·α^(j(r-1))`.
    pub fn parity_value(&self, symbols: &[FieldElement], r: usize) -> FieldElement {
        let f = self.field;
        symbols
            .iter()
            .enumerate()
            .fold(FieldElement::ZERO, |acc, (j, &s)| f.add(acc, f.mul(s, self.parity_column(j, r))))
    }

    /// Returns whether parity `r` of `symbols` equals `expected`, along with
    /// the computed value.
    pub fn parity_check(
        &self,
        symbols: &[FieldElement],
        r: usize,
        expected: FieldElement,
    ) -> Result<(bool, FieldElement), MdsError> {
        self.check_len(symbols.len())?;
        let v = self.parity_value(symbols, r);
        Ok((v == expected, v))
    }

    /// Fills the `None` positions of `symbols` using the first `e` entries of
    /// `parities`, where `e` is the number of erasures.
    pub fn erasure_decode(
        &self,
        symbols: &[Option<FieldElement>],
        parities: &[FieldElement],
    ) -> Result<Vec<FieldElement>, MdsError> {
        self.check_len(symbols.len())?;
        let erased: Vec<usize> = symbols.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(j, _)| j).collect();
        let e = erased.len();
        if e > parities.len().min(self.c) {
            return Err(MdsError::TooManyErasures { erased: e, available: parities.len().min(self.c) });
        }
        let mut out: Vec<FieldElement> = symbols.iter().map(|s| s.unwrap_or_default()).collect();
        if e == 0 {
            return Ok(out);
        }
        let f = self.field;
        // Known part moved to the right-hand side: rhs_r = p_r + Σ_known.
        let rhs: Vec<FieldElement> = (1..=e).map(|r| f.add(parities[r - 1], self.parity_value(&out, r))).collect();
        let matrix: Vec<Vec<FieldElement>> =
            (1..=e).map(|r| erased.iter().map(|&j| self.parity_column(j, r)).collect()).collect();
        let solved = solve(f, matrix, rhs)?;
        for (&j, v) in erased.iter().zip(solved) {
            out[j] = v;
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<(), MdsError> {
        if len != self.k_prime {
            return Err(MdsError::LengthMismatch { expected: self.k_prime, actual: len });
        }
        Ok(())
    }
}

/// Gauss-Jordan elimination over GF(2^m). `matrix` is row-major and square.
pub(crate) fn solve(
    f: &FieldSpec,
    mut matrix: Vec<Vec<FieldElement>>,
    mut rhs: Vec<FieldElement>,
) -> Result<Vec<FieldElement>, MdsError> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !matrix[r][col].is_zero()).ok_or(MdsError::SingularSystem)?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = f.inv(matrix[col][col]).map_err(|_| MdsError::SingularSystem)?;
        for v in matrix[col].iter_mut() {
            *v = f.mul(*v, inv);
        }
        rhs[col] = f.mul(rhs[col], inv);
        for row in 0..n {
            let factor = matrix[row][col];
            if row == col || factor.is_zero() {
                continue;
            }
            let pivot = matrix[col].clone();
            for (m, &p) in matrix[row].iter_mut().zip(&pivot) {
                *m = f.add(*m, f.mul(factor, p));
            }
            rhs[row] = f.add(rhs[row], f.mul(factor, rhs[col]));
        }
    }
    Ok(rhs)
}
