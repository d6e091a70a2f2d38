//! Varshamov-Tenengolts syndromes and single-deletion correction.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VtError {
    #[error("VT syndrome needs n >= 1")]
    EmptyInput,
    #[error("no single-bit reinsertion of a {received}-bit string matches the syndrome for n = {n}")]
    NoConsistentInsertion { received: usize, n: usize },
}

/// `a = Σ i·x_i mod (n+1)` over 1-indexed positions, together with `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VtSyndrome {
    pub a: usize,
    pub n: usize,
}

impl VtSyndrome {
    /// Bits needed to transmit `a`, `⌈log2(n+1)⌉`.
    pub fn cost_bits(&self) -> usize {
        crate::gc::log2_ceil(self.n + 1)
    }
}

fn weighted_sum(x: &[u8]) -> usize {
    x.iter().enumerate().map(|(i, &b)| (i + 1) * b as usize).sum()
}

pub fn vt_syndrome(x: &[u8]) -> Result<VtSyndrome, VtError> {
    if x.is_empty() {
        return Err(VtError::EmptyInput);
    }
    let n = x.len();
    Ok(VtSyndrome { a: weighted_sum(x) % (n + 1), n })
}

/// Restores the single deleted bit of `y` (Levenshtein's weight rule).
pub fn vt_correct(y: &[u8], syndrome: VtSyndrome) -> Result<Vec<u8>, VtError> {
    let n = syndrome.n;
    if n == 0 || y.len() + 1 != n || syndrome.a > n {
        return Err(VtError::NoConsistentInsertion { received: y.len(), n });
    }
    let modulus = n + 1;
    let weight: usize = y.iter().map(|&b| b as usize).sum();
    let deficiency = (syndrome.a + modulus - weighted_sum(y) % modulus) % modulus;

    let mut x = Vec::with_capacity(n);
    if deficiency <= weight {
        // A 0 was deleted, with `deficiency` ones to its right.
        let mut ones_right = weight;
        let mut at = y.len();
        for (i, &b) in y.iter().enumerate() {
            if ones_right == deficiency {
                at = i;
                break;
            }
            ones_right -= b as usize;
        }
        x.extend_from_slice(&y[..at]);
        x.push(0);
        x.extend_from_slice(&y[at..]);
    } else {
        // A 1 was deleted, with `deficiency - weight - 1` zeros to its left.
        let zeros_left = deficiency - weight - 1;
        let mut seen = 0;
        let mut at = y.len();
        for (i, &b) in y.iter().enumerate() {
            if seen == zeros_left {
                at = i;
                break;
            }
            seen += (b == 0) as usize;
        }
        if seen < zeros_left {
            return Err(VtError::NoConsistentInsertion { received: y.len(), n });
        }
        x.extend_from_slice(&y[..at]);
        x.push(1);
        x.extend_from_slice(&y[at..]);
    }
    debug_assert_eq!(weighted_sum(&x) % modulus, syndrome.a);
    #[cfg(debug_assertions)]
    if n <= 64 {
        debug_assert!(
            brute_force_insertions(y, syndrome).iter().all(|c| *c == x),
            "syndrome-consistent reinsertions disagree"
        );
    }
    Ok(x)
}

/// Every single-bit reinsertion of `y` whose syndrome matches.
#[cfg(any(test, debug_assertions))]
pub(crate) fn brute_force_insertions(y: &[u8], syndrome: VtSyndrome) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for pos in 0..=y.len() {
        for bit in [0u8, 1] {
            let mut x = y.to_vec();
            x.insert(pos, bit);
            if weighted_sum(&x) % (syndrome.n + 1) == syndrome.a {
                out.push(x);
            }
        }
    }
    out
}
