//! Recovery of the parity bits from the repetition-coded tail.

use super::{GcError, GcParams};
use crate::bits::is_subsequence;

/// One consistent way of cutting the received string into a systematic
/// prefix and a parity tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// Received bits attributed to the message.
    pub systematic: Vec<u8>,
    /// Edits attributed to the message, `d_s`.
    pub edits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityRecovery {
    /// The `c·ℓ` parity bits before repetition.
    pub parity_bits: Vec<u8>,
    pub splits: Vec<Split>,
}

fn repeat_bits(bits: &[u8], rep: usize) -> Vec<u8> {
    bits.iter().flat_map(|&b| std::iter::repeat_n(b, rep)).collect()
}

/// Deletion-channel tail decoding: scan runs from the right, each run of
/// received length `L` standing for `⌈L/(δ+1)⌉` parity bits, until `c·ℓ`
/// bits are decoded. The last run may extend into the message, so every
/// boundary consistent with the recovered tail is returned.
pub fn recover_parities_del(received: &[u8], params: &GcParams) -> Result<ParityRecovery, GcError> {
    let n = params.n();
    let delta = params.delta();
    if received.len() > n || n - received.len() > delta {
        return Err(GcError::InputLengthOutOfRange { received: received.len(), n, delta });
    }
    let d = n - received.len();
    let rep = delta + 1;
    let need = params.parity_bits_len();

    let mut decoded = Vec::with_capacity(need);
    let mut i = received.len();
    while decoded.len() < need {
        if i == 0 {
            return Err(GcError::MalformedTail(delta));
        }
        let bit = received[i - 1];
        let mut j = i;
        while j > 0 && received[j - 1] == bit {
            j -= 1;
        }
        let copies = (i - j).div_ceil(rep).min(need - decoded.len());
        decoded.extend(std::iter::repeat_n(bit, copies));
        i = j;
    }
    decoded.reverse();

    let tail = repeat_bits(&decoded, rep);
    let splits: Vec<Split> = (0..=d)
        .filter_map(|d_p| {
            let tail_len = tail.len() - d_p;
            let prefix_len = received.len().checked_sub(tail_len)?;
            is_subsequence(&received[prefix_len..], &tail)
                .then(|| Split { systematic: received[..prefix_len].to_vec(), edits: d - d_p })
        })
        .collect();
    if splits.is_empty() {
        return Err(GcError::MalformedTail(delta));
    }
    Ok(ParityRecovery { parity_bits: decoded, splits })
}

/// Insertion-channel tail decoding. For each possible number `d_p` of
/// insertions in the tail, finds the parity string whose repetition embeds
/// in the last `c(δ+1)ℓ + d_p` received bits. The repetition code corrects
/// `δ` insertions, so at most one parity string can embed.
pub fn recover_parities_ins(received: &[u8], params: &GcParams) -> Result<ParityRecovery, GcError> {
    let n = params.n();
    let delta = params.delta();
    if received.len() < n || received.len() - n > delta {
        return Err(GcError::InputLengthOutOfRange { received: received.len(), n, delta });
    }
    let d = received.len() - n;
    let rep = delta + 1;
    let tail_len = params.redundancy();

    let mut parity: Option<Vec<u8>> = None;
    let mut splits = Vec::new();
    for d_p in 0..=d {
        let start = received.len() - tail_len - d_p;
        let Some(s) = embed_repetition(&received[start..], params.parity_bits_len(), rep, d_p)? else {
            continue;
        };
        match &parity {
            Some(p) if *p != s => return Err(GcError::MalformedTail(delta)),
            _ => parity = Some(s),
        }
        splits.push(Split { systematic: received[..start].to_vec(), edits: d - d_p });
    }
    match parity {
        Some(parity_bits) => Ok(ParityRecovery { parity_bits, splits }),
        None => Err(GcError::MalformedTail(delta)),
    }
}

/// Finds `s` with `|s| = len` such that each bit of `s` repeated `rep`
/// times is a subsequence of `region`, where `|region| = len·rep + slack`.
///
/// Returns `Ok(None)` when no such `s` exists and an error when more than
/// one does.
fn embed_repetition(region: &[u8], len: usize, rep: usize, slack: usize) -> Result<Option<Vec<u8>>, GcError> {
    debug_assert_eq!(region.len(), len * rep + slack);
    // After matching j parity bits the greedy position is j·rep + e, e <= slack.
    // feasible[j][e]: the remaining len - j bits can be embedded from there.
    let width = slack + 1;
    let mut feasible = vec![false; (len + 1) * width];
    feasible[len * width..].fill(true);
    let step = |j: usize, e: usize, b: u8| -> Option<usize> {
        let mut pos = j * rep + e;
        let mut matched = 0;
        while matched < rep {
            if pos >= region.len() {
                return None;
            }
            if region[pos] == b {
                matched += 1;
            }
            pos += 1;
        }
        let e2 = pos - (j + 1) * rep;
        (e2 <= slack).then_some(e2)
    };
    for j in (0..len).rev() {
        for e in 0..width {
            feasible[j * width + e] =
                [0u8, 1].iter().any(|&b| step(j, e, b).is_some_and(|e2| feasible[(j + 1) * width + e2]));
        }
    }
    if !feasible[0] {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(len);
    let mut e = 0;
    for j in 0..len {
        let options: Vec<(u8, usize)> = [0u8, 1]
            .iter()
            .filter_map(|&b| step(j, e, b).filter(|&e2| feasible[(j + 1) * width + e2]).map(|e2| (b, e2)))
            .collect();
        match options.as_slice() {
            [(b, e2)] => {
                out.push(*b);
                e = *e2;
            }
            _ => return Err(GcError::MalformedTail(slack)),
        }
    }
    Ok(Some(out))
}
