//! Edit channels: uniformly placed deletions or insertions.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gc::EditKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("edit position {position} out of bounds for length {len}")]
    OutOfBounds { position: usize, len: usize },
    #[error("cannot place {d} edits among {available} positions")]
    TooManyEdits { d: usize, available: usize },
    #[error("edit positions must be strictly increasing")]
    Unsorted,
    #[error("insertion plan needs one bit per position")]
    BitsMismatch,
}

/// Where edits may land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    WholeCodeword,
    SystematicOnly,
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scope::WholeCodeword => "whole_codeword",
            Scope::SystematicOnly => "systematic_only",
        })
    }
}

/// A concrete set of edits against the original string.
///
/// Positions are 1-indexed into the original string and strictly
/// increasing. For deletions, position `p` removes bit `p`. For insertions,
/// position `p` in `1..=len+1` puts `bits[i]` immediately before original
/// bit `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditPlan {
    pub kind: EditKind,
    pub positions: Vec<usize>,
    pub bits: Vec<u8>,
    pub scope: Scope,
}

impl EditPlan {
    pub fn deletions(positions: Vec<usize>) -> Self {
        EditPlan { kind: EditKind::Deletions, positions, bits: Vec::new(), scope: Scope::WholeCodeword }
    }

    pub fn insertions(positions: Vec<usize>, bits: Vec<u8>) -> Self {
        EditPlan { kind: EditKind::Insertions, positions, bits, scope: Scope::WholeCodeword }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

pub fn apply_edits(x: &[u8], plan: &EditPlan) -> Result<Vec<u8>, ChannelError> {
    if plan.positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ChannelError::Unsorted);
    }
    let max_pos = match plan.kind {
        EditKind::Deletions => x.len(),
        EditKind::Insertions => x.len() + 1,
    };
    if let Some(&p) = plan.positions.iter().find(|&&p| p == 0 || p > max_pos) {
        return Err(ChannelError::OutOfBounds { position: p, len: x.len() });
    }
    match plan.kind {
        EditKind::Deletions => {
            let mut out = Vec::with_capacity(x.len() - plan.len());
            let mut next = plan.positions.iter().peekable();
            for (i, &b) in x.iter().enumerate() {
                if next.peek() == Some(&&(i + 1)) {
                    next.next();
                } else {
                    out.push(b);
                }
            }
            Ok(out)
        }
        EditKind::Insertions => {
            if plan.bits.len() != plan.len() {
                return Err(ChannelError::BitsMismatch);
            }
            let mut out = Vec::with_capacity(x.len() + plan.len());
            let mut prev = 0;
            for (&p, &b) in plan.positions.iter().zip(&plan.bits) {
                out.extend_from_slice(&x[prev..p - 1]);
                out.push(b);
                prev = p - 1;
            }
            out.extend_from_slice(&x[prev..]);
            Ok(out)
        }
    }
}

/// Draws `d` distinct positions uniformly, restricted to the first
/// `systematic_len` bits under [`Scope::SystematicOnly`]. Inserted bits are
/// fair coin flips.
pub fn sample_plan<R: Rng + ?Sized>(
    length: usize,
    systematic_len: usize,
    d: usize,
    kind: EditKind,
    scope: Scope,
    rng: &mut R,
) -> Result<EditPlan, ChannelError> {
    let available = match (kind, scope) {
        (EditKind::Deletions, Scope::WholeCodeword) => length,
        (EditKind::Insertions, Scope::WholeCodeword) => length + 1,
        // Insertions before bit 1..=k stay inside the message region.
        (_, Scope::SystematicOnly) => systematic_len.min(length),
    };
    if d > available {
        return Err(ChannelError::TooManyEdits { d, available });
    }
    let mut positions: Vec<usize> = index::sample(rng, available, d).into_iter().map(|i| i + 1).collect();
    positions.sort_unstable();
    let plan = match kind {
        EditKind::Deletions => EditPlan::deletions(positions),
        EditKind::Insertions => {
            let bits = (0..d).map(|_| rng.gen_range(0..=1u8)).collect();
            EditPlan::insertions(positions, bits)
        }
    };
    Ok(EditPlan { scope, ..plan })
}

pub fn sample_plan_seeded(
    length: usize,
    systematic_len: usize,
    d: usize,
    kind: EditKind,
    scope: Scope,
    seed: u64,
) -> Result<EditPlan, ChannelError> {
    sample_plan(length, systematic_len, d, kind, scope, &mut ChaCha8Rng::seed_from_u64(seed))
}
