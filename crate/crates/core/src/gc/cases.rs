use std::ops::ControlFlow;

/// One guess: the number of edits assumed to fall in each block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseAssignment {
    pub counts: Vec<usize>,
}

impl CaseAssignment {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Blocks assumed to be hit, with their edit counts.
    pub fn erased(&self) -> Vec<(usize, usize)> {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c)).collect()
    }

    pub(crate) fn from_sparse(k_prime: usize, erased: &[(usize, usize)]) -> Self {
        let mut counts = vec![0; k_prime];
        for &(b, c) in erased {
            counts[b] = c;
        }
        CaseAssignment { counts }
    }
}

/// All ways of spreading `d` edits over `k_prime` blocks with at most
/// `caps[i]` in block `i` (pass `None` for no caps).
///
/// Order is lexicographic with larger counts first, so the first case puts
/// every edit in block 0 and, for `d = 1`, case `i` hits block `i`.
pub fn enumerate_cases(k_prime: usize, d: usize, caps: Option<&[usize]>) -> Vec<CaseAssignment> {
    let mut out = Vec::new();
    let _ = for_each_case(k_prime, d, caps, |erased| {
        out.push(CaseAssignment::from_sparse(k_prime, erased));
        ControlFlow::<()>::Continue(())
    });
    out
}

/// Visits every case in [`enumerate_cases`] order as a sparse list of
/// `(block, count)` pairs with strictly increasing blocks.
pub(crate) fn for_each_case<B>(
    k_prime: usize,
    d: usize,
    caps: Option<&[usize]>,
    mut visit: impl FnMut(&[(usize, usize)]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    // capacity_from[i] = Σ_{j >= i} cap_j, for pruning dead branches.
    let cap = |i: usize| caps.map_or(d, |c| c[i].min(d));
    let mut capacity_from = vec![0usize; k_prime + 1];
    for i in (0..k_prime).rev() {
        capacity_from[i] = capacity_from[i + 1].saturating_add(cap(i));
    }
    if capacity_from[0] < d {
        return ControlFlow::Continue(());
    }
    let mut stack = Vec::with_capacity(d);
    recurse(0, d, k_prime, &cap, &capacity_from, &mut stack, &mut visit)
}

fn recurse<B>(
    start: usize,
    rem: usize,
    k_prime: usize,
    cap: &impl Fn(usize) -> usize,
    capacity_from: &[usize],
    stack: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if rem == 0 {
        return visit(stack);
    }
    for b in start..k_prime {
        if capacity_from[b] < rem {
            break;
        }
        for cnt in (1..=cap(b).min(rem)).rev() {
            if capacity_from[b + 1] < rem - cnt {
                break;
            }
            stack.push((b, cnt));
            recurse(b + 1, rem - cnt, k_prime, cap, capacity_from, stack, visit)?;
            stack.pop();
        }
    }
    ControlFlow::Continue(())
}
