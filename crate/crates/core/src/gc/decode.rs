use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::cases::{for_each_case, CaseAssignment};
use super::tail::{recover_parities_del, recover_parities_ins};
use super::{DecodeOutcome, EditKind, GcError, GcParams};
use crate::bits::is_subsequence;
use crate::field::{FieldElement, FieldSpec};
use crate::mds::solve;

/// `true` iff `short` is a subsequence of `long`.
pub fn subsequence_check(short: &[u8], long: &[u8]) -> bool {
    is_subsequence(short, long)
}

/// Where block `b` starts in the systematic region when `shift` edits
/// precede it.
#[inline]
fn shifted_start(params: &GcParams, b: usize, shift: usize, kind: EditKind) -> Option<usize> {
    let nominal = b * params.ell();
    match kind {
        EditKind::Deletions => nominal.checked_sub(shift),
        EditKind::Insertions => Some(nominal + shift),
    }
}

#[inline]
fn chunk_len(params: &GcParams, b: usize, count: usize, kind: EditKind) -> Option<usize> {
    match kind {
        EditKind::Deletions => params.block_len(b).checked_sub(count),
        EditKind::Insertions => Some(params.block_len(b) + count),
    }
}

fn expected_region_len(params: &GcParams, d: usize, kind: EditKind) -> Option<usize> {
    match kind {
        EditKind::Deletions => params.k().checked_sub(d),
        EditKind::Insertions => Some(params.k() + d),
    }
}

/// A block after chunking: either read directly or erased with the bits
/// that were chunked in its place.
enum Chunked<'a> {
    Known(FieldElement),
    Erased(&'a [u8]),
}

fn chunk_region<'a>(
    region: &'a [u8],
    assignment: &CaseAssignment,
    params: &GcParams,
    kind: EditKind,
) -> Result<Vec<Chunked<'a>>, GcError> {
    let d = assignment.total();
    if assignment.counts.len() != params.k_prime() {
        return Err(GcError::LengthMismatch { expected: params.k_prime(), actual: assignment.counts.len() });
    }
    let expected = expected_region_len(params, d, kind)
        .ok_or_else(|| GcError::ParamViolation(format!("{d} deletions exceed k")))?;
    if region.len() != expected {
        return Err(GcError::LengthMismatch { expected, actual: region.len() });
    }
    let mut pos = 0;
    let mut out = Vec::with_capacity(params.k_prime());
    for (b, &cnt) in assignment.counts.iter().enumerate() {
        let len = chunk_len(params, b, cnt, kind)
            .ok_or_else(|| GcError::ParamViolation(format!("{cnt} deletions exceed the length of block {b}")))?;
        let bits = &region[pos..pos + len];
        pos += len;
        out.push(if cnt == 0 { Chunked::Known(params.block_symbol(bits)) } else { Chunked::Erased(bits) });
    }
    Ok(out)
}

/// The `q`-ary string obtained for one case: chunk, erase the blocks the
/// case touches, and fill them from the first `e` parities. No possibility
/// criteria are applied.
pub fn decode_case_symbols(
    region: &[u8],
    assignment: &CaseAssignment,
    parities: &[FieldElement],
    params: &GcParams,
    kind: EditKind,
) -> Result<Vec<FieldElement>, GcError> {
    let chunks = chunk_region(region, assignment, params, kind)?;
    let symbols: Vec<Option<FieldElement>> = chunks
        .iter()
        .map(|c| match c {
            Chunked::Known(s) => Some(*s),
            Chunked::Erased(_) => None,
        })
        .collect();
    Ok(params.generator().erasure_decode(&symbols, parities)?)
}

/// Checks one case. Returns the decoded `k`-bit message if the case is
/// possible, `None` if it is rejected.
///
/// This is the direct formulation; [`decode`] evaluates the same criteria
/// with incremental parity sums.
pub fn decode_case(
    region: &[u8],
    assignment: &CaseAssignment,
    parities: &[FieldElement],
    params: &GcParams,
    kind: EditKind,
) -> Result<Option<Vec<u8>>, GcError> {
    if parities.len() != params.c() {
        return Err(GcError::LengthMismatch { expected: params.c(), actual: parities.len() });
    }
    let chunks = chunk_region(region, assignment, params, kind)?;
    let decoded = decode_case_symbols(region, assignment, parities, params, kind)?;
    let e = chunks.iter().filter(|c| matches!(c, Chunked::Erased(_))).count();
    let generator = params.generator();
    for r in e + 1..=params.c() {
        if !generator.parity_check(&decoded, r, parities[r - 1])?.0 {
            return Ok(None);
        }
    }
    let ell = params.ell();
    let mut message = Vec::with_capacity(params.k());
    for (b, (chunk, sym)) in chunks.iter().zip(&decoded).enumerate() {
        let full = params.field().symbol_to_bits(*sym);
        let len = params.block_len(b);
        let (bits, padding) = full.split_at(len);
        if let Chunked::Erased(sub) = chunk {
            if padding.iter().any(|&p| p != 0) {
                return Ok(None);
            }
            let ok = match kind {
                EditKind::Deletions => subsequence_check(sub, bits),
                EditKind::Insertions => subsequence_check(bits, sub),
            };
            if !ok {
                return Ok(None);
            }
        }
        debug_assert!(len <= ell);
        message.extend_from_slice(bits);
    }
    Ok(Some(message))
}

/// Accepted messages pooled across splits and cases.
#[derive(Default)]
struct Candidates {
    found: BTreeMap<Vec<u8>, (usize, CaseAssignment)>,
    order: usize,
}

impl Candidates {
    fn insert(&mut self, message: Vec<u8>, witness: impl FnOnce() -> CaseAssignment) {
        let order = self.order;
        self.order += 1;
        self.found.entry(message).or_insert_with(|| (order, witness()));
    }

    fn into_outcome(self) -> DecodeOutcome {
        match self.found.len() {
            0 => DecodeOutcome::NoCandidate,
            1 => {
                let (message, (_, witness)) = self.found.into_iter().next().unwrap();
                DecodeOutcome::Success { message, witness }
            }
            _ => DecodeOutcome::Failure { candidates: self.found.into_keys().collect() },
        }
    }
}

/// Upper bound on erased blocks handled by the fixed-size solver.
const MAX_ERASED: usize = 16;

/// Evaluates every case for one systematic region using prefix sums of the
/// parity contributions for each possible shift.
struct CaseSweep<'a> {
    params: &'a GcParams,
    field: &'static FieldSpec,
    region: &'a [u8],
    parities: &'a [FieldElement],
    kind: EditKind,
    d: usize,
    // prefix[(shift * c + r) * (k' + 1) + j] = Σ_{j' < j} sym(shift, j')·α^{j' r}
    prefix: Vec<FieldElement>,
}

impl<'a> CaseSweep<'a> {
    fn new(params: &'a GcParams, region: &'a [u8], parities: &'a [FieldElement], kind: EditKind, d: usize) -> Self {
        let field = params.field();
        let kp = params.k_prime();
        let c = params.c();
        let mut prefix = vec![FieldElement::ZERO; (d + 1) * c * (kp + 1)];
        for shift in 0..=d {
            for j in 0..kp {
                let len = params.block_len(j);
                let sym = shifted_start(params, j, shift, kind)
                    .filter(|&s| s + len <= region.len())
                    .map_or(FieldElement::ZERO, |s| params.block_symbol(&region[s..s + len]));
                for r in 0..c {
                    let base = (shift * c + r) * (kp + 1);
                    let term = field.mul(sym, field.alpha_pow(j * r));
                    prefix[base + j + 1] = field.add(prefix[base + j], term);
                }
            }
        }
        CaseSweep { params, field, region, parities, kind, d, prefix }
    }

    #[inline]
    fn range_sum(&self, shift: usize, r: usize, from: usize, to: usize) -> FieldElement {
        let base = (shift * self.params.c() + r) * (self.params.k_prime() + 1);
        self.field.add(self.prefix[base + to], self.prefix[base + from])
    }

    /// Runs every case and adds accepted messages to `out`.
    fn run(&self, out: &mut Candidates) {
        let caps = match self.kind {
            EditKind::Deletions => Some(self.params.block_caps()),
            EditKind::Insertions => None,
        };
        let _ = for_each_case(self.params.k_prime(), self.d, caps.as_deref(), |erased| {
            if let Some(msg) = self.try_case(erased) {
                out.insert(msg, || CaseAssignment::from_sparse(self.params.k_prime(), erased));
            }
            ControlFlow::<()>::Continue(())
        });
    }

    fn try_case(&self, erased: &[(usize, usize)]) -> Option<Vec<u8>> {
        let f = self.field;
        let c = self.params.c();
        let kp = self.params.k_prime();
        let e = erased.len();
        assert!(e <= MAX_ERASED, "at most {MAX_ERASED} erased blocks supported");

        // Known contribution to each parity, segment by segment.
        let mut known = [FieldElement::ZERO; super::MAX_PARITIES];
        let mut shifts = [0usize; MAX_ERASED];
        {
            let mut shift = 0;
            let mut from = 0;
            for (t, &(b, cnt)) in erased.iter().enumerate() {
                for (r, k) in known.iter_mut().enumerate().take(c) {
                    *k = f.add(*k, self.range_sum(shift, r, from, b));
                }
                shifts[t] = shift;
                shift += cnt;
                from = b + 1;
            }
            for (r, k) in known.iter_mut().enumerate().take(c) {
                *k = f.add(*k, self.range_sum(shift, r, from, kp));
            }
        }

        // Solve Σ_t x_t α^{b_t r} = p_{r+1} + known_r for r < e.
        let mut x = [FieldElement::ZERO; MAX_ERASED];
        match e {
            0 => {}
            1 => x[0] = f.add(self.parities[0], known[0]),
            _ => {
                let matrix: Vec<Vec<FieldElement>> =
                    (0..e).map(|r| erased.iter().map(|&(b, _)| f.alpha_pow(b * r)).collect()).collect();
                let rhs: Vec<FieldElement> = (0..e).map(|r| f.add(self.parities[r], known[r])).collect();
                let sol = solve(f, matrix, rhs).expect("distinct Vandermonde nodes");
                x[..e].copy_from_slice(&sol);
            }
        }

        // Criterion 1: the unused parities agree.
        for (r, &known_r) in known.iter().enumerate().take(c).skip(e) {
            let mut v = known_r;
            for (t, &(b, _)) in erased.iter().enumerate() {
                v = f.add(v, f.mul(x[t], f.alpha_pow(b * r)));
            }
            if v != self.parities[r] {
                return None;
            }
        }

        // Criterion 2: each refilled block agrees with the bits chunked for it.
        let ell = self.params.ell();
        let mut block_bits = [0u8; 16];
        for (t, &(b, cnt)) in erased.iter().enumerate() {
            let len = self.params.block_len(b);
            let pad = ell - len;
            if x[t].0 & ((1u16 << pad) - 1) != 0 {
                return None;
            }
            crate::field::write_bits(FieldElement(x[t].0 >> pad), &mut block_bits[..len]);
            let start = shifted_start(self.params, b, shifts[t], self.kind)?;
            let sub_len = chunk_len(self.params, b, cnt, self.kind)?;
            let sub = &self.region[start..start + sub_len];
            let ok = match self.kind {
                EditKind::Deletions => is_subsequence(sub, &block_bits[..len]),
                EditKind::Insertions => is_subsequence(&block_bits[..len], sub),
            };
            if !ok {
                return None;
            }
        }

        Some(self.assemble(erased, &shifts, &x))
    }

    fn assemble(&self, erased: &[(usize, usize)], shifts: &[usize], x: &[FieldElement]) -> Vec<u8> {
        let p = self.params;
        let mut message = Vec::with_capacity(p.k());
        let mut shift = 0;
        let mut next = 0;
        for b in 0..p.k_prime() {
            let len = p.block_len(b);
            if next < erased.len() && erased[next].0 == b {
                let pad = p.ell() - len;
                let mut bits = [0u8; 16];
                crate::field::write_bits(FieldElement(x[next].0 >> pad), &mut bits[..len]);
                message.extend_from_slice(&bits[..len]);
                shift = shifts[next] + erased[next].1;
                next += 1;
            } else {
                let start = shifted_start(p, b, shift, self.kind).expect("valid case");
                message.extend_from_slice(&self.region[start..start + len]);
            }
        }
        message
    }
}

/// Decodes a systematic region whose parity symbols are already known
/// exactly (for instance sent over a separate noiseless link). The number
/// of edits is inferred from the region length.
pub fn decode_with_parities(
    region: &[u8],
    parities: &[FieldElement],
    params: &GcParams,
    kind: EditKind,
) -> Result<DecodeOutcome, GcError> {
    if parities.len() != params.c() {
        return Err(GcError::LengthMismatch { expected: params.c(), actual: parities.len() });
    }
    let k = params.k();
    let d = match kind {
        EditKind::Deletions => k.checked_sub(region.len()),
        EditKind::Insertions => region.len().checked_sub(k),
    };
    let d = match d {
        Some(d) if d <= params.delta() => d,
        _ => return Err(GcError::InputLengthOutOfRange { received: region.len(), n: k, delta: params.delta() }),
    };
    let mut found = Candidates::default();
    CaseSweep::new(params, region, parities, kind, d).run(&mut found);
    Ok(found.into_outcome())
}

/// Full GC decode of a received string under the given channel.
pub fn decode(received: &[u8], params: &GcParams, kind: EditKind) -> Result<DecodeOutcome, GcError> {
    let recovery = match kind {
        EditKind::Deletions => recover_parities_del(received, params)?,
        EditKind::Insertions => recover_parities_ins(received, params)?,
    };
    let parities = params.bits_to_symbols(&recovery.parity_bits);
    let mut found = Candidates::default();
    for split in &recovery.splits {
        CaseSweep::new(params, &split.systematic, &parities, kind, split.edits).run(&mut found);
    }
    Ok(found.into_outcome())
}
