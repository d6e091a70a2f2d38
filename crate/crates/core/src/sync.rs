//! Two-party file synchronization over a noiseless link.
//!
//! Node A holds `file_a`; node B holds `file_b`, obtained from `file_a` by
//! deletions. B rebuilds `file_a` by working through a list of open segment
//! pairs. Every round A sends one message per open segment and B answers.
//! A segment is closed by a hash check (no deletions), a VT repair (one
//! deletion), a GC repair from out-of-band parities (up to `delta_cap`
//! deletions, GC mode only) or a raw transfer. Anything else is split at an
//! anchor taken from the middle of A's segment.
//!
//! Only payload bits are counted. Segment identifiers, the initial lengths
//! and message framing are treated as protocol overhead.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{digest, is_subsequence};
use crate::channel::{apply_edits, sample_plan, Scope};
use crate::gc::{decode_with_parities, log2_ceil, DecodeOutcome, EditKind, GcParams};
use crate::vt::{vt_correct, vt_syndrome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyncError {
    #[error("file B is not a subsequence of file A")]
    ModelViolation,
    #[error("invalid sync configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyncMode {
    Vt,
    Gc,
}

impl std::fmt::Display for SyncMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SyncMode::Vt => "vt",
            SyncMode::Gc => "gc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyncConfig {
    pub mode: SyncMode,
    pub anchor_len: usize,
    /// Largest gap repaired with GC parities.
    pub delta_cap: usize,
    /// Verification hash width, at most 64.
    pub hash_len: u32,
    /// Hash key.
    pub seed: u64,
}

impl SyncConfig {
    pub fn new(mode: SyncMode) -> Self {
        SyncConfig { mode, anchor_len: 25, delta_cap: 2, hash_len: 32, seed: 0 }
    }

    pub fn c_init(d: usize) -> usize {
        d + 1
    }

    pub fn c_max(d: usize) -> usize {
        2 * d + 3
    }

    fn validate(&self) -> Result<(), SyncError> {
        if self.anchor_len == 0 {
            return Err(SyncError::InvalidConfig("anchor_len must be at least 1".into()));
        }
        if self.mode == SyncMode::Gc && self.delta_cap < 2 {
            return Err(SyncError::InvalidConfig("delta_cap must be at least 2 in GC mode".into()));
        }
        if !(1..=64).contains(&self.hash_len) {
            return Err(SyncError::InvalidConfig("hash_len must lie in 1..=64".into()));
        }
        Ok(())
    }
}

/// Aligned segments of the two files. `d = |a| - |b|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPair {
    pub a_range: Range<usize>,
    pub b_range: Range<usize>,
}

impl SegmentPair {
    pub fn d(&self) -> usize {
        self.a_range.len() - self.b_range.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AToB,
    BToA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Hash,
    VtSyndrome,
    Parities,
    ExtraParity,
    Anchor,
    Raw,
    Ack,
    AnchorReply,
}

/// One itemized payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Message {
    pub round: usize,
    pub direction: Direction,
    pub kind: MessageKind,
    pub bits: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SyncStats {
    pub rounds: usize,
    pub bits_a_to_b: usize,
    pub bits_b_to_a: usize,
    pub success: bool,
    /// Raw-transfer bits, also included in `bits_a_to_b`.
    pub fallback_bits: usize,
    pub messages: Vec<Message>,
    /// Total length of A's open segments at the start of each round.
    pub open_bits: Vec<usize>,
    pub splits: usize,
    pub vt_repairs: usize,
    pub gc_repairs: usize,
    pub gc_retries: usize,
    pub raw_segments: usize,
}

impl SyncStats {
    pub fn total_bits(&self) -> usize {
        self.bits_a_to_b + self.bits_b_to_a
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnchorOutcome {
    /// Segments left and right of the matched anchor. The anchor bits
    /// themselves are known to B and belong to neither child.
    Split {
        left: SegmentPair,
        right: SegmentPair,
        anchor: Range<usize>,
    },
    NoSplit,
}

/// Matches the `min(anchor_len, |a|)` bits centred in A's segment against
/// B's segment at every offset the gap allows. Splits only on a unique
/// exact match.
pub fn anchor_split(a: &[u8], b: &[u8], pair: &SegmentPair, anchor_len: usize) -> AnchorOutcome {
    let a_seg = &a[pair.a_range.clone()];
    let b_seg = &b[pair.b_range.clone()];
    let d = pair.d();
    let len = anchor_len.min(a_seg.len());
    let off = (a_seg.len() - len) / 2;
    let anchor = &a_seg[off..off + len];
    let Some(last) = b_seg.len().checked_sub(len) else {
        return AnchorOutcome::NoSplit;
    };
    let lo = off.saturating_sub(d);
    let hi = off.min(last);
    let mut found = None;
    for o in lo..=hi {
        if &b_seg[o..o + len] == anchor {
            if found.is_some() {
                return AnchorOutcome::NoSplit;
            }
            found = Some(o);
        }
    }
    let Some(o) = found else {
        return AnchorOutcome::NoSplit;
    };
    let (a0, b0) = (pair.a_range.start, pair.b_range.start);
    AnchorOutcome::Split {
        left: SegmentPair { a_range: a0..a0 + off, b_range: b0..b0 + o },
        right: SegmentPair { a_range: a0 + off + len..pair.a_range.end, b_range: b0 + o + len..pair.b_range.end },
        anchor: a0 + off..a0 + off + len,
    }
}

enum Step {
    Fresh,
    GcRetry { params: GcParams },
    Raw,
}

struct Item {
    pair: SegmentPair,
    step: Step,
}

struct Session<'a> {
    a: &'a [u8],
    b: &'a [u8],
    config: SyncConfig,
    recon: Vec<Option<u8>>,
    stats: SyncStats,
    round: usize,
}

impl Session<'_> {
    fn send(&mut self, direction: Direction, kind: MessageKind, bits: usize) {
        match direction {
            Direction::AToB => self.stats.bits_a_to_b += bits,
            Direction::BToA => self.stats.bits_b_to_a += bits,
        }
        if kind == MessageKind::Raw {
            self.stats.fallback_bits += bits;
        }
        self.stats.messages.push(Message { round: self.round, direction, kind, bits });
    }

    fn hash(&self, bits: &[u8]) -> u64 {
        digest(bits, self.config.seed, self.config.hash_len)
    }

    fn fill(&mut self, range: Range<usize>, bits: &[u8]) {
        for (slot, &v) in self.recon[range].iter_mut().zip(bits) {
            *slot = Some(v);
        }
    }

    /// B accepts `candidate` for the segment if its hash matches A's.
    fn verify_and_close(&mut self, pair: &SegmentPair, candidate: Option<Vec<u8>>) -> Option<Item> {
        let ok = candidate.filter(|c| self.hash(c) == self.hash(&self.a[pair.a_range.clone()]));
        self.send(Direction::BToA, MessageKind::Ack, 1);
        match ok {
            Some(bits) => {
                self.fill(pair.a_range.clone(), &bits);
                None
            }
            None => Some(Item { pair: pair.clone(), step: Step::Raw }),
        }
    }

    fn gc_params(&self, pair: &SegmentPair) -> Option<GcParams> {
        let len = pair.a_range.len();
        let d = pair.d();
        let ell = log2_ceil(len).clamp(2, 16);
        GcParams::new(len, ell, SyncConfig::c_init(d), d).ok()
    }

    fn gc_attempt(&mut self, pair: &SegmentPair, params: GcParams) -> Option<Item> {
        let a_seg = &self.a[pair.a_range.clone()];
        let b_seg = &self.b[pair.b_range.clone()];
        let parities = params.parity_symbols(a_seg).expect("segment length matches k");
        let outcome = decode_with_parities(b_seg, &parities, &params, EditKind::Deletions)
            .expect("gap within the code's design limit");
        match outcome {
            DecodeOutcome::Success { message, .. } => {
                let next = self.verify_and_close(pair, Some(message));
                if next.is_none() {
                    self.stats.gc_repairs += 1;
                }
                next
            }
            DecodeOutcome::Failure { .. } => {
                self.send(Direction::BToA, MessageKind::Ack, 1);
                let c = params.c() + 1;
                match params.with_c(c) {
                    Ok(more) if c <= SyncConfig::c_max(pair.d()) => {
                        self.stats.gc_retries += 1;
                        Some(Item { pair: pair.clone(), step: Step::GcRetry { params: more } })
                    }
                    _ => Some(Item { pair: pair.clone(), step: Step::Raw }),
                }
            }
            DecodeOutcome::NoCandidate => {
                self.send(Direction::BToA, MessageKind::Ack, 1);
                Some(Item { pair: pair.clone(), step: Step::Raw })
            }
        }
    }

    /// One exchange for one segment. Returns the follow-up items.
    fn process(&mut self, item: Item) -> Vec<Item> {
        let pair = item.pair;
        let a_seg = &self.a[pair.a_range.clone()];
        let b_seg = &self.b[pair.b_range.clone()];
        let d = pair.d();
        let hash_len = self.config.hash_len as usize;
        match item.step {
            Step::Raw => {
                self.send(Direction::AToB, MessageKind::Raw, a_seg.len());
                self.stats.raw_segments += 1;
                let bits = a_seg.to_vec();
                self.fill(pair.a_range.clone(), &bits);
                Vec::new()
            }
            Step::GcRetry { params } => {
                self.send(Direction::AToB, MessageKind::ExtraParity, params.ell());
                self.gc_attempt(&pair, params).into_iter().collect()
            }
            Step::Fresh if a_seg.is_empty() => Vec::new(),
            Step::Fresh if d == 0 => {
                self.send(Direction::AToB, MessageKind::Hash, hash_len);
                let candidate = Some(b_seg.to_vec());
                self.verify_and_close(&pair, candidate).into_iter().collect()
            }
            Step::Fresh if d == 1 => {
                let syndrome = vt_syndrome(a_seg).expect("non-empty segment");
                self.send(Direction::AToB, MessageKind::VtSyndrome, syndrome.cost_bits());
                self.send(Direction::AToB, MessageKind::Hash, hash_len);
                let candidate = vt_correct(b_seg, syndrome).ok();
                let next = self.verify_and_close(&pair, candidate);
                if next.is_none() {
                    self.stats.vt_repairs += 1;
                }
                next.into_iter().collect()
            }
            Step::Fresh if self.config.mode == SyncMode::Gc && d <= self.config.delta_cap => {
                match self.gc_params(&pair) {
                    Some(params) => {
                        self.send(Direction::AToB, MessageKind::Parities, params.parity_bits_len());
                        self.send(Direction::AToB, MessageKind::Hash, hash_len);
                        self.gc_attempt(&pair, params).into_iter().collect()
                    }
                    None => self.process(Item { pair, step: Step::Raw }),
                }
            }
            Step::Fresh => {
                let len = self.config.anchor_len.min(a_seg.len());
                self.send(Direction::AToB, MessageKind::Anchor, len);
                match anchor_split(self.a, self.b, &pair, self.config.anchor_len) {
                    AnchorOutcome::Split { left, right, anchor } => {
                        self.send(Direction::BToA, MessageKind::AnchorReply, 1 + log2_ceil(d + 1));
                        self.stats.splits += 1;
                        let bits = self.a[anchor.clone()].to_vec();
                        self.fill(anchor, &bits);
                        vec![Item { pair: left, step: Step::Fresh }, Item { pair: right, step: Step::Fresh }]
                    }
                    AnchorOutcome::NoSplit => {
                        self.send(Direction::BToA, MessageKind::AnchorReply, 1);
                        vec![Item { pair, step: Step::Raw }]
                    }
                }
            }
        }
    }
}

/// Runs the protocol until every segment is closed. `success` reports
/// whether B's reconstruction equals `file_a`.
pub fn run_sync(file_a: &[u8], file_b: &[u8], config: &SyncConfig) -> Result<SyncStats, SyncError> {
    config.validate()?;
    if !is_subsequence(file_b, file_a) {
        return Err(SyncError::ModelViolation);
    }
    let mut session = Session {
        a: file_a,
        b: file_b,
        config: *config,
        recon: vec![None; file_a.len()],
        stats: SyncStats::default(),
        round: 0,
    };
    let mut open =
        vec![Item { pair: SegmentPair { a_range: 0..file_a.len(), b_range: 0..file_b.len() }, step: Step::Fresh }];
    while !open.is_empty() {
        session.round += 1;
        session.stats.open_bits.push(open.iter().map(|i| i.pair.a_range.len()).sum());
        let mut next = Vec::new();
        for item in open {
            next.extend(session.process(item));
        }
        // Empty children close without an exchange.
        next.retain(|i| !i.pair.a_range.is_empty());
        open = next;
    }
    let mut stats = session.stats;
    stats.rounds = session.round;
    stats.success = session.recon.iter().zip(file_a).all(|(r, &a)| *r == Some(a));
    Ok(stats)
}

/// One CSV/JSON row summarizing repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyncSummary {
    pub mode: SyncMode,
    pub file_bits: usize,
    pub d: usize,
    pub trials: u64,
    pub mean_rounds: f64,
    pub mean_cost_bits: f64,
    pub mean_fallback_bits: f64,
    pub success_rate: f64,
    pub seed: u64,
}

/// Random `file_bits`-bit file and a copy with `d` uniform deletions,
/// drawn from trial `trial`'s stream.
pub fn random_pair(file_bits: usize, d: usize, seed: u64, trial: u64) -> (Vec<u8>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let a: Vec<u8> = (0..file_bits).map(|_| rng.gen_range(0..=1u8)).collect();
    let plan = sample_plan(file_bits, file_bits, d.min(file_bits), EditKind::Deletions, Scope::WholeCodeword, &mut rng)
        .expect("d clamped to file length");
    let b = apply_edits(&a, &plan).expect("sampled plan is in bounds");
    (a, b)
}

/// Averages `trials` independent runs. Trial `t` uses the same file pair
/// in every mode.
pub fn run_trials(file_bits: usize, d: usize, trials: u64, config: &SyncConfig) -> Result<SyncSummary, SyncError> {
    config.validate()?;
    if trials == 0 {
        return Err(SyncError::InvalidConfig("at least one trial is required".into()));
    }
    let results: Vec<SyncStats> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (a, b) = random_pair(file_bits, d, config.seed, t);
            run_sync(&a, &b, config)
        })
        .collect::<Result<_, _>>()?;
    let n = trials as f64;
    let mean = |f: &dyn Fn(&SyncStats) -> usize| results.iter().map(|s| f(s) as f64).sum::<f64>() / n;
    Ok(SyncSummary {
        mode: config.mode,
        file_bits,
        d,
        trials,
        mean_rounds: mean(&|s| s.rounds),
        mean_cost_bits: mean(&|s| s.total_bits()),
        mean_fallback_bits: mean(&|s| s.fallback_bits),
        success_rate: results.iter().filter(|s| s.success).count() as f64 / n,
        seed: config.seed,
    })
}
