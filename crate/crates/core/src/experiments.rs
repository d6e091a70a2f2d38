//! Monte-Carlo failure estimates, the analytical failure bound, parameter
//! sweeps and the exhaustive preimage census.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::channel::{apply_edits, sample_plan, ChannelError, Scope};
use crate::field::FieldElement;
use crate::gc::{decode, decode_case_symbols, encode, enumerate_cases, DecodeOutcome, EditKind, GcError, GcParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("{d} edits exceed the code's design limit {delta}")]
    TooManyEdits { d: usize, delta: usize },
    #[error("census position {position} outside the message of length {k}")]
    PositionOutOfRange { position: usize, k: usize },
    #[error("case index {index} outside 1..={count}")]
    CaseOutOfRange { index: usize, count: usize },
    #[error("census needs k <= 24, got {0}")]
    CensusTooLarge(usize),
    #[error(transparent)]
    Gc(#[from] GcError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Aggregate of one Monte-Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct PfEstimate {
    pub params: GcParams,
    pub kind: EditKind,
    pub scope: Scope,
    /// Edits applied per trial.
    pub edits: usize,
    pub trials: u64,
    /// Failure and NoCandidate outcomes together.
    pub failures: u64,
    pub no_candidates: u64,
    /// Successes that returned the wrong message. Must stay zero.
    pub wrong_successes: u64,
    pub pf_hat: f64,
    pub seed: u64,
    pub wall_time_ms: u64,
}

/// Flat CSV/JSON record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PfRecord {
    pub k: usize,
    pub ell: usize,
    pub c: usize,
    pub delta: usize,
    pub scope: Scope,
    pub trials: u64,
    pub failures: u64,
    pub pf_hat: f64,
    pub bound: f64,
    pub redundancy: usize,
    pub rate: f64,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl PfEstimate {
    /// Binomial standard error of `pf_hat`.
    pub fn std_err(&self) -> f64 {
        (self.pf_hat * (1.0 - self.pf_hat) / self.trials as f64).sqrt()
    }

    pub fn record(&self) -> PfRecord {
        PfRecord {
            k: self.params.k(),
            ell: self.params.ell(),
            c: self.params.c(),
            delta: self.params.delta(),
            scope: self.scope,
            trials: self.trials,
            failures: self.failures,
            pf_hat: self.pf_hat,
            bound: theoretical_bound(&self.params),
            redundancy: self.params.redundancy(),
            rate: self.params.rate(),
            seed: self.seed,
            wall_time_ms: self.wall_time_ms,
        }
    }
}

/// Per-trial generator: one independent stream per trial index, so results
/// do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Default, Clone, Copy)]
struct Tally {
    failures: u64,
    no_candidates: u64,
    wrong: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            failures: self.failures + o.failures,
            no_candidates: self.no_candidates + o.no_candidates,
            wrong: self.wrong + o.wrong,
        }
    }
}

fn run_trial(
    params: &GcParams,
    kind: EditKind,
    scope: Scope,
    d: usize,
    seed: u64,
    trial: u64,
) -> Result<Tally, ExperimentError> {
    let mut rng = trial_rng(seed, trial);
    let message: Vec<u8> = (0..params.k()).map(|_| rng.gen_range(0..=1u8)).collect();
    let codeword = encode(&message, params)?;
    let plan = sample_plan(codeword.len(), params.k(), d, kind, scope, &mut rng)?;
    let received = apply_edits(&codeword, &plan)?;
    Ok(match decode(&received, params, kind)? {
        DecodeOutcome::Success { message: m, .. } => Tally { wrong: (m != message) as u64, ..Tally::default() },
        DecodeOutcome::Failure { .. } => Tally { failures: 1, ..Tally::default() },
        DecodeOutcome::NoCandidate => Tally { failures: 1, no_candidates: 1, ..Tally::default() },
    })
}

/// Encodes uniform messages, applies `δ` uniform edits and decodes.
pub fn estimate_pf(
    params: &GcParams,
    kind: EditKind,
    scope: Scope,
    trials: u64,
    seed: u64,
) -> Result<PfEstimate, ExperimentError> {
    estimate_pf_with_edits(params, kind, scope, params.delta(), trials, seed)
}

/// As [`estimate_pf`] with `d <= δ` edits per trial.
pub fn estimate_pf_with_edits(
    params: &GcParams,
    kind: EditKind,
    scope: Scope,
    d: usize,
    trials: u64,
    seed: u64,
) -> Result<PfEstimate, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    if d > params.delta() {
        return Err(ExperimentError::TooManyEdits { d, delta: params.delta() });
    }
    let started = Instant::now();
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(params, kind, scope, d, seed, t))
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;
    Ok(PfEstimate {
        params: *params,
        kind,
        scope,
        edits: d,
        trials,
        failures: tally.failures,
        no_candidates: tally.no_candidates,
        wrong_successes: tally.wrong,
        pf_hat: tally.failures as f64 / trials as f64,
        seed,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(k'+δ-1, δ) · 2^(δ²) / 2^(ℓ(c-δ))`: number of cases times the
/// per-case collision bound over the residual parity space.
pub fn theoretical_bound(params: &GcParams) -> f64 {
    let delta = params.delta() as u64;
    let cases = binomial(params.k_prime() as u64 + delta - 1, delta);
    let exponent = (delta * delta) as f64 - (params.ell() * (params.c() - params.delta())) as f64;
    cases * exponent.exp2()
}

/// A grid of `(ℓ, c)` points at fixed `k` and `δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub k: usize,
    pub delta: usize,
    pub ells: Vec<usize>,
    pub cs: Vec<usize>,
    pub kind: EditKind,
    pub scope: Scope,
    pub trials: u64,
    pub seed: u64,
}

/// One estimate per grid point, ordered by `ℓ` then `c`. Every point uses
/// the same seed, so trial `t` draws the same message everywhere.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<PfEstimate>, ExperimentError> {
    let mut grid = Vec::new();
    for &ell in &spec.ells {
        for &c in &spec.cs {
            grid.push(GcParams::new(spec.k, ell, c, spec.delta)?);
        }
    }
    grid.iter().map(|p| estimate_pf(p, spec.kind, spec.scope, spec.trials, spec.seed)).collect()
}

/// Result of an exhaustive census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    /// Largest number of messages sharing a (first parity, decoded string)
    /// pair.
    pub max_group: usize,
    /// Members of the largest group (ties go to the group with the
    /// smallest member), ascending as integers.
    pub largest: Vec<Vec<u8>>,
    pub groups: usize,
}

/// Over all `2^k` messages, deletes bit `position` (1-indexed), decodes the
/// systematic region under case `case_index` (1-indexed in
/// [`enumerate_cases`] order for one deletion) using only the first
/// parity, and groups messages by (first parity, decoded string).
pub fn gamma_census(params: &GcParams, position: usize, case_index: usize) -> Result<CensusResult, ExperimentError> {
    let k = params.k();
    if k > 24 {
        return Err(ExperimentError::CensusTooLarge(k));
    }
    if position == 0 || position > k {
        return Err(ExperimentError::PositionOutOfRange { position, k });
    }
    let cases = enumerate_cases(params.k_prime(), 1, Some(&params.block_caps()));
    if case_index == 0 || case_index > cases.len() {
        return Err(ExperimentError::CaseOutOfRange { index: case_index, count: cases.len() });
    }
    let case = &cases[case_index - 1];
    let single = params.with_c(params.delta() + 1)?;

    let mut groups: HashMap<(FieldElement, Vec<FieldElement>), Vec<u32>> = HashMap::new();
    for v in 0u32..(1 << k) {
        let message: Vec<u8> = (0..k).map(|i| (v >> (k - 1 - i) & 1) as u8).collect();
        let parities = single.parity_symbols(&message)?;
        let mut region = message;
        region.remove(position - 1);
        let y = decode_case_symbols(&region, case, &parities, &single, EditKind::Deletions)?;
        groups.entry((parities[0], y)).or_default().push(v);
    }
    let largest =
        groups.values().max_by(|x, y| x.len().cmp(&y.len()).then(y[0].cmp(&x[0]))).cloned().unwrap_or_default();
    Ok(CensusResult {
        max_group: largest.len(),
        largest: largest.iter().map(|&v| (0..k).map(|i| (v >> (k - 1 - i) & 1) as u8).collect()).collect(),
        groups: groups.len(),
    })
}
