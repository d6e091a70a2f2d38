use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gc_core::bits::{parse_bits, to_bit_file};
use gc_core::channel::{apply_edits, sample_plan_seeded, Scope};
use gc_core::experiments::{estimate_pf, sweep, PfEstimate, SweepSpec};
use gc_core::gc::{decode, encode, log2_ceil, DecodeOutcome, EditKind, GcParams};
use gc_core::sync::{run_trials, SyncConfig, SyncMode};

#[derive(Parser)]
#[command(name = "gccodes", version, about = "Guess-and-check codes: encode, decode, simulate, sync")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a k-bit message file.
    Encode(CodeArgs),
    /// Decode a received bit file. Exit 0 success, 2 failure, 3 no candidate.
    Decode(DecodeArgs),
    /// Apply randomly placed edits to a bit file.
    Corrupt(CorruptArgs),
    /// Monte-Carlo failure estimate at one parameter point.
    Simulate(SimulateArgs),
    /// Failure estimates over a grid of chunk lengths and parity counts.
    Sweep(SweepArgs),
    /// Simulate the two-party file sync.
    Sync(SyncArgs),
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    k: usize,
    /// Chunk length; defaults to ceil(log2 k).
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    delta: usize,
}

impl Params {
    fn build(&self) -> Result<GcParams> {
        let ell = self.ell.unwrap_or_else(|| log2_ceil(self.k).max(2));
        Ok(GcParams::new(self.k, ell, self.c, self.delta)?)
    }
}

#[derive(Args)]
struct Io {
    /// Input bit file; stdin when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value_t = Kind::Deletions)]
    mode: Kind,
}

#[derive(Args)]
struct CorruptArgs {
    #[command(flatten)]
    io: Io,
    /// Number of edits.
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value_t = Kind::Deletions)]
    mode: Kind,
    #[arg(long, value_enum, default_value_t = ScopeArg::Whole)]
    scope: ScopeArg,
    /// Message length, required for the systematic scope.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Report {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report wall_time_ms as 0 for byte-identical reruns.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, value_enum, default_value_t = Kind::Deletions)]
    mode: Kind,
    #[arg(long, value_enum, default_value_t = ScopeArg::Whole)]
    scope: ScopeArg,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    report: Report,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    delta: usize,
    /// Comma-separated chunk lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    ell: Vec<usize>,
    /// Comma-separated parity counts.
    #[arg(long, value_delimiter = ',', required = true)]
    c: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Kind::Deletions)]
    mode: Kind,
    #[arg(long, value_enum, default_value_t = ScopeArg::Whole)]
    scope: ScopeArg,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    report: Report,
}

#[derive(Args)]
struct SyncArgs {
    #[arg(long, value_enum, default_value_t = SyncModeArg::Both)]
    mode: SyncModeArg,
    #[arg(long, default_value_t = 100_000)]
    file_bits: usize,
    /// Comma-separated deletion counts.
    #[arg(long, value_delimiter = ',', default_value = "25,50")]
    deletions: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    anchor_len: usize,
    /// Largest gap repaired with GC parities.
    #[arg(long, default_value_t = 2)]
    delta: usize,
    #[arg(long, default_value_t = 32)]
    hash_len: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Deletions,
    Insertions,
}

impl From<Kind> for EditKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Deletions => EditKind::Deletions,
            Kind::Insertions => EditKind::Insertions,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Whole,
    Systematic,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Whole => Scope::WholeCodeword,
            ScopeArg::Systematic => Scope::SystematicOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SyncModeArg {
    Vt,
    Gc,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn read_bits(path: &Option<PathBuf>) -> Result<Vec<u8>> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(parse_bits(&text)?)
}

fn write_out(path: &Option<PathBuf>, data: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(data)?),
    }
}

fn render<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            Ok(w.into_inner()?)
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

fn report(estimates: &[PfEstimate], r: &Report) -> Result<()> {
    let rows: Vec<_> = estimates
        .iter()
        .map(|e| {
            let mut rec = e.record();
            if r.no_timing {
                rec.wall_time_ms = 0;
            }
            rec
        })
        .collect();
    for e in estimates {
        if e.wrong_successes > 0 {
            eprintln!("warning: {} wrong decodes at k={} c={}", e.wrong_successes, e.params.k(), e.params.c());
        }
    }
    write_out(&r.out, &render(&rows, r.format)?)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Encode(a) => {
            let params = a.params.build()?;
            let message = read_bits(&a.io.input)?;
            let x = encode(&message, &params)?;
            write_out(&a.io.out, to_bit_file(&x).as_bytes())?;
            Ok(0)
        }
        Command::Decode(a) => {
            let params = a.params.build()?;
            let received = read_bits(&a.io.input)?;
            match decode(&received, &params, a.mode.into())? {
                DecodeOutcome::Success { message, .. } => {
                    write_out(&a.io.out, to_bit_file(&message).as_bytes())?;
                    Ok(0)
                }
                DecodeOutcome::Failure { candidates } => {
                    let mut text = format!("{}\n", candidates.len());
                    for c in &candidates {
                        text.push_str(&to_bit_file(c));
                    }
                    write_out(&a.io.out, text.as_bytes())?;
                    eprintln!("failure to decode: {} candidate messages", candidates.len());
                    Ok(2)
                }
                DecodeOutcome::NoCandidate => {
                    eprintln!("no candidate message is consistent with the input");
                    Ok(3)
                }
            }
        }
        Command::Corrupt(a) => {
            let x = read_bits(&a.io.input)?;
            let scope: Scope = a.scope.into();
            let systematic = match (scope, a.k) {
                (Scope::SystematicOnly, None) => bail!("--scope systematic needs --k"),
                (_, k) => k.unwrap_or(x.len()),
            };
            let plan = sample_plan_seeded(x.len(), systematic, a.d, a.mode.into(), scope, a.seed)?;
            let y = apply_edits(&x, &plan)?;
            eprintln!("{}", serde_json::to_string(&plan)?);
            write_out(&a.io.out, to_bit_file(&y).as_bytes())?;
            Ok(0)
        }
        Command::Simulate(a) => {
            let params = a.params.build()?;
            let e = estimate_pf(&params, a.mode.into(), a.scope.into(), a.trials, a.seed)?;
            report(&[e], &a.report)?;
            Ok(0)
        }
        Command::Sweep(a) => {
            let spec = SweepSpec {
                k: a.k,
                delta: a.delta,
                ells: a.ell,
                cs: a.c,
                kind: a.mode.into(),
                scope: a.scope.into(),
                trials: a.trials,
                seed: a.seed,
            };
            report(&sweep(&spec)?, &a.report)?;
            Ok(0)
        }
        Command::Sync(a) => {
            let modes: &[SyncMode] = match a.mode {
                SyncModeArg::Vt => &[SyncMode::Vt],
                SyncModeArg::Gc => &[SyncMode::Gc],
                SyncModeArg::Both => &[SyncMode::Vt, SyncMode::Gc],
            };
            let mut rows = Vec::new();
            for &d in &a.deletions {
                for &mode in modes {
                    let config = SyncConfig {
                        mode,
                        anchor_len: a.anchor_len,
                        delta_cap: a.delta,
                        hash_len: a.hash_len,
                        seed: a.seed,
                    };
                    rows.push(run_trials(a.file_bits, d, a.trials, &config)?);
                }
            }
            write_out(&a.out, &render(&rows, a.format)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
