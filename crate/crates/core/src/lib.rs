//! Guess-and-check (GC) codes: systematic binary codes that correct a small
//! number of deletions or insertions with high probability. Also provides
//! the VT single-deletion code, edit channels, Monte-Carlo experiments and a
//! two-party file-sync simulator.

pub mod bits;
pub mod channel;
pub mod experiments;
pub mod field;
pub mod gc;
pub mod mds;
pub mod sync;
pub mod vt;

pub use field::{FieldElement, FieldSpec};
pub use gc::{decode, encode, DecodeOutcome, EditKind, GcError, GcParams};
pub use mds::GeneratorSpec;
