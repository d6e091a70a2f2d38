use gc_core::bits::{digest, format_bits, is_subsequence, parse_bits};
use gc_core::channel::{apply_edits, sample_plan_seeded, EditPlan, Scope};
use gc_core::field::{FieldElement, FieldSpec};
use gc_core::gc::{decode, encode, enumerate_cases, DecodeOutcome, EditKind, GcParams};
use gc_core::sync::{random_pair, run_sync, Direction, SyncConfig, SyncMode};
use gc_core::vt::{vt_correct, vt_syndrome};
use proptest::prelude::*;

fn small_params() -> impl Strategy<Value = GcParams> {
    (8usize..=80, 3usize..=7, 1usize..=2, 1usize..=2)
        .prop_filter_map("valid parameters", |(k, ell, extra, delta)| GcParams::new(k, ell, delta + extra, delta).ok())
}

fn message_for(params: GcParams) -> impl Strategy<Value = (GcParams, Vec<u8>)> {
    proptest::collection::vec(0u8..=1, params.k()).prop_map(move |m| (params, m))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn codeword_is_message_then_repeated_parities((p, u) in small_params().prop_flat_map(message_for)) {
        let x = encode(&u, &p).unwrap();
        prop_assert_eq!(x.len(), p.n());
        prop_assert_eq!(&x[..p.k()], &u[..]);
        let parity = p.parity_bits(&u).unwrap();
        let rep = p.delta() + 1;
        for (i, &b) in parity.iter().enumerate() {
            prop_assert!(x[p.k() + i * rep..p.k() + (i + 1) * rep].iter().all(|&y| y == b));
        }
    }

    #[test]
    fn clean_codeword_decodes((p, u) in small_params().prop_flat_map(message_for)) {
        let x = encode(&u, &p).unwrap();
        for kind in [EditKind::Deletions, EditKind::Insertions] {
            match decode(&x, &p, kind).unwrap() {
                DecodeOutcome::Success { message, witness } => {
                    prop_assert_eq!(message, u.clone());
                    prop_assert_eq!(witness.total(), 0);
                }
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }

    #[test]
    fn never_wrong_under_edits(
        (p, u) in small_params().prop_flat_map(message_for),
        seed in any::<u64>(),
        insert in any::<bool>(),
        whole in any::<bool>(),
    ) {
        let kind = if insert { EditKind::Insertions } else { EditKind::Deletions };
        let scope = if whole { Scope::WholeCodeword } else { Scope::SystematicOnly };
        let x = encode(&u, &p).unwrap();
        let plan = sample_plan_seeded(x.len(), p.k(), p.delta(), kind, scope, seed).unwrap();
        let y = apply_edits(&x, &plan).unwrap();
        match decode(&y, &p, kind).unwrap() {
            DecodeOutcome::Success { message, .. } => prop_assert_eq!(message, u),
            DecodeOutcome::Failure { candidates } => {
                prop_assert!(candidates.len() >= 2);
                prop_assert!(candidates.contains(&u));
                prop_assert!(candidates.windows(2).all(|w| w[0] < w[1]));
            }
            DecodeOutcome::NoCandidate => prop_assert!(false, "true message must survive"),
        }
    }

    #[test]
    fn deletion_undoes_insertion(x in proptest::collection::vec(0u8..=1, 1..60), seed in any::<u64>(), d in 0usize..4) {
        let d = d.min(x.len() + 1);
        let plan = sample_plan_seeded(x.len(), x.len(), d, EditKind::Insertions, Scope::WholeCodeword, seed).unwrap();
        let y = apply_edits(&x, &plan).unwrap();
        prop_assert_eq!(y.len(), x.len() + d);
        // Inserted bit i lands at index (p_i - 1) + i of the output.
        let inverse: Vec<usize> = plan.positions.iter().enumerate().map(|(i, &p)| p + i).collect();
        prop_assert_eq!(apply_edits(&y, &EditPlan::deletions(inverse)).unwrap(), x.clone());
        prop_assert!(is_subsequence(&x, &y));
    }

    #[test]
    fn sampling_is_deterministic(len in 1usize..200, seed in any::<u64>(), insert in any::<bool>()) {
        let kind = if insert { EditKind::Insertions } else { EditKind::Deletions };
        let d = len.min(3);
        let a = sample_plan_seeded(len, len, d, kind, Scope::WholeCodeword, seed).unwrap();
        let b = sample_plan_seeded(len, len, d, kind, Scope::WholeCodeword, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn vt_corrects_any_single_deletion(x in proptest::collection::vec(0u8..=1, 1..300), pos in any::<prop::sample::Index>()) {
        let s = vt_syndrome(&x).unwrap();
        let mut y = x.clone();
        y.remove(pos.index(x.len()));
        prop_assert_eq!(vt_correct(&y, s).unwrap(), x);
    }

    #[test]
    fn field_axioms(m in 2u32..=16, a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
        let f = FieldSpec::standard(m).unwrap();
        let mask = (f.order() - 1) as u16;
        let (a, b, c) = (FieldElement(a & mask), FieldElement(b & mask), FieldElement(c & mask));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn sync_always_reconstructs(bits in 1usize..4000, d in 0usize..30, seed in any::<u64>(), gc in any::<bool>(), anchor in 8usize..40) {
        let d = d.min(bits);
        let (a, b) = random_pair(bits, d, seed, 0);
        let mode = if gc { SyncMode::Gc } else { SyncMode::Vt };
        let config = SyncConfig { anchor_len: anchor, seed, ..SyncConfig::new(mode) };
        let s = run_sync(&a, &b, &config).unwrap();
        prop_assert!(s.success);
        let sent: usize = s.messages.iter().filter(|m| m.direction == Direction::AToB).map(|m| m.bits).sum();
        let replied: usize = s.messages.iter().filter(|m| m.direction == Direction::BToA).map(|m| m.bits).sum();
        prop_assert_eq!((sent, replied), (s.bits_a_to_b, s.bits_b_to_a));
        prop_assert!(s.open_bits.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(s.fallback_bits <= s.bits_a_to_b);
    }

    #[test]
    fn bit_text_round_trip(x in proptest::collection::vec(0u8..=1, 0..100)) {
        prop_assert_eq!(parse_bits(&format_bits(&x)).unwrap(), x.clone());
        prop_assert_eq!(digest(&x, 3, 32) >> 32, 0);
    }
}

#[test]
fn case_counts_match_binomial() {
    fn binom(n: u128, k: u128) -> u128 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for k_prime in 1..=24usize {
        for d in 0..=3usize {
            assert_eq!(enumerate_cases(k_prime, d, None).len() as u128, binom((k_prime + d - 1) as u128, d as u128));
        }
    }
}
