//! Erasure decoding checked against schoolbook GF(2^m) arithmetic and,
//! on tiny instances, exhaustive search over all fills.

use gc_core::field::{FieldElement, FieldSpec};
use gc_core::mds::GeneratorSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const POLYS: [u32; 6] = [0, 0, 0x7, 0xB, 0x13, 0x25];

fn slow_mul(a: u32, b: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..m {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    for bit in (m..2 * m).rev() {
        if acc >> bit & 1 == 1 {
            acc ^= POLYS[m as usize] << (bit - m);
        }
    }
    acc
}

fn slow_pow(a: u32, e: usize, m: u32) -> u32 {
    (0..e).fold(1, |acc, _| slow_mul(acc, a, m))
}

fn oracle_parities(message: &[u32], c: usize, m: u32) -> Vec<u32> {
    (1..=c)
        .map(|r| message.iter().enumerate().fold(0, |acc, (j, &u)| acc ^ slow_mul(u, slow_pow(2, j * (r - 1), m), m)))
        .collect()
}

fn fe(v: &[u32]) -> Vec<FieldElement> {
    v.iter().map(|&x| FieldElement(x as u16)).collect()
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize <= max)
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn parities_match_schoolbook_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in 2..=5u32 {
        let q = 1usize << m;
        let field = FieldSpec::standard(m).unwrap();
        for k_prime in 1..=8usize {
            for c in 1..=4usize {
                if k_prime + c > q {
                    continue;
                }
                let g = GeneratorSpec::new(k_prime, c, field).unwrap();
                for _ in 0..20 {
                    let u: Vec<u32> = (0..k_prime).map(|_| rng.gen_range(0..q as u32)).collect();
                    assert_eq!(g.encode(&fe(&u)).unwrap(), fe(&oracle_parities(&u, c, m)));
                }
            }
        }
    }
}

#[test]
fn every_erasure_pattern_recovers() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for m in 2..=5u32 {
        let q = 1usize << m;
        let field = FieldSpec::standard(m).unwrap();
        for k_prime in 1..=8usize {
            for c in 1..=4usize {
                if k_prime + c > q {
                    continue;
                }
                let g = GeneratorSpec::new(k_prime, c, field).unwrap();
                for pattern in subsets(k_prime, c) {
                    for _ in 0..8 {
                        let u: Vec<u32> = (0..k_prime).map(|_| rng.gen_range(0..q as u32)).collect();
                        let parities = fe(&oracle_parities(&u, c, m));
                        let mut symbols: Vec<Option<FieldElement>> = fe(&u).into_iter().map(Some).collect();
                        for &j in &pattern {
                            symbols[j] = None;
                        }
                        assert_eq!(
                            g.erasure_decode(&symbols, &parities).unwrap(),
                            fe(&u),
                            "m={m} k'={k_prime} c={c} {pattern:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn tiny_instances_match_exhaustive_search() {
    for m in 2..=3u32 {
        let q = 1u32 << m;
        let field = FieldSpec::standard(m).unwrap();
        for k_prime in 1..=3usize {
            let c = 2;
            if k_prime + c > q as usize {
                continue;
            }
            let g = GeneratorSpec::new(k_prime, c, field).unwrap();
            for code in 0..q.pow(k_prime as u32) {
                let u: Vec<u32> = (0..k_prime).map(|j| code / q.pow(j as u32) % q).collect();
                let parities = oracle_parities(&u, c, m);
                for pattern in subsets(k_prime, c) {
                    let e = pattern.len();
                    // Every fill of the erased positions agreeing with the first e parities.
                    let mut fills = Vec::new();
                    for guess in 0..q.pow(e as u32) {
                        let mut v = u.clone();
                        for (i, &j) in pattern.iter().enumerate() {
                            v[j] = guess / q.pow(i as u32) % q;
                        }
                        if oracle_parities(&v, c, m)[..e] == parities[..e] {
                            fills.push(v);
                        }
                    }
                    assert_eq!(fills, vec![u.clone()]);
                    let mut symbols: Vec<Option<FieldElement>> = fe(&u).into_iter().map(Some).collect();
                    for &j in &pattern {
                        symbols[j] = None;
                    }
                    assert_eq!(g.erasure_decode(&symbols, &fe(&parities)).unwrap(), fe(&u));
                }
            }
        }
    }
}

#[test]
fn too_many_erasures_rejected() {
    let g = GeneratorSpec::new(4, 2, FieldSpec::standard(4).unwrap()).unwrap();
    let symbols = [None, None, None, Some(FieldElement(1))];
    assert!(g.erasure_decode(&symbols, &fe(&[0, 0])).is_err());
}
