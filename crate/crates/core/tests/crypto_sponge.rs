use std::collections::HashSet;

use nodesim::sponge::{
    auth_decrypt, auth_encrypt, data_calls_for, golden, keccak_f400, sponge_decrypt,
    sponge_encrypt, sponge_init, KeccakState400, SpongeCipher, SpongeConfig, SpongeError,
    VALID_RATES, VALID_ROUNDS,
};
use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: &str = include_str!("../data/golden/sponge/ae_vectors.json");

// computed by scripts/gen_sponge_golden.py
const F400_OF_ZERO: &str = "f509ac40a90ff5149fe8a0ecd15b7078f0ef8fbf3703526075dcc90e76e74652a159815d956d146e3e63ee58ff714c718eb3";

fn random_state(r: &mut ChaCha8Rng) -> KeccakState400 {
    KeccakState400 { lanes: r.gen() }
}

#[test]
fn zero_state_full_permutation() {
    let s = keccak_f400(KeccakState400::default(), 20, 0).unwrap();
    assert_eq!(hex::encode(s.to_bytes()), F400_OF_ZERO);
}

#[test]
fn permutation_matches_reference_crate() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let s = random_state(&mut r);
        let mut lanes = s.lanes;
        keccak::f400(&mut lanes);
        assert_eq!(keccak_f400(s, 20, 0).unwrap().lanes, lanes);
    }
}

#[test]
fn permutation_has_no_collisions_on_random_inputs() {
    let mut r = ChaCha8Rng::seed_from_u64(12);
    let mut inputs = HashSet::new();
    let mut outputs = HashSet::new();
    while inputs.len() < 100_000 {
        let s = random_state(&mut r);
        if inputs.insert(s) {
            outputs.insert(keccak_f400(s, 20, 0).unwrap());
        }
    }
    assert_eq!(outputs.len(), inputs.len());
}

#[test]
fn three_round_steps_compose() {
    let mut r = ChaCha8Rng::seed_from_u64(13);
    let s = random_state(&mut r);
    let mut t = s;
    for first in (0..18).step_by(3) {
        t = keccak_f400(t, 3, first).unwrap();
    }
    t = keccak_f400(t, 2, 18).unwrap();
    assert_eq!(t, keccak_f400(s, 20, 0).unwrap());
}

#[test]
fn golden_corpus_reproduces() {
    let records = golden::parse_corpus(GOLDEN).unwrap();
    assert!(records.len() >= 50);
    for g in &records {
        assert!(g.check().unwrap(), "mismatch for {g:?}");
    }
    let fixed = records
        .iter()
        .find(|g| g.rate == 128 && g.rounds == 20 && !g.pt_hex.is_empty())
        .unwrap();
    let cfg = fixed.config().unwrap();
    let ct = sponge_encrypt(&cfg, &hex::decode(&fixed.pt_hex).unwrap());
    assert_eq!(hex::encode(ct), fixed.ct_hex);
}

#[test]
fn differing_ivs_give_differing_states() {
    let mut r = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let key: [u8; 16] = r.gen();
        let a: [u8; 8] = r.gen();
        let b: [u8; 8] = r.gen();
        if a == b {
            continue;
        }
        let ca = SpongeConfig::new(64, 6, key, a.to_vec()).unwrap();
        let cb = SpongeConfig::new(64, 6, key, b.to_vec()).unwrap();
        assert_ne!(sponge_init(&ca), sponge_init(&cb));
    }
}

#[test]
fn halving_rate_doubles_permutation_calls() {
    for len in [16usize, 64, 96, 1024] {
        let mut prev: Option<u64> = None;
        for rate in VALID_RATES.iter().rev() {
            let cfg = SpongeConfig::new(*rate, 20, [3; 16], vec![1]).unwrap();
            let mut c = SpongeCipher::new(&cfg);
            c.encrypt(&vec![0x5a; len]);
            c.finish();
            assert_eq!(c.data_calls(), data_calls_for(&cfg, len));
            if let Some(p) = prev {
                assert_eq!(c.data_calls(), 2 * p, "rate {rate} len {len}");
            }
            prev = Some(c.data_calls());
        }
    }
}

#[test]
fn round_trip_all_rates_and_rounds() {
    let mut r = ChaCha8Rng::seed_from_u64(15);
    for rate in VALID_RATES {
        for rounds in VALID_ROUNDS {
            let cfg = SpongeConfig::new(rate, rounds, r.gen(), r.gen::<[u8; 12]>().to_vec()).unwrap();
            let len = r.gen_range(0..=1024);
            let mut pt = vec![0u8; len];
            r.fill_bytes(&mut pt);
            let ct = sponge_encrypt(&cfg, &pt);
            assert_eq!(sponge_decrypt(&cfg, &ct), pt);
            let m = auth_encrypt(&cfg, &pt).unwrap();
            assert_eq!(auth_decrypt(&cfg, &m).unwrap(), pt);
        }
    }
}

#[test]
fn single_bit_flips_are_rejected() {
    let mut r = ChaCha8Rng::seed_from_u64(16);
    let cfg = SpongeConfig::new(32, 12, r.gen(), vec![0xaa; 8]).unwrap();
    let mut pt = vec![0u8; 48];
    r.fill_bytes(&mut pt);
    let good = auth_encrypt(&cfg, &pt).unwrap();
    let total_bits = (good.ciphertext.len() + good.tag.len()) * 8;
    for _ in 0..256 {
        let k = r.gen_range(0..total_bits);
        let mut bad = good.clone();
        if k < bad.ciphertext.len() * 8 {
            bad.ciphertext[k / 8] ^= 1 << (k % 8);
        } else {
            let k = k - bad.ciphertext.len() * 8;
            bad.tag[k / 8] ^= 1 << (k % 8);
        }
        assert_eq!(auth_decrypt(&cfg, &bad), Err(SpongeError::AuthenticationFailure));
    }
}

#[test]
fn extension_changes_tag() {
    let mut r = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let cfg = SpongeConfig::new(16, 6, r.gen(), vec![]).unwrap();
        let mut m = vec![0u8; r.gen_range(0..40)];
        r.fill_bytes(&mut m);
        let mut ext = m.clone();
        ext.extend(std::iter::repeat_n(0u8, r.gen_range(1..8)));
        assert_ne!(
            auth_encrypt(&cfg, &m).unwrap().tag,
            auth_encrypt(&cfg, &ext).unwrap().tag
        );
    }
}

#[test]
fn context_can_move_between_threads() {
    let cfg = SpongeConfig::new(64, 12, [9; 16], vec![]).unwrap();
    let mut c = SpongeCipher::new(&cfg);
    let first = c.encrypt(b"first half ");
    let (c, second) = std::thread::spawn(move || {
        let out = c.encrypt(b"second half");
        (c, out)
    })
    .join()
    .unwrap();
    assert_eq!(c.init_calls(), 1);
    let whole = sponge_encrypt(&cfg, b"first half second half");
    assert_eq!([first, second].concat(), whole);
}

proptest! {
    #[test]
    fn encrypt_decrypt_inverse(
        rate_idx in 0usize..8,
        rounds_idx in 0usize..7,
        key: [u8; 16],
        pt in prop::collection::vec(any::<u8>(), 0..256),
    ) {
        let cfg = SpongeConfig::new(VALID_RATES[rate_idx], VALID_ROUNDS[rounds_idx], key, vec![1, 2, 3]).unwrap();
        let ct = sponge_encrypt(&cfg, &pt);
        prop_assert_eq!(ct.len(), pt.len());
        prop_assert_eq!(sponge_decrypt(&cfg, &ct), pt);
    }
}
