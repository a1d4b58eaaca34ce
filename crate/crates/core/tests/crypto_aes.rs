use aes::cipher::{BlockEncrypt, KeyInit};
use nodesim::aes::{
    aes_round, decrypt_block, ecb, encrypt_block, expand_key, gf_mul2, vectors, xts, AesKey,
    Block128, Direction, Tweak128, TweakStream, XtsContext,
};
use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: &str = include_str!("../data/vectors/xts_aes128.txt");

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_key(r: &mut ChaCha8Rng) -> AesKey {
    AesKey(r.gen())
}

fn rand_bytes(r: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    r.fill_bytes(&mut v);
    v
}

/// Multiplication by x modulo x^128 + x^7 + x^2 + x + 1 over an explicit
/// coefficient vector.
fn poly_mul_x(t: &[u8; 16]) -> [u8; 16] {
    let mut coeffs = [false; 129];
    for (i, c) in coeffs.iter_mut().take(128).enumerate() {
        *c = (t[i / 8] >> (i % 8)) & 1 == 1;
    }
    coeffs.rotate_right(1);
    if coeffs[128] {
        coeffs[128] = false;
        for d in [0usize, 1, 2, 7] {
            coeffs[d] ^= true;
        }
    }
    let mut out = [0u8; 16];
    for (i, c) in coeffs.iter().take(128).enumerate() {
        out[i / 8] |= u8::from(*c) << (i % 8);
    }
    out
}

#[test]
fn corpus_vectors_reproduce() {
    let vs = vectors::parse_corpus(CORPUS).unwrap();
    assert!(vs.len() >= 40);
    for v in &vs {
        assert!(v.check().unwrap(), "vector failed: {}", v.to_record());
    }
    assert!(vs.iter().any(|v| v.context.is_xex()));
}

#[test]
fn ieee_vector_two() {
    // data key 11.., tweak key 22.., sector 0x3333333333
    let ctx = XtsContext::new(
        AesKey([0x22; 16]),
        AesKey([0x11; 16]),
        u128::from(0x33_3333_3333u64).to_le_bytes(),
    );
    let ct = xts(&ctx, &[0x44; 32], Direction::Encrypt).unwrap();
    assert_eq!(
        hex::encode(ct),
        "c454185e6a16936e39334038acef838bfb186fff7480adc4289382ecd6d394f0"
    );
}

#[test]
fn block_cipher_matches_reference_crate() {
    let mut r = rng(1);
    for _ in 0..10_000 {
        let key = rand_key(&mut r);
        let pt: [u8; 16] = r.gen();
        let reference = aes::Aes128::new(&key.0.into());
        let mut blk = pt.into();
        reference.encrypt_block(&mut blk);
        let ct = encrypt_block(&key, &Block128(pt));
        assert_eq!(ct.0[..], blk[..]);
        assert_eq!(decrypt_block(&key, &ct), Block128(pt));
    }
}

#[test]
fn xts_matches_reference_crate() {
    let mut r = rng(2);
    for _ in 0..500 {
        let tweak_key = rand_key(&mut r);
        let data_key = rand_key(&mut r);
        let sector: [u8; 16] = r.gen();
        let n = 16 * r.gen_range(1..=32);
        let pt = rand_bytes(&mut r, n);
        let reference = xts_mode::Xts128::new(
            aes::Aes128::new(&data_key.0.into()),
            aes::Aes128::new(&tweak_key.0.into()),
        );
        let mut buf = pt.clone();
        reference.encrypt_sector(&mut buf, sector);
        let ctx = XtsContext::new(tweak_key, data_key, sector);
        assert_eq!(xts(&ctx, &pt, Direction::Encrypt).unwrap(), buf);
    }
}

#[test]
fn xex_equals_direct_single_key_construction() {
    let mut r = rng(3);
    for _ in 0..200 {
        let key = rand_key(&mut r);
        let sector: [u8; 16] = r.gen();
        let n = 16 * r.gen_range(1..=16);
        let pt = rand_bytes(&mut r, n);
        let mut t = encrypt_block(&key, &Block128(sector)).0;
        let mut expected = Vec::new();
        for chunk in pt.chunks(16) {
            let p = Block128::from_slice(chunk).unwrap().xor(&Block128(t));
            expected.extend_from_slice(&encrypt_block(&key, &p).xor(&Block128(t)).0);
            t = poly_mul_x(&t);
        }
        let ctx = XtsContext::xex(key, sector);
        assert_eq!(xts(&ctx, &pt, Direction::Encrypt).unwrap(), expected);
    }
}

#[test]
fn gf_mul2_matches_polynomial_oracle() {
    let mut r = rng(4);
    for _ in 0..10_000 {
        let t: [u8; 16] = r.gen();
        assert_eq!(gf_mul2(Tweak128(t)).0, poly_mul_x(&t));
    }
    let mut top = [0u8; 16];
    top[15] = 0x80;
    let mut expect = [0u8; 16];
    expect[0] = 0x87;
    assert_eq!(poly_mul_x(&top), expect);
    assert_eq!(gf_mul2(Tweak128(top)).0, expect);
}

#[test]
fn tweak_stream_has_no_repeats() {
    let mut r = rng(5);
    let t0 = Tweak128(r.gen());
    assert!(!t0.is_zero());
    let seen: std::collections::HashSet<[u8; 16]> =
        TweakStream::from_initial(t0).take(10_000).map(|t| t.0).collect();
    assert_eq!(seen.len(), 10_000);
}

#[test]
fn xts_hides_repeated_blocks_across_random_keys() {
    let mut r = rng(6);
    for _ in 0..200 {
        let ctx = XtsContext::new(rand_key(&mut r), rand_key(&mut r), r.gen());
        let blk: [u8; 16] = r.gen();
        let pt: Vec<u8> = std::iter::repeat_n(blk, 8).flatten().collect();
        let ct = xts(&ctx, &pt, Direction::Encrypt).unwrap();
        let blocks: std::collections::HashSet<&[u8]> = ct.chunks(16).collect();
        assert_eq!(blocks.len(), 8);
    }
}

#[test]
fn ecb_large_buffer_round_trip() {
    let mut r = rng(7);
    let key = rand_key(&mut r);
    let pt = rand_bytes(&mut r, 8192);
    let ct = ecb(&key, &pt, Direction::Encrypt).unwrap();
    assert_eq!(ecb(&key, &ct, Direction::Decrypt).unwrap(), pt);
}

#[test]
fn round_is_injective_for_fixed_key() {
    let mut r = rng(8);
    let rk = Block128(r.gen());
    let mut seen = std::collections::HashSet::new();
    for _ in 0..5_000 {
        let s = Block128(r.gen());
        seen.insert((s.0, aes_round(s, rk, false).0));
    }
    let outs: std::collections::HashSet<_> = seen.iter().map(|(_, o)| *o).collect();
    assert_eq!(outs.len(), seen.len());
}

#[test]
fn schedule_starts_with_key() {
    let mut r = rng(9);
    for _ in 0..100 {
        let k = rand_key(&mut r);
        assert_eq!(expand_key(&k).first().0, k.0);
    }
}

proptest! {
    #[test]
    fn ecb_changes_stay_in_their_block(key: [u8; 16], blocks in 2usize..16, which in 0usize..16, bit in 0u8..8) {
        let which = which % blocks;
        let pt = vec![0xa5u8; blocks * 16];
        let mut pt2 = pt.clone();
        pt2[which * 16] ^= 1 << bit;
        let a = ecb(&AesKey(key), &pt, Direction::Encrypt).unwrap();
        let b = ecb(&AesKey(key), &pt2, Direction::Encrypt).unwrap();
        for i in 0..blocks {
            prop_assert_eq!(a[i * 16..i * 16 + 16] == b[i * 16..i * 16 + 16], i != which);
        }
    }

    #[test]
    fn xts_round_trip(k1: [u8; 16], k2: [u8; 16], sn: [u8; 16], data in prop::collection::vec(any::<[u8; 16]>(), 1..512)) {
        let ctx = XtsContext::new(AesKey(k1), AesKey(k2), sn);
        let pt: Vec<u8> = data.concat();
        let ct = xts(&ctx, &pt, Direction::Encrypt).unwrap();
        prop_assert_eq!(ct.len(), pt.len());
        prop_assert_eq!(xts(&ctx, &ct, Direction::Decrypt).unwrap(), pt);
    }

    #[test]
    fn unaligned_lengths_rejected(len in 1usize..200) {
        prop_assume!(len % 16 != 0);
        let data = vec![0u8; len];
        prop_assert!(ecb(&AesKey([0; 16]), &data, Direction::Encrypt).is_err());
        prop_assert!(xts(&XtsContext::xex(AesKey([0; 16]), [0; 16]), &data, Direction::Decrypt).is_err());
    }
}
