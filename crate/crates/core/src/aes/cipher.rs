use super::schedule::{expand_key, RoundKeySchedule};
use super::{AesKey, Block128};

pub(crate) const SBOX: [u8; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
];

const INV_SBOX: [u8; 256] = {
    let mut inv = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        inv[SBOX[i] as usize] = i as u8;
        i += 1;
    }
    inv
};

#[inline]
fn xtime(b: u8) -> u8 {
    (b << 1) ^ (((b >> 7) & 1) * 0x1b)
}

#[inline]
fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

// state layout is column-major: byte (row r, column c) lives at index 4c + r

fn sub_bytes(s: &mut [u8; 16], table: &[u8; 256]) {
    for b in s.iter_mut() {
        *b = table[*b as usize];
    }
}

fn shift_rows(s: &mut [u8; 16]) {
    let t = *s;
    for c in 0..4 {
        for r in 1..4 {
            s[4 * c + r] = t[4 * ((c + r) % 4) + r];
        }
    }
}

fn inv_shift_rows(s: &mut [u8; 16]) {
    let t = *s;
    for c in 0..4 {
        for r in 1..4 {
            s[4 * ((c + r) % 4) + r] = t[4 * c + r];
        }
    }
}

fn mix_columns(s: &mut [u8; 16]) {
    for c in 0..4 {
        let col = [s[4 * c], s[4 * c + 1], s[4 * c + 2], s[4 * c + 3]];
        let all = col[0] ^ col[1] ^ col[2] ^ col[3];
        for r in 0..4 {
            s[4 * c + r] = col[r] ^ all ^ xtime(col[r] ^ col[(r + 1) % 4]);
        }
    }
}

fn inv_mix_columns(s: &mut [u8; 16]) {
    for c in 0..4 {
        let col = [s[4 * c], s[4 * c + 1], s[4 * c + 2], s[4 * c + 3]];
        for r in 0..4 {
            s[4 * c + r] = gmul(col[r], 0x0e)
                ^ gmul(col[(r + 1) % 4], 0x0b)
                ^ gmul(col[(r + 2) % 4], 0x0d)
                ^ gmul(col[(r + 3) % 4], 0x09);
        }
    }
}

/// One forward cipher round: SubBytes, ShiftRows, MixColumns, AddRoundKey.
/// MixColumns is skipped when `is_last` is set.
pub fn aes_round(state: Block128, round_key: Block128, is_last: bool) -> Block128 {
    let mut s = state.0;
    sub_bytes(&mut s, &SBOX);
    shift_rows(&mut s);
    if !is_last {
        mix_columns(&mut s);
    }
    Block128(s).xor(&round_key)
}

/// One inverse round: InvShiftRows, InvSubBytes, AddRoundKey, then
/// InvMixColumns unless `is_last`.
pub fn aes_round_inv(state: Block128, round_key: Block128, is_last: bool) -> Block128 {
    let mut s = state.0;
    inv_shift_rows(&mut s);
    sub_bytes(&mut s, &INV_SBOX);
    let mut s = Block128(s).xor(&round_key).0;
    if !is_last {
        inv_mix_columns(&mut s);
    }
    Block128(s)
}

/// AES-128 with a pre-expanded schedule. Both directions share the same
/// forward schedule.
#[derive(Debug, Clone)]
pub struct Aes128 {
    schedule: RoundKeySchedule,
}

impl Aes128 {
    pub fn new(key: &AesKey) -> Self {
        Aes128 {
            schedule: expand_key(key),
        }
    }

    pub fn schedule(&self) -> &RoundKeySchedule {
        &self.schedule
    }

    pub fn encrypt(&self, pt: &Block128) -> Block128 {
        let rk = self.schedule.round_keys();
        let mut s = pt.xor(&rk[0]);
        for k in &rk[1..10] {
            s = aes_round(s, *k, false);
        }
        aes_round(s, rk[10], true)
    }

    pub fn decrypt(&self, ct: &Block128) -> Block128 {
        let rk = self.schedule.round_keys();
        let mut s = ct.xor(&rk[10]);
        for k in rk[1..10].iter().rev() {
            s = aes_round_inv(s, *k, false);
        }
        aes_round_inv(s, rk[0], true)
    }
}

pub fn encrypt_block(key: &AesKey, pt: &Block128) -> Block128 {
    Aes128::new(key).encrypt(pt)
}

pub fn decrypt_block(key: &AesKey, ct: &Block128) -> Block128 {
    Aes128::new(key).decrypt(ct)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(hex_str: &str) -> Block128 {
        Block128::from_slice(&hex::decode(hex_str).unwrap()).unwrap()
    }

    #[test]
    fn fips197_appendix_c1() {
        let key = AesKey::from_hex("000102030405060708090a0b0c0d0e0f").unwrap();
        let pt = b("00112233445566778899aabbccddeeff");
        let ct = encrypt_block(&key, &pt);
        assert_eq!(ct, b("69c4e0d86a7b0430d8cdb78070b4c55a"));
        assert_eq!(decrypt_block(&key, &ct), pt);
    }

    #[test]
    fn fips197_appendix_b() {
        let key = AesKey::from_hex("2b7e151628aed2a6abf7158809cf4f3c").unwrap();
        let ct = encrypt_block(&key, &b("3243f6a8885a308d313198a2e0370734"));
        assert_eq!(ct, b("3925841d02dc09fbdc118597196a0b32"));
    }

    #[test]
    fn last_round_of_zero_state_is_sbox_of_zero() {
        let out = aes_round(Block128::ZERO, Block128::ZERO, true);
        assert_eq!(out, Block128([0x63; 16]));
    }

    #[test]
    fn rounds_compose_to_block_cipher() {
        let key = AesKey([0x5a; 16]);
        let pt = b("0f1e2d3c4b5a69788796a5b4c3d2e1f0");
        let rk = expand_key(&key);
        let keys = rk.round_keys();
        let mut s = pt.xor(&keys[0]);
        for (i, k) in keys.iter().enumerate().skip(1) {
            s = aes_round(s, *k, i == 10);
        }
        assert_eq!(s, encrypt_block(&key, &pt));
    }

    #[test]
    fn inverse_round_undoes_forward_round() {
        let rk = b("a0fafe1788542cb123a339392a6c7605");
        let st = b("00102030405060708090a0b0c0d0e0f0");
        for last in [false, true] {
            let fwd = aes_round(st, rk, last);
            // inverse round expects AddRoundKey before InvMixColumns, so undo
            // the forward round step by step
            let mut s = fwd.xor(&rk).0;
            if !last {
                inv_mix_columns(&mut s);
            }
            inv_shift_rows(&mut s);
            sub_bytes(&mut s, &INV_SBOX);
            assert_eq!(Block128(s), st);
        }
    }

    #[test]
    fn mix_columns_known_column() {
        // db 13 53 45 -> 8e 4d a1 bc
        let mut s = [0u8; 16];
        s[..4].copy_from_slice(&[0xdb, 0x13, 0x53, 0x45]);
        mix_columns(&mut s);
        assert_eq!(&s[..4], &[0x8e, 0x4d, 0xa1, 0xbc]);
        inv_mix_columns(&mut s);
        assert_eq!(&s[..4], &[0xdb, 0x13, 0x53, 0x45]);
    }
}
