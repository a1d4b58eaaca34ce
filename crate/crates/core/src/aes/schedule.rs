use super::cipher::SBOX;
use super::{AesKey, Block128};

const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

/// The eleven AES-128 round keys. Entry 0 is the cipher key itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundKeySchedule {
    round_keys: [Block128; 11],
}

impl RoundKeySchedule {
    pub fn round_keys(&self) -> &[Block128; 11] {
        &self.round_keys
    }

    pub fn first(&self) -> Block128 {
        self.round_keys[0]
    }

    pub fn last(&self) -> Block128 {
        self.round_keys[10]
    }

    /// Rebuild the whole schedule by walking backwards from the final round
    /// key, the way the engine recovers decryption keys from the last key it
    /// produced while encrypting.
    pub fn from_last_round_key(last: Block128) -> Self {
        let mut keys = [Block128::ZERO; 11];
        keys[10] = last;
        for round in (1..=10).rev() {
            keys[round - 1] = previous_round_key(&keys[round], RCON[round - 1]);
        }
        RoundKeySchedule { round_keys: keys }
    }
}

fn sub_rot(w: [u8; 4], rcon: u8) -> [u8; 4] {
    [
        SBOX[w[1] as usize] ^ rcon,
        SBOX[w[2] as usize],
        SBOX[w[3] as usize],
        SBOX[w[0] as usize],
    ]
}

fn word(b: &Block128, i: usize) -> [u8; 4] {
    [b.0[4 * i], b.0[4 * i + 1], b.0[4 * i + 2], b.0[4 * i + 3]]
}

fn xor4(a: [u8; 4], b: [u8; 4]) -> [u8; 4] {
    [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3]]
}

fn next_round_key(prev: &Block128, rcon: u8) -> Block128 {
    let mut w = [[0u8; 4]; 4];
    w[0] = xor4(word(prev, 0), sub_rot(word(prev, 3), rcon));
    for i in 1..4 {
        w[i] = xor4(word(prev, i), w[i - 1]);
    }
    let mut out = [0u8; 16];
    for (i, wi) in w.iter().enumerate() {
        out[4 * i..4 * i + 4].copy_from_slice(wi);
    }
    Block128(out)
}

fn previous_round_key(next: &Block128, rcon: u8) -> Block128 {
    let mut w = [[0u8; 4]; 4];
    for i in (1..4).rev() {
        w[i] = xor4(word(next, i), word(next, i - 1));
    }
    w[0] = xor4(word(next, 0), sub_rot(w[3], rcon));
    let mut out = [0u8; 16];
    for (i, wi) in w.iter().enumerate() {
        out[4 * i..4 * i + 4].copy_from_slice(wi);
    }
    Block128(out)
}

pub fn expand_key(key: &AesKey) -> RoundKeySchedule {
    let mut keys = [Block128::ZERO; 11];
    keys[0] = Block128(key.0);
    for round in 1..=10 {
        keys[round] = next_round_key(&keys[round - 1], RCON[round - 1]);
    }
    RoundKeySchedule { round_keys: keys }
}
