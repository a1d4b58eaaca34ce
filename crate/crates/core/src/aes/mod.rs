//! Functional model of the AES-128 half of the crypto engine.
//!
//! Covers the raw block cipher, the single-round primitive the engine exposes
//! to software, ECB, and the XTS/XEX tweaked-codebook mode with a sequential
//! tweak update. All operations are pure functions over values.
//!
//! Messages handed to [`ecb`] and [`xts`] must be a whole number of 16-byte
//! blocks; partial-block ciphertext stealing is not modeled.

mod cipher;
mod gf;
mod modes;
mod schedule;
pub mod vectors;

use std::fmt;

pub use cipher::{aes_round, aes_round_inv, decrypt_block, encrypt_block, Aes128};
pub use gf::gf_mul2;
pub use modes::{ecb, xts, TweakStream};
pub use schedule::{expand_key, RoundKeySchedule};

/// Size of one cipher block in bytes.
pub const BLOCK_BYTES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CryptoError {
    #[error("message length {len} is not a multiple of 16 bytes")]
    NonBlockAlignedLength { len: usize },
    #[error("invalid hex in {field}: {reason}")]
    BadHex { field: &'static str, reason: String },
    #[error("field {field} must be {expected} bytes, got {got}")]
    BadLength {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("malformed vector record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
}

/// Cipher direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Encrypt,
    Decrypt,
}

/// One 16-byte cipher block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block128(pub [u8; 16]);

impl Block128 {
    pub const ZERO: Block128 = Block128([0; 16]);

    pub fn from_slice(bytes: &[u8]) -> Option<Self> {
        bytes.try_into().ok().map(Block128)
    }

    pub fn as_bytes(&self) -> &[u8; 16] {
        &self.0
    }

    #[inline]
    pub fn xor(&self, other: &Block128) -> Block128 {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o ^= b;
        }
        Block128(out)
    }
}

impl fmt::Debug for Block128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block128({})", hex::encode(self.0))
    }
}

impl From<[u8; 16]> for Block128 {
    fn from(b: [u8; 16]) -> Self {
        Block128(b)
    }
}

/// A 128-bit cipher key.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AesKey(pub [u8; 16]);

impl AesKey {
    pub fn from_hex(s: &str) -> Result<Self, CryptoError> {
        parse_fixed::<16>("key", s).map(AesKey)
    }
}

impl fmt::Debug for AesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // keys are test material here, printing them is fine
        write!(f, "AesKey({})", hex::encode(self.0))
    }
}

impl From<[u8; 16]> for AesKey {
    fn from(b: [u8; 16]) -> Self {
        AesKey(b)
    }
}

/// An element of GF(2^128) in the IEEE 1619 byte order (byte 0 holds the
/// lowest-degree coefficients, bit 0 of each byte is the lowest within it).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Tweak128(pub [u8; 16]);

impl Tweak128 {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn as_block(&self) -> Block128 {
        Block128(self.0)
    }
}

impl fmt::Debug for Tweak128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tweak128({})", hex::encode(self.0))
    }
}

/// Keys and sector number for one XTS data unit.
///
/// `key1` derives the initial tweak from the sector number and `key2`
/// enciphers the data. Setting both keys equal gives the XEX scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XtsContext {
    pub key1: AesKey,
    pub key2: AesKey,
    pub sector_number: [u8; 16],
}

impl XtsContext {
    pub fn new(key1: AesKey, key2: AesKey, sector_number: [u8; 16]) -> Self {
        XtsContext {
            key1,
            key2,
            sector_number,
        }
    }

    /// Single-key variant.
    pub fn xex(key: AesKey, sector_number: [u8; 16]) -> Self {
        XtsContext::new(key, key, sector_number)
    }

    pub fn is_xex(&self) -> bool {
        self.key1 == self.key2
    }
}

/// Sector number for data living at `address`, as the little-endian 128-bit
/// encoding of `address / sector_size`.
pub fn sector_number_for_address(address: u64, sector_size: u64) -> [u8; 16] {
    assert!(sector_size > 0, "sector size must be positive");
    u128::from(address / sector_size).to_le_bytes()
}

pub(crate) fn parse_fixed<const N: usize>(
    field: &'static str,
    s: &str,
) -> Result<[u8; N], CryptoError> {
    let bytes = hex::decode(s.trim()).map_err(|e| CryptoError::BadHex {
        field,
        reason: e.to_string(),
    })?;
    let got = bytes.len();
    bytes.try_into().map_err(|_| CryptoError::BadLength {
        field,
        expected: N,
        got,
    })
}
