//! Functional model of the sponge half of the crypto engine.
//!
//! A Keccak-f[400] permutation with a configurable number of rounds drives a
//! duplex construction: each rate block of plaintext is XORed with the
//! current rate bits and the resulting ciphertext overwrites them before the
//! next permutation call. Authenticated encryption runs a second, domain
//! separated instance over the ciphertext and squeezes a tag from it.
//!
//! The padding and the wiring of the MAC instance are a documented choice of
//! this model, not a claim about the silicon.

mod ae;
mod duplex;
pub mod golden;
mod keccak;

pub use ae::{auth_decrypt, auth_encrypt, AuthCiphertext};
pub use duplex::{data_calls_for, sponge_decrypt, sponge_encrypt, sponge_init, SpongeCipher};
pub use keccak::{keccak_f400, KeccakState400, F400_ROUNDS};

/// Rates the engine can be configured for, in bits.
pub const VALID_RATES: [u32; 8] = [1, 2, 4, 8, 16, 32, 64, 128];

/// Round counts per permutation call the engine supports.
pub const VALID_ROUNDS: [u32; 7] = [3, 6, 9, 12, 15, 18, 20];

pub const DEFAULT_TAG_BITS: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpongeError {
    #[error("rounds {first}..{} exceed the 20-round permutation", first + rounds)]
    RoundIndexOutOfRange { first: usize, rounds: usize },
    #[error("rate of {0} bits is not a power of two between 1 and 128")]
    InvalidRate(u32),
    #[error("{0} rounds per call is neither a multiple of 3 nor 20")]
    InvalidRounds(u32),
    #[error("tag length {0} bits must be a positive multiple of 8 no larger than 512")]
    InvalidTagBits(u32),
    #[error("key and IV take {bits} bits, more than the 400-bit state")]
    KeyIvOverflow { bits: usize },
    #[error("authentication tag mismatch")]
    AuthenticationFailure,
    #[error("invalid hex in {field}: {reason}")]
    BadHex { field: &'static str, reason: String },
}

/// Sponge parameters, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpongeConfig {
    rate_bits: u32,
    rounds_per_call: u32,
    key: [u8; 16],
    iv: Vec<u8>,
    tag_bits: u32,
}

impl SpongeConfig {
    pub fn new(
        rate_bits: u32,
        rounds_per_call: u32,
        key: [u8; 16],
        iv: Vec<u8>,
    ) -> Result<Self, SpongeError> {
        if !VALID_RATES.contains(&rate_bits) {
            return Err(SpongeError::InvalidRate(rate_bits));
        }
        if !VALID_ROUNDS.contains(&rounds_per_call) {
            return Err(SpongeError::InvalidRounds(rounds_per_call));
        }
        let bits = (key.len() + iv.len()) * 8;
        if bits > KeccakState400::BITS {
            return Err(SpongeError::KeyIvOverflow { bits });
        }
        Ok(SpongeConfig {
            rate_bits,
            rounds_per_call,
            key,
            iv,
            tag_bits: DEFAULT_TAG_BITS,
        })
    }

    pub fn with_tag_bits(mut self, tag_bits: u32) -> Result<Self, SpongeError> {
        if tag_bits == 0 || !tag_bits.is_multiple_of(8) || tag_bits > 512 {
            return Err(SpongeError::InvalidTagBits(tag_bits));
        }
        self.tag_bits = tag_bits;
        Ok(self)
    }

    pub fn rate_bits(&self) -> u32 {
        self.rate_bits
    }

    pub fn rounds_per_call(&self) -> u32 {
        self.rounds_per_call
    }

    pub fn key(&self) -> &[u8; 16] {
        &self.key
    }

    pub fn iv(&self) -> &[u8] {
        &self.iv
    }

    pub fn tag_bits(&self) -> u32 {
        self.tag_bits
    }

    /// Configuration of the MAC instance: same key, IV extended by 0x01.
    pub(crate) fn mac_instance(&self) -> Result<SpongeConfig, SpongeError> {
        let mut iv = self.iv.clone();
        iv.push(0x01);
        let mut cfg = SpongeConfig::new(self.rate_bits, self.rounds_per_call, self.key, iv)?;
        cfg.tag_bits = self.tag_bits;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lattice_is_enforced() {
        for r in VALID_RATES {
            for n in VALID_ROUNDS {
                assert!(SpongeConfig::new(r, n, [0; 16], vec![]).is_ok());
            }
        }
        assert_eq!(
            SpongeConfig::new(3, 20, [0; 16], vec![]),
            Err(SpongeError::InvalidRate(3))
        );
        assert_eq!(
            SpongeConfig::new(256, 20, [0; 16], vec![]),
            Err(SpongeError::InvalidRate(256))
        );
        assert_eq!(
            SpongeConfig::new(64, 7, [0; 16], vec![]),
            Err(SpongeError::InvalidRounds(7))
        );
        assert_eq!(
            SpongeConfig::new(64, 0, [0; 16], vec![]),
            Err(SpongeError::InvalidRounds(0))
        );
    }

    #[test]
    fn key_and_iv_must_fit_the_state() {
        assert!(SpongeConfig::new(8, 20, [0; 16], vec![0; 34]).is_ok());
        assert_eq!(
            SpongeConfig::new(8, 20, [0; 16], vec![0; 35]),
            Err(SpongeError::KeyIvOverflow { bits: 408 })
        );
    }

    #[test]
    fn tag_length_checks() {
        let cfg = SpongeConfig::new(8, 20, [0; 16], vec![]).unwrap();
        assert!(cfg.clone().with_tag_bits(64).is_ok());
        assert!(cfg.clone().with_tag_bits(12).is_err());
        assert!(cfg.with_tag_bits(0).is_err());
    }
}
