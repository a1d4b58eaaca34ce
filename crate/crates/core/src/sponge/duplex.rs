use super::keccak::{keccak_p400, KeccakState400};
use super::{SpongeConfig, SpongeError};

#[inline]
fn msg_bit(data: &[u8], k: usize) -> u8 {
    (data[k / 8] >> (k % 8)) & 1
}

#[inline]
fn set_msg_bit(data: &mut [u8], k: usize, v: u8) {
    data[k / 8] |= (v & 1) << (k % 8);
}

/// State after loading `key ∥ iv ∥ 0` and one permutation call.
pub fn sponge_init(cfg: &SpongeConfig) -> KeccakState400 {
    let mut bytes = [0u8; KeccakState400::BYTES];
    bytes[..16].copy_from_slice(cfg.key());
    bytes[16..16 + cfg.iv().len()].copy_from_slice(cfg.iv());
    let mut s = KeccakState400::from_bytes(&bytes);
    keccak_p400(&mut s, cfg.rounds_per_call() as usize);
    s
}

/// Streaming duplex context. Feed data in any chunking; the output does not
/// depend on how the message is split.
///
/// A context owns its state and is not meant to be shared. It can be moved to
/// another thread between calls.
#[derive(Debug, Clone)]
pub struct SpongeCipher {
    state: KeccakState400,
    rate: usize,
    rounds: usize,
    /// bits already consumed from the current rate block
    offset: usize,
    init_calls: u64,
    data_calls: u64,
}

impl SpongeCipher {
    pub fn new(cfg: &SpongeConfig) -> Self {
        SpongeCipher {
            state: sponge_init(cfg),
            rate: cfg.rate_bits() as usize,
            rounds: cfg.rounds_per_call() as usize,
            offset: 0,
            init_calls: 1,
            data_calls: 0,
        }
    }

    pub fn state(&self) -> &KeccakState400 {
        &self.state
    }

    /// Permutation calls made while loading key and IV.
    pub fn init_calls(&self) -> u64 {
        self.init_calls
    }

    /// Permutation calls made while processing data, squeezing included.
    pub fn data_calls(&self) -> u64 {
        self.data_calls
    }

    fn permute(&mut self) {
        keccak_p400(&mut self.state, self.rounds);
        self.data_calls += 1;
        self.offset = 0;
    }

    fn advance(&mut self) {
        self.offset += 1;
        if self.offset == self.rate {
            self.permute();
        }
    }

    fn duplex(&mut self, input: &[u8], decrypt: bool) -> Vec<u8> {
        let mut out = vec![0u8; input.len()];
        for k in 0..input.len() * 8 {
            let pad = self.state.bit(self.offset);
            let x = msg_bit(input, k);
            let y = x ^ pad;
            set_msg_bit(&mut out, k, y);
            let c = if decrypt { x } else { y };
            self.state.set_bit(self.offset, c);
            self.advance();
        }
        out
    }

    pub fn encrypt(&mut self, plaintext: &[u8]) -> Vec<u8> {
        self.duplex(plaintext, false)
    }

    pub fn decrypt(&mut self, ciphertext: &[u8]) -> Vec<u8> {
        self.duplex(ciphertext, true)
    }

    /// Finish a trailing partial block with a permutation call, as the engine
    /// does once the last used bits have been absorbed.
    pub fn finish(&mut self) {
        if self.offset != 0 {
            self.permute();
        }
    }

    pub(crate) fn absorb_bits(&mut self, data: &[u8], nbits: usize) {
        for k in 0..nbits {
            self.state.xor_bit(self.offset, msg_bit(data, k));
            self.advance();
        }
    }

    /// pad10*: a single 1 bit, then zeros up to the rate boundary.
    pub(crate) fn pad(&mut self) {
        self.state.xor_bit(self.offset, 1);
        self.permute();
    }

    pub(crate) fn squeeze(&mut self, nbits: usize) -> Vec<u8> {
        let mut out = vec![0u8; nbits.div_ceil(8)];
        for k in 0..nbits {
            set_msg_bit(&mut out, k, self.state.bit(self.offset));
            self.offset += 1;
            if self.offset == self.rate && k + 1 < nbits {
                self.permute();
            }
        }
        out
    }
}

/// Encrypt a whole message. The final rate block may be partial; only its
/// used bits are XORed and absorbed.
pub fn sponge_encrypt(cfg: &SpongeConfig, plaintext: &[u8]) -> Vec<u8> {
    let mut c = SpongeCipher::new(cfg);
    let out = c.encrypt(plaintext);
    c.finish();
    out
}

pub fn sponge_decrypt(cfg: &SpongeConfig, ciphertext: &[u8]) -> Vec<u8> {
    let mut c = SpongeCipher::new(cfg);
    let out = c.decrypt(ciphertext);
    c.finish();
    out
}

/// Number of data-phase permutation calls for a message of `len` bytes.
pub fn data_calls_for(cfg: &SpongeConfig, len: usize) -> u64 {
    ((len * 8).div_ceil(cfg.rate_bits() as usize)) as u64
}

impl SpongeConfig {
    pub fn from_hex(
        rate_bits: u32,
        rounds: u32,
        key_hex: &str,
        iv_hex: &str,
    ) -> Result<Self, SpongeError> {
        let decode = |field: &'static str, s: &str| {
            hex::decode(s).map_err(|e| SpongeError::BadHex {
                field,
                reason: e.to_string(),
            })
        };
        let key = decode("key", key_hex)?;
        let key: [u8; 16] = key.try_into().map_err(|k: Vec<u8>| SpongeError::BadHex {
            field: "key",
            reason: format!("expected 16 bytes, got {}", k.len()),
        })?;
        SpongeConfig::new(rate_bits, rounds, key, decode("iv", iv_hex)?)
    }
}
