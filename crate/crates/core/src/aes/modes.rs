use super::cipher::Aes128;
use super::gf::gf_mul2;
use super::{AesKey, Block128, CryptoError, Direction, Tweak128, XtsContext, BLOCK_BYTES};

fn check_aligned(data: &[u8]) -> Result<(), CryptoError> {
    if !data.len().is_multiple_of(BLOCK_BYTES) {
        return Err(CryptoError::NonBlockAlignedLength { len: data.len() });
    }
    Ok(())
}

/// Electronic-codebook mode: every block is enciphered on its own.
pub fn ecb(key: &AesKey, data: &[u8], direction: Direction) -> Result<Vec<u8>, CryptoError> {
    check_aligned(data)?;
    let cipher = Aes128::new(key);
    let mut out = Vec::with_capacity(data.len());
    for chunk in data.chunks_exact(BLOCK_BYTES) {
        let block = Block128::from_slice(chunk).expect("chunk is 16 bytes");
        let r = match direction {
            Direction::Encrypt => cipher.encrypt(&block),
            Direction::Decrypt => cipher.decrypt(&block),
        };
        out.extend_from_slice(&r.0);
    }
    Ok(out)
}

/// The sequence T_0, T_1, ... of per-block tweaks for one data unit.
/// T_0 is the sector number enciphered under the tweak key and each later
/// tweak is the previous one doubled in GF(2^128).
#[derive(Debug, Clone)]
pub struct TweakStream {
    next: Tweak128,
}

impl TweakStream {
    pub fn new(tweak_key: &AesKey, sector_number: &[u8; 16]) -> Self {
        let t0 = Aes128::new(tweak_key).encrypt(&Block128(*sector_number));
        TweakStream {
            next: Tweak128(t0.0),
        }
    }

    pub fn from_initial(t0: Tweak128) -> Self {
        TweakStream { next: t0 }
    }
}

impl Iterator for TweakStream {
    type Item = Tweak128;

    fn next(&mut self) -> Option<Tweak128> {
        let t = self.next;
        self.next = gf_mul2(t);
        Some(t)
    }
}

/// XTS over a block-aligned data unit:
/// `C_i = E_k2(P_i ^ T_i) ^ T_i` with the tweak stream from [`TweakStream`].
pub fn xts(ctx: &XtsContext, data: &[u8], direction: Direction) -> Result<Vec<u8>, CryptoError> {
    check_aligned(data)?;
    let data_cipher = Aes128::new(&ctx.key2);
    let tweaks = TweakStream::new(&ctx.key1, &ctx.sector_number);
    let mut out = Vec::with_capacity(data.len());
    for (chunk, t) in data.chunks_exact(BLOCK_BYTES).zip(tweaks) {
        let t = t.as_block();
        let masked = Block128::from_slice(chunk).expect("chunk is 16 bytes").xor(&t);
        let r = match direction {
            Direction::Encrypt => data_cipher.encrypt(&masked),
            Direction::Decrypt => data_cipher.decrypt(&masked),
        };
        out.extend_from_slice(&r.xor(&t).0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unaligned_lengths_are_rejected() {
        let key = AesKey([1; 16]);
        assert_eq!(
            ecb(&key, &[0u8; 17], Direction::Encrypt),
            Err(CryptoError::NonBlockAlignedLength { len: 17 })
        );
        let ctx = XtsContext::xex(key, [0; 16]);
        assert!(matches!(
            xts(&ctx, &[0u8; 15], Direction::Decrypt),
            Err(CryptoError::NonBlockAlignedLength { len: 15 })
        ));
    }

    #[test]
    fn empty_input_gives_empty_output() {
        let key = AesKey([9; 16]);
        assert!(ecb(&key, &[], Direction::Encrypt).unwrap().is_empty());
        let ctx = XtsContext::new(key, AesKey([3; 16]), [0; 16]);
        assert!(xts(&ctx, &[], Direction::Encrypt).unwrap().is_empty());
    }

    #[test]
    fn ecb_repeats_identical_blocks() {
        let key = AesKey([0x42; 16]);
        let ct = ecb(&key, &[0xAB; 32], Direction::Encrypt).unwrap();
        assert_eq!(ct[..16], ct[16..]);
    }

    #[test]
    fn xts_hides_repeated_blocks() {
        let ctx = XtsContext::new(AesKey([0x11; 16]), AesKey([0x22; 16]), [7; 16]);
        let ct = xts(&ctx, &[0xAB; 64], Direction::Encrypt).unwrap();
        let blocks: Vec<_> = ct.chunks(16).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(blocks[i], blocks[j]);
            }
        }
    }

    // IEEE 1619 vector 1 (all-zero keys, sector 0, 32 zero bytes)
    #[test]
    fn ieee1619_vector_1() {
        let ctx = XtsContext::new(AesKey([0; 16]), AesKey([0; 16]), [0; 16]);
        let ct = xts(&ctx, &[0u8; 32], Direction::Encrypt).unwrap();
        assert_eq!(
            hex::encode(&ct),
            "917cf69ebd68b2ec9b9fe9a3eadda692cd43d2f59598ed858c02c2652fbf922e"
        );
    }
}
