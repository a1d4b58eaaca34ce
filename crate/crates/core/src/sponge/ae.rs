use super::duplex::SpongeCipher;
use super::{SpongeConfig, SpongeError};

/// Ciphertext plus its authentication tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthCiphertext {
    pub ciphertext: Vec<u8>,
    pub tag: Vec<u8>,
}

fn compute_tag(cfg: &SpongeConfig, ciphertext: &[u8]) -> Result<Vec<u8>, SpongeError> {
    let mut mac = SpongeCipher::new(&cfg.mac_instance()?);
    mac.absorb_bits(ciphertext, ciphertext.len() * 8);
    mac.pad();
    Ok(mac.squeeze(cfg.tag_bits() as usize))
}

/// Encrypt-then-MAC with two sponge instances. Instance A is the plain duplex
/// cipher, instance B uses the IV extended with 0x01 and absorbs the
/// ciphertext.
pub fn auth_encrypt(cfg: &SpongeConfig, plaintext: &[u8]) -> Result<AuthCiphertext, SpongeError> {
    let ciphertext = super::sponge_encrypt(cfg, plaintext);
    let tag = compute_tag(cfg, &ciphertext)?;
    Ok(AuthCiphertext { ciphertext, tag })
}

/// Check the tag over the whole ciphertext before decrypting anything.
pub fn auth_decrypt(cfg: &SpongeConfig, msg: &AuthCiphertext) -> Result<Vec<u8>, SpongeError> {
    let expected = compute_tag(cfg, &msg.ciphertext)?;
    // fold over every byte regardless of where the first difference is
    let diff = expected
        .iter()
        .zip(msg.tag.iter())
        .fold(0u8, |acc, (a, b)| acc | (a ^ b));
    if diff != 0 || expected.len() != msg.tag.len() {
        return Err(SpongeError::AuthenticationFailure);
    }
    Ok(super::sponge_decrypt(cfg, &msg.ciphertext))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SpongeConfig {
        SpongeConfig::new(64, 12, [0x42; 16], vec![9, 8, 7]).unwrap()
    }

    #[test]
    fn round_trip() {
        let pt = b"attack at dawn, bring snacks".to_vec();
        let m = auth_encrypt(&cfg(), &pt).unwrap();
        assert_eq!(m.tag.len(), 16);
        assert_eq!(auth_decrypt(&cfg(), &m).unwrap(), pt);
    }

    #[test]
    fn empty_plaintext_has_real_tag() {
        let m = auth_encrypt(&cfg(), &[]).unwrap();
        assert!(m.ciphertext.is_empty());
        assert_eq!(m.tag.len(), 16);
        assert!(m.tag.iter().any(|&b| b != 0));
        assert!(m.tag.iter().any(|&b| b != 0xff));
    }

    #[test]
    fn tampering_is_rejected() {
        let mut m = auth_encrypt(&cfg(), b"0123456789").unwrap();
        m.ciphertext[3] ^= 0x10;
        assert_eq!(auth_decrypt(&cfg(), &m), Err(SpongeError::AuthenticationFailure));
        let mut m = auth_encrypt(&cfg(), b"0123456789").unwrap();
        m.tag.pop();
        assert_eq!(auth_decrypt(&cfg(), &m), Err(SpongeError::AuthenticationFailure));
    }

    #[test]
    fn full_iv_leaves_no_room_for_domain_byte() {
        let c = SpongeConfig::new(64, 12, [0; 16], vec![0; 34]).unwrap();
        assert!(matches!(
            auth_encrypt(&c, b"x"),
            Err(SpongeError::KeyIvOverflow { bits: 408 })
        ));
    }

    #[test]
    fn tag_depends_on_length() {
        let a = auth_encrypt(&cfg(), b"abc").unwrap();
        let b = auth_encrypt(&cfg(), b"abc\0").unwrap();
        assert_ne!(a.tag, b.tag);
    }
}
