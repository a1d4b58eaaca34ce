//! Newline-delimited XTS test-vector corpus.
//!
//! One record per line, five whitespace-separated lower-case hex fields:
//!
//! ```text
//! key1 key2 sector plaintext ciphertext
//! ```
//!
//! `key1` is the tweak key and `key2` the data key. Blank lines and lines
//! starting with `#` are ignored.

use super::{parse_fixed, xts, AesKey, CryptoError, Direction, XtsContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XtsVector {
    pub context: XtsContext,
    pub plaintext: Vec<u8>,
    pub ciphertext: Vec<u8>,
}

impl XtsVector {
    /// Encrypt and decrypt through [`xts`] and compare both ways.
    pub fn check(&self) -> Result<bool, CryptoError> {
        let ct = xts(&self.context, &self.plaintext, Direction::Encrypt)?;
        let pt = xts(&self.context, &self.ciphertext, Direction::Decrypt)?;
        Ok(ct == self.ciphertext && pt == self.plaintext)
    }

    pub fn to_record(&self) -> String {
        format!(
            "{} {} {} {} {}",
            hex::encode(self.context.key1.0),
            hex::encode(self.context.key2.0),
            hex::encode(self.context.sector_number),
            hex::encode(&self.plaintext),
            hex::encode(&self.ciphertext)
        )
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<XtsVector>, CryptoError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(CryptoError::MalformedRecord {
                line: idx + 1,
                reason: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        if fields.iter().any(|f| f.chars().any(|c| c.is_ascii_uppercase())) {
            return Err(CryptoError::MalformedRecord {
                line: idx + 1,
                reason: "hex must be lower-case".into(),
            });
        }
        let key1 = AesKey(parse_fixed::<16>("key1", fields[0])?);
        let key2 = AesKey(parse_fixed::<16>("key2", fields[1])?);
        let sector = parse_fixed::<16>("sector", fields[2])?;
        let decode = |field: &'static str, s: &str| {
            hex::decode(s).map_err(|e| CryptoError::BadHex {
                field,
                reason: e.to_string(),
            })
        };
        let plaintext = decode("plaintext", fields[3])?;
        let ciphertext = decode("ciphertext", fields[4])?;
        if plaintext.len() != ciphertext.len() {
            return Err(CryptoError::MalformedRecord {
                line: idx + 1,
                reason: "plaintext and ciphertext lengths differ".into(),
            });
        }
        out.push(XtsVector {
            context: XtsContext::new(key1, key2, sector),
            plaintext,
            ciphertext,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let v = XtsVector {
            context: XtsContext::new(AesKey([1; 16]), AesKey([2; 16]), [3; 16]),
            plaintext: vec![0; 16],
            ciphertext: vec![0xff; 16],
        };
        let parsed = parse_corpus(&format!("# c\n\n{}\n", v.to_record())).unwrap();
        assert_eq!(parsed, vec![v]);
    }

    #[test]
    fn rejects_wrong_field_count_and_case() {
        assert!(matches!(
            parse_corpus("00 11"),
            Err(CryptoError::MalformedRecord { line: 1, .. })
        ));
        let upper = format!("{} {} {} AB AB", "0".repeat(32), "0".repeat(32), "0".repeat(32));
        assert!(matches!(
            parse_corpus(&upper),
            Err(CryptoError::MalformedRecord { .. })
        ));
    }
}
