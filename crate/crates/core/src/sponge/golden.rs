//! Golden-vector records for the sponge AE, stored as a JSON array.

use serde::{Deserialize, Serialize};

use super::{auth_encrypt, SpongeConfig, SpongeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpongeGolden {
    pub rate: u32,
    pub rounds: u32,
    pub key_hex: String,
    pub iv_hex: String,
    pub pt_hex: String,
    pub ct_hex: String,
    pub tag_hex: String,
}

impl SpongeGolden {
    pub fn config(&self) -> Result<SpongeConfig, SpongeError> {
        SpongeConfig::from_hex(self.rate, self.rounds, &self.key_hex, &self.iv_hex)
    }

    /// Recompute ciphertext and tag and compare them with the record.
    pub fn check(&self) -> Result<bool, SpongeError> {
        let cfg = self.config()?;
        let pt = hex::decode(&self.pt_hex).map_err(|e| SpongeError::BadHex {
            field: "pt",
            reason: e.to_string(),
        })?;
        let out = auth_encrypt(&cfg, &pt)?;
        Ok(hex::encode(out.ciphertext) == self.ct_hex && hex::encode(out.tag) == self.tag_hex)
    }
}

pub fn parse_corpus(json: &str) -> serde_json::Result<Vec<SpongeGolden>> {
    serde_json::from_str(json)
}
