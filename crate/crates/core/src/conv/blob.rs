//! Flat binary maps and JSON manifests for golden convolution cases.
//!
//! A blob is a 12-byte header `{width, height, q}` of little-endian `u32`
//! followed by `width * height` little-endian `i16` samples. Weight sets use
//! the same layout with one row per filter and `q` holding `q_w`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{hwce_convolve, ConvError, FeatureMap, FilterSize, HwceJob, Precision, QFormat, WeightSet};

pub const BLOB_HEADER_BYTES: usize = 12;

pub fn write_map<W: Write>(mut w: W, fm: &FeatureMap) -> Result<(), ConvError> {
    let mut buf = Vec::with_capacity(BLOB_HEADER_BYTES + 2 * fm.pixels().len());
    for v in [fm.width() as u32, fm.height() as u32, u32::from(fm.q().bits())] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for p in fm.pixels() {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_map<R: Read>(mut r: R) -> Result<FeatureMap, ConvError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < BLOB_HEADER_BYTES {
        return Err(ConvError::BadBlob(format!("{} bytes is shorter than the header", bytes.len())));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap());
    let (width, height, q) = (word(0) as usize, word(1) as usize, word(2));
    let body = &bytes[BLOB_HEADER_BYTES..];
    if body.len() != 2 * width * height {
        return Err(ConvError::BadBlob(format!(
            "{width}x{height} needs {} payload bytes, found {}",
            2 * width * height,
            body.len()
        )));
    }
    let pixels = body
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]))
        .collect();
    FeatureMap::new(width, height, QFormat::new(q)?, pixels)
}

pub fn weights_to_map(ws: &WeightSet) -> FeatureMap {
    let pixels = ws.filters().concat();
    FeatureMap::new(ws.filter_size().taps(), ws.filters().len(), ws.q_w(), pixels)
        .expect("weight set shape is consistent")
}

pub fn weights_from_map(fm: &FeatureMap, fs: FilterSize, precision: Precision) -> Result<WeightSet, ConvError> {
    if fm.width() != fs.taps() {
        return Err(ConvError::BadBlob(format!(
            "weight blob rows hold {} taps, filter needs {}",
            fm.width(),
            fs.taps()
        )));
    }
    let filters = fm.pixels().chunks(fs.taps()).map(<[i16]>::to_vec).collect();
    WeightSet::new(fs, precision, filters, fm.q())
}

/// One golden case. Blob paths are relative to the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenCase {
    pub name: String,
    pub filter_size: FilterSize,
    pub precision: Precision,
    pub q_out: u32,
    pub input: String,
    pub weights: String,
    #[serde(default)]
    pub y_in: Option<Vec<String>>,
    pub expected: Vec<String>,
}

fn load(dir: &Path, rel: &str) -> Result<FeatureMap, ConvError> {
    read_map(std::fs::File::open(dir.join(rel))?)
}

impl GoldenCase {
    pub fn from_file(path: &Path) -> Result<Self, ConvError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn job(&self, dir: &Path) -> Result<HwceJob, ConvError> {
        let input = load(dir, &self.input)?;
        let weights = weights_from_map(&load(dir, &self.weights)?, self.filter_size, self.precision)?;
        let y_in = match &self.y_in {
            Some(paths) => Some(paths.iter().map(|p| load(dir, p)).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        Ok(HwceJob {
            input,
            y_in,
            weights,
            q_out: QFormat::new(self.q_out)?,
        })
    }

    pub fn expected(&self, dir: &Path) -> Result<Vec<FeatureMap>, ConvError> {
        self.expected.iter().map(|p| load(dir, p)).collect()
    }

    /// Run the engine on the case and compare with the stored outputs.
    pub fn check(&self, dir: &Path) -> Result<bool, ConvError> {
        Ok(hwce_convolve(&self.job(dir)?)? == self.expected(dir)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_round_trip() {
        let fm = FeatureMap::new(3, 2, QFormat::new(9).unwrap(), vec![-1, 2, -300, 32767, -32768, 0]).unwrap();
        let mut buf = Vec::new();
        write_map(&mut buf, &fm).unwrap();
        assert_eq!(buf.len(), BLOB_HEADER_BYTES + 12);
        assert_eq!(&buf[..4], &[3, 0, 0, 0]);
        assert_eq!(read_map(&buf[..]).unwrap(), fm);
        assert!(matches!(read_map(&buf[..13]), Err(ConvError::BadBlob(_))));
    }

    #[test]
    fn weights_round_trip_through_map() {
        let ws = WeightSet::new(
            FilterSize::Three,
            Precision::Bits4,
            (0..4).map(|f| (0..9).map(|k| ((f * 9 + k) % 16 - 8) as i16).collect()).collect(),
            QFormat::new(3).unwrap(),
        )
        .unwrap();
        let fm = weights_to_map(&ws);
        assert_eq!(weights_from_map(&fm, FilterSize::Three, Precision::Bits4).unwrap(), ws);
    }
}
