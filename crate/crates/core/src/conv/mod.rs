//! Functional model of the convolution engine.
//!
//! The engine streams an input feature map through a line buffer, multiplies
//! each window against a 16-bit interleaved weight buffer using four 4-bit
//! weight slices, and accumulates into previously stored outputs:
//!
//! ```text
//! y_out[m][p] = sat((y_in[m][p] << s) + sum_k W_m[k] * x_p[k], s),  s = q_x + q_w - q_out
//! ```
//!
//! The 8-bit and 4-bit weight modes produce two or four output maps from one
//! pass over the input. Outputs are "valid" cross-correlations with no kernel
//! flip and no border padding.

mod blob;
mod datapath;
mod engine;
mod linebuffer;
mod weights;

pub use blob::{read_map, weights_from_map, weights_to_map, write_map, GoldenCase, BLOB_HEADER_BYTES};
pub use datapath::{normalize_saturate, recombine, sop_slice, window_sums, ACC_BITS};
pub use engine::{hwce_convolve, q_shift, reference_convolve};
pub use linebuffer::{direct_windows, extract_windows, LineBuffer};
pub use weights::{deinterleave_weights, interleave_weights, InterleavedWeightBuffer, WeightSet};

#[derive(Debug, thiserror::Error)]
pub enum ConvError {
    #[error("weight {value} of filter {filter} at {index} does not fit {bits}-bit two's complement")]
    WeightOutOfRange {
        filter: usize,
        index: usize,
        value: i32,
        bits: u32,
    },
    #[error("{precision}-bit mode takes {expected} filters, got {got}")]
    FilterCountMismatch {
        precision: u32,
        expected: usize,
        got: usize,
    },
    #[error("filter {filter} has {got} weights, expected {expected}")]
    WeightCountMismatch {
        filter: usize,
        expected: usize,
        got: usize,
    },
    #[error("image {width}x{height} is smaller than the {fs}x{fs} filter")]
    ImageSmallerThanFilter { width: usize, height: usize, fs: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported filter size {0}")]
    UnsupportedFilterSize(u32),
    #[error("unsupported weight precision {0}")]
    UnsupportedPrecision(u32),
    #[error("fractional bits {0} out of range 0..=15")]
    InvalidQ(u32),
    #[error("q_x {q_x} + q_w {q_w} is less than q_out {q_out}")]
    NegativeShift { q_x: u8, q_w: u8, q_out: u8 },
    #[error("y_in carries {got} fractional bits but the output format has {expected}")]
    QMismatch { expected: u8, got: u8 },
    #[error("malformed blob: {0}")]
    BadBlob(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A 16-bit two's-complement fixed-point sample. The number of fractional
/// bits lives on the enclosing map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FixedPixel(pub i16);

impl FixedPixel {
    pub const MIN: i64 = i16::MIN as i64;
    pub const MAX: i64 = i16::MAX as i64;
}

/// Fractional bit count, 0..=15.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QFormat(u8);

impl QFormat {
    pub fn new(q: u32) -> Result<Self, ConvError> {
        if q > 15 {
            return Err(ConvError::InvalidQ(q));
        }
        Ok(QFormat(q as u8))
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum FilterSize {
    Three,
    Five,
}

impl FilterSize {
    pub fn side(self) -> usize {
        match self {
            FilterSize::Three => 3,
            FilterSize::Five => 5,
        }
    }

    pub fn taps(self) -> usize {
        self.side() * self.side()
    }
}

impl TryFrom<u32> for FilterSize {
    type Error = ConvError;
    fn try_from(v: u32) -> Result<Self, ConvError> {
        match v {
            3 => Ok(FilterSize::Three),
            5 => Ok(FilterSize::Five),
            other => Err(ConvError::UnsupportedFilterSize(other)),
        }
    }
}

impl From<FilterSize> for u32 {
    fn from(f: FilterSize) -> u32 {
        f.side() as u32
    }
}

/// Weight precision. Narrower weights buy more output maps per pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Precision {
    Bits16,
    Bits8,
    Bits4,
}

impl Precision {
    pub const ALL: [Precision; 3] = [Precision::Bits16, Precision::Bits8, Precision::Bits4];

    pub fn bits(self) -> u32 {
        match self {
            Precision::Bits16 => 16,
            Precision::Bits8 => 8,
            Precision::Bits4 => 4,
        }
    }

    /// Output maps produced per pass.
    pub fn filters(self) -> usize {
        (16 / self.bits()) as usize
    }

    pub fn weight_range(self) -> (i32, i32) {
        let half = 1i32 << (self.bits() - 1);
        (-half, half - 1)
    }

    /// Whether 4-bit slice `j` holds a sign-carrying digit in this mode.
    pub fn slice_is_signed(self, j: usize) -> bool {
        let per = 4 / self.filters();
        j % per == per - 1
    }
}

impl TryFrom<u32> for Precision {
    type Error = ConvError;
    fn try_from(v: u32) -> Result<Self, ConvError> {
        match v {
            16 => Ok(Precision::Bits16),
            8 => Ok(Precision::Bits8),
            4 => Ok(Precision::Bits4),
            other => Err(ConvError::UnsupportedPrecision(other)),
        }
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.bits()
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-bit", self.bits())
    }
}

/// Row-major map of fixed-point pixels sharing one Q format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureMap {
    width: usize,
    height: usize,
    q: QFormat,
    pixels: Vec<i16>,
}

impl FeatureMap {
    pub fn new(width: usize, height: usize, q: QFormat, pixels: Vec<i16>) -> Result<Self, ConvError> {
        if pixels.len() != width * height {
            return Err(ConvError::DimensionMismatch(format!(
                "{}x{} map needs {} pixels, got {}",
                width,
                height,
                width * height,
                pixels.len()
            )));
        }
        Ok(FeatureMap {
            width,
            height,
            q,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, q: QFormat, value: i16) -> Self {
        FeatureMap {
            width,
            height,
            q,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn q(&self) -> QFormat {
        self.q
    }

    pub fn pixels(&self) -> &[i16] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> FixedPixel {
        FixedPixel(self.pixels[y * self.width + x])
    }

    pub fn into_pixels(self) -> Vec<i16> {
        self.pixels
    }
}

/// One engine job: an input map, optional stored partial outputs and the
/// weights. Without `y_in` the accumulation starts from zero.
#[derive(Debug, Clone)]
pub struct HwceJob {
    pub input: FeatureMap,
    pub y_in: Option<Vec<FeatureMap>>,
    pub weights: WeightSet,
    pub q_out: QFormat,
}
