use super::{ConvError, FilterSize, Precision, QFormat};

/// 1, 2 or 4 filters at one precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSet {
    filter_size: FilterSize,
    precision: Precision,
    filters: Vec<Vec<i16>>,
    q_w: QFormat,
}

impl WeightSet {
    pub fn new(
        filter_size: FilterSize,
        precision: Precision,
        filters: Vec<Vec<i16>>,
        q_w: QFormat,
    ) -> Result<Self, ConvError> {
        if filters.len() != precision.filters() {
            return Err(ConvError::FilterCountMismatch {
                precision: precision.bits(),
                expected: precision.filters(),
                got: filters.len(),
            });
        }
        let (lo, hi) = precision.weight_range();
        for (f, taps) in filters.iter().enumerate() {
            if taps.len() != filter_size.taps() {
                return Err(ConvError::WeightCountMismatch {
                    filter: f,
                    expected: filter_size.taps(),
                    got: taps.len(),
                });
            }
            if let Some((index, &w)) = taps
                .iter()
                .enumerate()
                .find(|(_, &w)| i32::from(w) < lo || i32::from(w) > hi)
            {
                return Err(ConvError::WeightOutOfRange {
                    filter: f,
                    index,
                    value: i32::from(w),
                    bits: precision.bits(),
                });
            }
        }
        Ok(WeightSet {
            filter_size,
            precision,
            filters,
            q_w,
        })
    }

    pub fn filter_size(&self) -> FilterSize {
        self.filter_size
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn filters(&self) -> &[Vec<i16>] {
        &self.filters
    }

    pub fn q_w(&self) -> QFormat {
        self.q_w
    }
}

/// The engine's weight memory: one 16-bit location per filter tap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavedWeightBuffer(pub Vec<u16>);

impl InterleavedWeightBuffer {
    /// 4-bit digit `j` of every location.
    pub fn slice(&self, j: usize) -> Vec<u8> {
        self.0.iter().map(|&loc| ((loc >> (4 * j)) & 0xF) as u8).collect()
    }
}

/// Pack the filters so filter `f` occupies bits `[f*b, (f+1)*b)` of each
/// location, `b` being the weight precision.
pub fn interleave_weights(ws: &WeightSet) -> InterleavedWeightBuffer {
    let bits = ws.precision.bits();
    let mask: u16 = if bits == 16 { 0xFFFF } else { (1 << bits) - 1 };
    let locs = (0..ws.filter_size.taps())
        .map(|k| {
            ws.filters.iter().enumerate().fold(0u16, |acc, (f, taps)| {
                acc | (((taps[k] as u16) & mask) << (f as u32 * bits))
            })
        })
        .collect();
    InterleavedWeightBuffer(locs)
}

pub fn deinterleave_weights(
    buf: &InterleavedWeightBuffer,
    filter_size: FilterSize,
    precision: Precision,
    q_w: QFormat,
) -> Result<WeightSet, ConvError> {
    if buf.0.len() != filter_size.taps() {
        return Err(ConvError::WeightCountMismatch {
            filter: 0,
            expected: filter_size.taps(),
            got: buf.0.len(),
        });
    }
    let bits = precision.bits();
    let filters = (0..precision.filters())
        .map(|f| {
            buf.0
                .iter()
                .map(|&loc| {
                    let field = (loc >> (f as u32 * bits)) as i16;
                    // sign-extend the b-bit field
                    (field << (16 - bits)) >> (16 - bits)
                })
                .collect()
        })
        .collect();
    WeightSet::new(filter_size, precision, filters, q_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0() -> QFormat {
        QFormat::new(0).unwrap()
    }

    #[test]
    fn sixteen_bit_is_identity() {
        let taps: Vec<i16> = (0..9).map(|i| i * 1000 - 4000).collect();
        let ws = WeightSet::new(FilterSize::Three, Precision::Bits16, vec![taps.clone()], q0()).unwrap();
        let buf = interleave_weights(&ws);
        assert_eq!(buf.0, taps.iter().map(|&w| w as u16).collect::<Vec<_>>());
    }

    #[test]
    fn four_bit_nibble_packing() {
        let pattern: Vec<i16> = (0..9).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let ws = WeightSet::new(FilterSize::Three, Precision::Bits4, vec![pattern; 4], q0()).unwrap();
        let buf = interleave_weights(&ws);
        assert_eq!(buf.0[0], 0x1111);
        assert_eq!(buf.0[1], 0xFFFF);
        let ws2 = WeightSet::new(
            FilterSize::Three,
            Precision::Bits4,
            vec![vec![1; 9], vec![-1; 9], vec![1; 9], vec![-1; 9]],
            q0(),
        )
        .unwrap();
        assert_eq!(interleave_weights(&ws2).0[0], 0xF1F1);
    }

    #[test]
    fn eight_bit_packs_filter1_high() {
        let ws = WeightSet::new(
            FilterSize::Three,
            Precision::Bits8,
            vec![vec![-2; 9], vec![5; 9]],
            q0(),
        )
        .unwrap();
        let buf = interleave_weights(&ws);
        assert_eq!(buf.0[4], 0x05FE);
        let back = deinterleave_weights(&buf, FilterSize::Three, Precision::Bits8, q0()).unwrap();
        assert_eq!(back, ws);
    }

    #[test]
    fn range_and_count_checks() {
        assert!(matches!(
            WeightSet::new(FilterSize::Three, Precision::Bits4, vec![vec![8; 9]; 4], q0()),
            Err(ConvError::WeightOutOfRange { value: 8, .. })
        ));
        assert!(matches!(
            WeightSet::new(FilterSize::Three, Precision::Bits8, vec![vec![0; 9]], q0()),
            Err(ConvError::FilterCountMismatch { expected: 2, got: 1, .. })
        ));
        assert!(matches!(
            WeightSet::new(FilterSize::Five, Precision::Bits16, vec![vec![0; 9]], q0()),
            Err(ConvError::WeightCountMismatch { expected: 25, .. })
        ));
    }
}
