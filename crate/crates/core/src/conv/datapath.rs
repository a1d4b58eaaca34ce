use super::{FixedPixel, Precision};

/// Signed width the accumulator is checked against.
///
/// Products and window sums need about 36 bits; a stored `y_in` shifted by up
/// to 30 bits needs 46.
pub const ACC_BITS: u32 = 48;

#[inline]
fn digit(d: u8, signed: bool) -> i64 {
    let d = i64::from(d & 0xF);
    if signed && d >= 8 {
        d - 16
    } else {
        d
    }
}

/// One sum-of-products submodule: `sum_k digit_k * x_k` for a 4-bit weight
/// slice.
pub fn sop_slice(window: &[i16], slice: &[u8], top_is_signed: bool) -> i64 {
    window
        .iter()
        .zip(slice)
        .map(|(&x, &d)| digit(d, top_is_signed) * i64::from(x))
        .sum()
}

/// All four slice sums for one window against an interleaved buffer.
pub fn window_sums(window: &[i16], locations: &[u16], precision: Precision) -> [i64; 4] {
    std::array::from_fn(|j| {
        let signed = precision.slice_is_signed(j);
        window
            .iter()
            .zip(locations)
            .map(|(&x, &loc)| digit((loc >> (4 * j)) as u8, signed) * i64::from(x))
            .sum()
    })
}

/// Combine the slice sums into one sum per output map.
pub fn recombine(s: &[i64; 4], precision: Precision) -> Vec<i64> {
    match precision {
        Precision::Bits16 => vec![s[0] + (s[1] << 4) + (s[2] << 8) + (s[3] << 12)],
        Precision::Bits8 => vec![s[0] + (s[1] << 4), s[2] + (s[3] << 4)],
        Precision::Bits4 => s.to_vec(),
    }
}

/// Round half up, shift right arithmetically, clamp to 16 bits.
pub fn normalize_saturate(acc: i64, q_shift: u32) -> FixedPixel {
    let rounded = if q_shift == 0 {
        acc
    } else {
        (acc + (1i64 << (q_shift - 1))) >> q_shift
    };
    FixedPixel(rounded.clamp(FixedPixel::MIN, FixedPixel::MAX) as i16)
}
