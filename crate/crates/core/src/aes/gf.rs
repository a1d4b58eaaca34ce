use super::Tweak128;

/// Multiply by the primitive element 2 in GF(2^128) modulo
/// x^128 + x^7 + x^2 + x + 1.
///
/// Bytes are little-endian: each byte shifts left by one, the carry moves from
/// byte j into byte j+1, and a carry out of byte 15 folds back as 0x87.
#[inline]
pub fn gf_mul2(t: Tweak128) -> Tweak128 {
    let mut out = [0u8; 16];
    let mut carry = 0u8;
    for (o, &b) in out.iter_mut().zip(t.0.iter()) {
        *o = (b << 1) | carry;
        carry = b >> 7;
    }
    if carry != 0 {
        out[0] ^= 0x87;
    }
    Tweak128(out)
}
