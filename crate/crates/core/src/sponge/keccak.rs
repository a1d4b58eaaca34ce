use super::SpongeError;

/// Number of rounds of the full Keccak-f[400] permutation.
pub const F400_ROUNDS: usize = 20;

/// Low 16 bits of the standard Keccak round constants, rounds 0..19.
const ROUND_CONSTANTS: [u16; F400_ROUNDS] = [
    0x0001, 0x8082, 0x808a, 0x8000, 0x808b, 0x0001, 0x8081, 0x8009, 0x008a, 0x0088, 0x8009,
    0x000a, 0x808b, 0x008b, 0x8089, 0x8003, 0x8002, 0x0080, 0x800a, 0x000a,
];

/// Rotation offsets indexed by lane `x + 5y`, reduced mod 16.
const RHO: [u32; 25] = [
    0, 1, 62 % 16, 28 % 16, 27 % 16, //
    36 % 16, 44 % 16, 6, 55 % 16, 20 % 16, //
    3, 10, 43 % 16, 25 % 16, 39 % 16, //
    41 % 16, 45 % 16, 15, 21 % 16, 8, //
    18 % 16, 2, 61 % 16, 56 % 16, 14,
];

/// 400-bit permutation state: 25 lanes of 16 bits, lane `(x, y)` at `x + 5y`.
///
/// Bit `k` of the state is bit `k % 16` of lane `k / 16`, so the byte view is
/// the little-endian concatenation of the lanes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct KeccakState400 {
    pub lanes: [u16; 25],
}

impl std::fmt::Debug for KeccakState400 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KeccakState400({})", hex::encode(self.to_bytes()))
    }
}

impl KeccakState400 {
    pub const BITS: usize = 400;
    pub const BYTES: usize = 50;

    pub fn from_bytes(bytes: &[u8; 50]) -> Self {
        let mut lanes = [0u16; 25];
        for (i, lane) in lanes.iter_mut().enumerate() {
            *lane = u16::from_le_bytes([bytes[2 * i], bytes[2 * i + 1]]);
        }
        KeccakState400 { lanes }
    }

    pub fn to_bytes(&self) -> [u8; 50] {
        let mut out = [0u8; 50];
        for (i, lane) in self.lanes.iter().enumerate() {
            out[2 * i..2 * i + 2].copy_from_slice(&lane.to_le_bytes());
        }
        out
    }

    #[inline]
    pub fn bit(&self, k: usize) -> u8 {
        ((self.lanes[k / 16] >> (k % 16)) & 1) as u8
    }

    #[inline]
    pub fn set_bit(&mut self, k: usize, v: u8) {
        let mask = 1u16 << (k % 16);
        if v & 1 != 0 {
            self.lanes[k / 16] |= mask;
        } else {
            self.lanes[k / 16] &= !mask;
        }
    }

    #[inline]
    pub fn xor_bit(&mut self, k: usize, v: u8) {
        self.lanes[k / 16] ^= u16::from(v & 1) << (k % 16);
    }
}

fn round(a: &mut [u16; 25], rc: u16) {
    // theta
    let mut c = [0u16; 5];
    for x in 0..5 {
        c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    }
    for x in 0..5 {
        let d = c[(x + 4) % 5] ^ c[(x + 1) % 5].rotate_left(1);
        for y in 0..5 {
            a[x + 5 * y] ^= d;
        }
    }
    // rho and pi: B[y, 2x+3y] = rot(A[x, y])
    let mut b = [0u16; 25];
    for x in 0..5 {
        for y in 0..5 {
            b[y + 5 * ((2 * x + 3 * y) % 5)] = a[x + 5 * y].rotate_left(RHO[x + 5 * y]);
        }
    }
    // chi
    for y in 0..5 {
        for x in 0..5 {
            a[x + 5 * y] = b[x + 5 * y] ^ (!b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        }
    }
    // iota
    a[0] ^= rc;
}

/// Apply rounds `first_round_index .. first_round_index + n_rounds` of
/// Keccak-f[400].
pub fn keccak_f400(
    state: KeccakState400,
    n_rounds: usize,
    first_round_index: usize,
) -> Result<KeccakState400, SpongeError> {
    let end = first_round_index
        .checked_add(n_rounds)
        .filter(|&e| e <= F400_ROUNDS)
        .ok_or(SpongeError::RoundIndexOutOfRange {
            first: first_round_index,
            rounds: n_rounds,
        })?;
    let mut s = state;
    for rc in &ROUND_CONSTANTS[first_round_index..end] {
        round(&mut s.lanes, *rc);
    }
    Ok(s)
}

/// The last `n_rounds` rounds of the permutation, the Keccak-p convention for
/// reduced-round calls. `n_rounds == 20` is the full permutation.
pub(crate) fn keccak_p400(state: &mut KeccakState400, n_rounds: usize) {
    debug_assert!(n_rounds <= F400_ROUNDS);
    for rc in &ROUND_CONSTANTS[F400_ROUNDS - n_rounds..] {
        round(&mut state.lanes, *rc);
    }
}
