#!/usr/bin/env python3
"""Independent reference for the Keccak-f[400] duplex AE; writes golden JSON.

Round constants come from the LFSR definition and rotation offsets from the
(x, y) walk, so nothing here is copied from the Rust tables.
"""
import json
import random
import sys

W = 16


def rc_bit(t):
    if t % 255 == 0:
        return 1
    r = 1
    for _ in range(t % 255):
        r <<= 1
        if r & 0x100:
            r ^= 0x171
    return r & 1


def round_constant(ir):
    rc = 0
    for j in range(7):
        pos = (1 << j) - 1
        if pos < W and rc_bit(j + 7 * ir):
            rc |= 1 << pos
    return rc


def rho_offsets():
    off = [[0] * 5 for _ in range(5)]
    x, y = 1, 0
    for t in range(24):
        off[x][y] = ((t + 1) * (t + 2) // 2) % W
        x, y = y, (2 * x + 3 * y) % 5
    return off


RC = [round_constant(i) for i in range(20)]
RHO = rho_offsets()
MASK = (1 << W) - 1


def rot(v, n):
    n %= W
    return ((v << n) | (v >> (W - n))) & MASK if n else v


def keccak_round(A, rc):
    C = [A[x][0] ^ A[x][1] ^ A[x][2] ^ A[x][3] ^ A[x][4] for x in range(5)]
    D = [C[(x - 1) % 5] ^ rot(C[(x + 1) % 5], 1) for x in range(5)]
    A = [[A[x][y] ^ D[x] for y in range(5)] for x in range(5)]
    B = [[0] * 5 for _ in range(5)]
    for x in range(5):
        for y in range(5):
            B[y][(2 * x + 3 * y) % 5] = rot(A[x][y], RHO[x][y])
    A = [[B[x][y] ^ ((~B[(x + 1) % 5][y]) & B[(x + 2) % 5][y]) for y in range(5)] for x in range(5)]
    A[0][0] ^= rc
    return A


def permute(lanes, nr, first=None):
    if first is None:
        first = 20 - nr
    A = [[lanes[x + 5 * y] for y in range(5)] for x in range(5)]
    for i in range(first, first + nr):
        A = keccak_round(A, RC[i])
    return [A[i % 5][i // 5] for i in range(25)]


class Bits:
    """State as a flat list of 400 bits, bit k = lane k//16 bit k%16."""

    def __init__(self, data):
        self.b = []
        for byte in data:
            self.b.extend((byte >> i) & 1 for i in range(8))

    def lanes(self):
        return [sum(self.b[16 * i + j] << j for j in range(16)) for i in range(25)]

    def load(self, lanes):
        self.b = [(lanes[k // 16] >> (k % 16)) & 1 for k in range(400)]


def to_bits(data):
    return [(data[k // 8] >> (k % 8)) & 1 for k in range(len(data) * 8)]


def from_bits(bits):
    out = bytearray((len(bits) + 7) // 8)
    for k, v in enumerate(bits):
        out[k // 8] |= v << (k % 8)
    return bytes(out)


def init(key, iv, rounds):
    s = Bits(key + iv + bytes(50 - len(key) - len(iv)))
    s.load(permute(s.lanes(), rounds))
    return s


def encrypt(key, iv, rate, rounds, pt):
    s = init(key, iv, rounds)
    m = to_bits(pt)
    out = []
    for start in range(0, len(m), rate):
        blk = m[start:start + rate]
        c = [p ^ s.b[i] for i, p in enumerate(blk)]
        s.b[:len(c)] = c
        out.extend(c)
        s.load(permute(s.lanes(), rounds))
    return from_bits(out)


def tag(key, iv, rate, rounds, ct, tag_bits=128):
    s = init(key, iv + b"\x01", rounds)
    m = to_bits(ct) + [1]
    m += [0] * (-len(m) % rate)
    for start in range(0, len(m), rate):
        for i, v in enumerate(m[start:start + rate]):
            s.b[i] ^= v
        s.load(permute(s.lanes(), rounds))
    out = []
    while True:
        out.extend(s.b[:rate])
        if len(out) >= tag_bits:
            break
        s.load(permute(s.lanes(), rounds))
    return from_bits(out[:tag_bits])


def main():
    rng = random.Random(0x5eed)
    records = []
    cases = [(128, 20, 0), (128, 20, 16), (128, 20, 57)]
    for rate in (1, 2, 4, 8, 16, 32, 64, 128):
        for rounds in (3, 6, 9, 12, 15, 18, 20):
            cases.append((rate, rounds, rng.choice([0, 1, 5, 16, 31, 64])))
    for rate, rounds, n in cases:
        key = bytes(rng.randrange(256) for _ in range(16))
        iv = bytes(rng.randrange(256) for _ in range(rng.choice([0, 8, 16, 33])))
        pt = bytes(rng.randrange(256) for _ in range(n))
        ct = encrypt(key, iv, rate, rounds, pt)
        records.append({
            "rate": rate, "rounds": rounds,
            "key_hex": key.hex(), "iv_hex": iv.hex(), "pt_hex": pt.hex(),
            "ct_hex": ct.hex(), "tag_hex": tag(key, iv, rate, rounds, ct).hex(),
        })
    json.dump(records, sys.stdout, indent=1)
    sys.stdout.write("\n")
    zero = permute([0] * 25, 20, 0)
    sys.stderr.write("f400(zero) = " + b"".join(v.to_bytes(2, "little") for v in zero).hex() + "\n")
    sys.stderr.write("rc = " + " ".join("%04x" % r for r in RC) + "\n")


if __name__ == "__main__":
    main()
