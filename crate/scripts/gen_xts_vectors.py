"""Generate the block-aligned XTS vector corpus with OpenSSL (via `cryptography`).

Output records: key1 key2 sector plaintext ciphertext, where key1 is the tweak
key and key2 the data key. OpenSSL orders the XTS key as data||tweak.
"""
import random
import sys

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes


def ecb(key, block):
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def xts_by_blocks(tweak_key, data_key, sector, pt):
    t = int.from_bytes(ecb(tweak_key, sector), "little")
    out = b""
    for i in range(0, len(pt), 16):
        tb = t.to_bytes(16, "little")
        x = bytes(a ^ b for a, b in zip(pt[i:i + 16], tb))
        out += bytes(a ^ b for a, b in zip(ecb(data_key, x), tb))
        t <<= 1
        if t >> 128:
            t = (t & ((1 << 128) - 1)) ^ 0x87
    return out


def xts_encrypt(tweak_key, data_key, sector, pt):
    ct = xts_by_blocks(tweak_key, data_key, sector, pt)
    if tweak_key != data_key:
        # OpenSSL rejects equal keys, so only cross-check the XTS cases
        enc = Cipher(algorithms.AES(data_key + tweak_key), modes.XTS(sector)).encryptor()
        assert enc.update(pt) + enc.finalize() == ct
    return ct


def record(k1, k2, sector, pt):
    ct = xts_encrypt(k1, k2, sector, pt)
    return " ".join(x.hex() for x in (k1, k2, sector, pt, ct))


def main(out):
    rng = random.Random(1619)
    lines = ["# key1(tweak) key2(data) sector plaintext ciphertext"]
    # IEEE 1619 vectors 1-3 (their Key1 is the data key, Key2 the tweak key)
    lines.append(record(bytes(16), bytes(16), bytes(16), bytes(32)))
    lines.append(record(b"\x22" * 16, b"\x11" * 16, bytes.fromhex("3333333333") + bytes(11), b"\x44" * 32))
    lines.append(record(b"\x22" * 16, bytes.fromhex("fffefdfcfbfaf9f8f7f6f5f4f3f2f1f0"),
                        bytes.fromhex("3333333333") + bytes(11), b"\x44" * 32))
    # IEEE 1619 vector 4: 512-byte data unit
    k_data = bytes.fromhex("27182818284590452353602874713526")
    k_tweak = bytes.fromhex("31415926535897932384626433832795")
    pt = bytes(range(256)) * 2
    lines.append(record(k_tweak, k_data, bytes(16), pt))
    for _ in range(40):
        k1 = rng.randbytes(16)
        k2 = k1 if rng.random() < 0.2 else rng.randbytes(16)
        sector = rng.randbytes(16)
        nblocks = rng.randint(1, 64)
        lines.append(record(k1, k2, sector, rng.randbytes(16 * nblocks)))
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
