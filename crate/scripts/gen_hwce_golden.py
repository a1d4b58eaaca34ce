#!/usr/bin/env python3
"""Brute-force reference for the convolution engine; writes golden cases.

Each case lands in its own directory with a manifest.json and blobs
(header: width, height, q as u32 LE; body: i16 LE samples).
"""
import json
import os
import random
import struct
import sys


def write_blob(path, w, h, q, px):
    with open(path, "wb") as f:
        f.write(struct.pack("<3I", w, h, q))
        f.write(struct.pack("<%dh" % len(px), *px))


def sat(v):
    return max(-32768, min(32767, v))


def conv(img, w, h, taps, fs, yin, s):
    ow, oh = w - fs + 1, h - fs + 1
    out = []
    for y in range(oh):
        for x in range(ow):
            acc = 0
            for dy in range(fs):
                for dx in range(fs):
                    acc += taps[dy * fs + dx] * img[(y + dy) * w + x + dx]
            if yin is not None:
                acc += yin[y * ow + x] * (1 << s)
            if s > 0:
                acc = (acc + (1 << (s - 1))) >> s
            out.append(sat(acc))
    return out


def make_case(root, name, rng, fs, bits, w, h, q_x, q_w, q_out, with_yin, pix_range=32767):
    d = os.path.join(root, name)
    os.makedirs(d, exist_ok=True)
    nf = 16 // bits
    lo, hi = -(1 << (bits - 1)), (1 << (bits - 1)) - 1
    img = [rng.randint(-pix_range, pix_range) for _ in range(w * h)]
    filters = [[rng.randint(lo, hi) for _ in range(fs * fs)] for _ in range(nf)]
    ow, oh = w - fs + 1, h - fs + 1
    s = q_x + q_w - q_out
    write_blob(os.path.join(d, "input.bin"), w, h, q_x, img)
    write_blob(os.path.join(d, "weights.bin"), fs * fs, nf, q_w, sum(filters, []))
    manifest = {
        "name": name, "filter_size": fs, "precision": bits, "q_out": q_out,
        "input": "input.bin", "weights": "weights.bin", "expected": [],
    }
    yins = [None] * nf
    if with_yin:
        manifest["y_in"] = []
        for m in range(nf):
            yins[m] = [rng.randint(-2000, 2000) for _ in range(ow * oh)]
            fn = "y_in_%d.bin" % m
            write_blob(os.path.join(d, fn), ow, oh, q_out, yins[m])
            manifest["y_in"].append(fn)
    for m in range(nf):
        out = conv(img, w, h, filters[m], fs, yins[m], s)
        fn = "out_%d.bin" % m
        write_blob(os.path.join(d, fn), ow, oh, q_out, out)
        manifest["expected"].append(fn)
    with open(os.path.join(d, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=1)
        f.write("\n")


def main():
    root = sys.argv[1]
    rng = random.Random(2024)
    for fs in (3, 5):
        for bits in (16, 8, 4):
            make_case(root, "fs%d_p%d_plain" % (fs, bits), rng, fs, bits, 16, 16, 8, bits - 1, 8, False, 600)
            make_case(root, "fs%d_p%d_yin" % (fs, bits), rng, fs, bits, 16, 12, 10, bits // 2, 11, True, 900)
    make_case(root, "fs5_p16_saturating", rng, 5, 16, 12, 12, 0, 0, 0, False)
    make_case(root, "fs3_p4_qshift0", rng, 3, 4, 9, 7, 4, 0, 4, True, 1000)


if __name__ == "__main__":
    main()
