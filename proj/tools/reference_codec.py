#!/usr/bin/env python3
"""Independent reference for the hash family and the simple codec wire format.

Usage:
  reference_codec.py hash SEED J X BITS
  reference_codec.py simple DIST_JSON MESSAGE DELTA [--reduced]
Prints the codeword as a bit string and as padded hex bytes.
"""
import json
import math
import sys
from fractions import Fraction

M64 = (1 << 64) - 1
SEED = 0x5EED1D


def mix(z):
    z &= M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def hash_bits(seed, j, x, bits):
    out = ""
    t = 0
    while len(out) < bits:
        z = mix(seed ^ ((j * 0x9E3779B97F4A7C15) & M64) ^ ((x * 0xBF58476D1CE4E5B9) & M64)
                ^ ((t * 0xD6E8FEB86659FD93) & M64))
        out += format(z, "064b")
        t += 1
    return out[:bits]


def gamma(v):
    b = format(v, "b")
    return "0" * (len(b) - 1) + b


def floor_neg_log(q):
    r = 0
    while q <= Fraction(1, 2 ** (r + 1)):
        r += 1
    return r


def entropy(probs):
    return -sum(float(p) * math.log2(p) for p in probs if p > 0)


def simple(probs, m, delta, seed=SEED):
    pm = probs[m - 1]
    bits = floor_neg_log(pm) + 2 * delta + 1
    threshold = pm / 2 ** (2 * delta)
    others = [i + 1 for i, p in enumerate(probs) if p > 0 and p >= threshold and i + 1 != m]
    j = 1
    while True:
        h = hash_bits(seed, j, m, bits)
        if all(hash_bits(seed, j, x, bits) != h for x in others):
            return gamma(j) + h
        j += 1


def concentrate(probs, factor):
    out = [p / factor for p in probs]
    out[0] += 1 - Fraction(1, factor)
    return out


def pad(bits):
    bits = bits + "1"
    bits += "0" * (-len(bits) % 8)
    return bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8)).hex()


def main(argv):
    if argv[1] == "hash":
        seed, j, x, bits = (int(a, 0) for a in argv[2:6])
        print(hash_bits(seed, j, x, bits))
        return
    doc = json.load(open(argv[2]))
    probs = [Fraction(s) for s in doc["probs"]]
    m, delta = int(argv[3]), int(argv[4])
    if "--reduced" in argv:
        factor = max(1, math.ceil(entropy(probs)))
        code = gamma(factor) + simple(concentrate(probs, factor), m, delta)
    else:
        code = simple(probs, m, delta)
    print(code)
    print(pad(code))


if __name__ == "__main__":
    main(sys.argv)
