#!/usr/bin/env python3
# Copyright 2026 The bitext Authors
# Licensed under the Apache License, Version 2.0.
"""Reference implementation of the deterministic mock embedder.

Writes the golden file tests/data/mock_embedder_golden.tsv:
  seed <TAB> dim <TAB> text as UTF-8 hex <TAB> space-separated components
Any other implementation of the mock (the C++ library, the embedding
service's --mock mode) must reproduce these vectors.

  key   = NFC(text)
  state = fnv1a64(key) XOR (seed * 0x9E3779B97F4A7C15)      (mod 2^64)
  for k in range(dim):
      state += 0x9E3779B97F4A7C15
      z = splitmix64_mix(state)
      v[k] = (z >> 11) * 2^-53 * 2 - 1
  unit-normalize; the empty key gives the zero vector
"""
import math
import os
import unicodedata

M = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def fnv1a64(data: bytes, h: int = 0xCBF29CE484222325) -> int:
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & M
    return h


def mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
    return z ^ (z >> 31)


def embed(text: str, dim: int, seed: int):
    key = unicodedata.normalize("NFC", text)
    if not key:
        return [0.0] * dim
    state = fnv1a64(key.encode("utf-8")) ^ ((seed * GOLDEN) & M)
    v = []
    for _ in range(dim):
        state = (state + GOLDEN) & M
        z = mix(state)
        v.append((z >> 11) * 2.0**-53 * 2.0 - 1.0)
    norm = math.sqrt(sum(x * x for x in v))
    return [x / norm for x in v]


TEXTS = ["hello", "namaste", "", "a b", "école", "école", "नमस्ते", "the house", "जगह"]

if __name__ == "__main__":
    out = os.path.join(os.path.dirname(__file__), "..", "data", "mock_embedder_golden.tsv")
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        for seed in (0, 42):
            for dim in (2, 8, 16):
                for text in TEXTS:
                    v = embed(text, dim, seed)
                    f.write(f"{seed}\t{dim}\t{text.encode('utf-8').hex()}\t{' '.join(repr(x) for x in v)}\n")
    print(f"fnv1a64('') = {fnv1a64(b''):016x}")
    print(f"fnv1a64('a') = {fnv1a64(b'a'):016x}")
    print(f"wrote {os.path.normpath(out)}")
