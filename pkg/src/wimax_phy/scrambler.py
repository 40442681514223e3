"""Data randomization via a 15-stage LFSR, generator 1 + x^14 + x^15.

The keystream bit is the feedback (stage 14 XOR stage 15), XORed with the
data before the register shifts.  Taking the feedback before the shift is
a convention, not a standard requirement; it is fixed here so results are
reproducible.  Scrambling is an involution: applying it twice with the
same seed restores the input.
"""

from functools import lru_cache

import numpy as np

DEFAULT_SEED = 0x7FFF  # all-ones initial register


@lru_cache(maxsize=64)
def _keystream(seed: int, length: int) -> np.ndarray:
    out = np.empty(length, dtype=np.uint8)
    state = seed & 0x7FFF  # bit 14 = stage 1 ... bit 0 = stage 15
    for i in range(length):
        fb = ((state >> 1) ^ state) & 1  # stage14 XOR stage15
        out[i] = fb
        state = (state >> 1) | (fb << 14)
    return out


def keystream(seed: int, length: int) -> np.ndarray:
    """First `length` bits of the PRBS for `seed` (15-bit, nonzero)."""
    if not 0 < seed <= 0x7FFF:
        raise ValueError(f"scrambler seed must be a nonzero 15-bit value, got {seed:#x}")
    ks = _keystream(int(seed), int(length))
    ks.flags.writeable = False
    return ks


def scramble(bits, seed: int = DEFAULT_SEED) -> np.ndarray:
    """XOR a bit block (last axis) with the PRBS keystream. Self-inverse."""
    arr = np.asarray(bits, dtype=np.uint8)
    return arr ^ keystream(seed, arr.shape[-1])


descramble = scramble
