"""Bit/byte packing helpers shared by all coding stages.

Bytes map to bits most-significant-bit first, fixed once globally so the
byte-oriented RS stage and the bit-oriented stages agree.
"""

import numpy as np


def bytes_to_bits(data) -> np.ndarray:
    """Expand uint8 bytes to a 0/1 array, MSB first.  Keeps leading axes."""
    arr = np.asarray(data, dtype=np.uint8)
    return np.unpackbits(arr, axis=-1) if arr.ndim > 1 else np.unpackbits(arr)


def bits_to_bytes(bits) -> np.ndarray:
    """Pack a 0/1 array (length multiple of 8) back to uint8 bytes, MSB first."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.shape[-1] % 8 != 0:
        raise ValueError(f"bit count {arr.shape[-1]} is not a multiple of 8")
    return np.packbits(arr, axis=-1) if arr.ndim > 1 else np.packbits(arr)


def count_bit_errors(a, b) -> int:
    """Number of differing bits between two equal-shape byte arrays."""
    x = np.bitwise_xor(np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8))
    return int(np.unpackbits(x).sum())
