"""Two-step block interleaver sized to one OFDM symbol of coded bits.

First permutation spreads adjacent coded bits across distant subcarriers;
the second alternates them over constellation bit significance.  The
formulas are the 802.16 OFDM-PHY constants for the 192-data-subcarrier
configuration; bijectivity and spreading are enforced by tests rather
than trusted.
"""

from dataclasses import dataclass, field

import numpy as np

N_DATA_SUBCARRIERS = 192
_BITS_PER_SUBCARRIER = {"bpsk": 1, "qpsk": 2, "16qam": 4, "64qam": 6}


def _permutation(n_cbps: int, n_cpc: int) -> np.ndarray:
    s = max(n_cpc // 2, 1)
    k = np.arange(n_cbps)
    m = (n_cbps // 12) * (k % 12) + k // 12
    j = s * (m // s) + (m + n_cbps - (12 * m) // n_cbps) % s
    return j  # bit k lands at position j[k]


@dataclass(frozen=True)
class InterleaverSpec:
    """Permutation tables for one modulation's coded-bit block."""

    modulation: str
    n_cpc: int = field(init=False)
    n_cbps: int = field(init=False)
    fwd: np.ndarray = field(init=False, repr=False)
    inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mod = self.modulation.lower()
        if mod not in _BITS_PER_SUBCARRIER:
            raise ValueError(f"unknown modulation {self.modulation!r}")
        n_cpc = _BITS_PER_SUBCARRIER[mod]
        n_cbps = N_DATA_SUBCARRIERS * n_cpc
        fwd = _permutation(n_cbps, n_cpc)
        inv = np.empty_like(fwd)
        inv[fwd] = np.arange(n_cbps)
        for name, val in [("n_cpc", n_cpc), ("n_cbps", n_cbps), ("fwd", fwd), ("inv", inv)]:
            object.__setattr__(self, name, val)


def interleave(bits, spec: InterleaverSpec) -> np.ndarray:
    """Permute one coded block (last axis must be n_cbps)."""
    arr = np.asarray(bits)
    if arr.shape[-1] != spec.n_cbps:
        raise ValueError(f"expected {spec.n_cbps} bits for {spec.modulation}, got {arr.shape[-1]}")
    out = np.empty_like(arr)
    out[..., spec.fwd] = arr
    return out


def deinterleave(bits, spec: InterleaverSpec) -> np.ndarray:
    """Exact inverse of interleave."""
    arr = np.asarray(bits)
    if arr.shape[-1] != spec.n_cbps:
        raise ValueError(f"expected {spec.n_cbps} bits for {spec.modulation}, got {arr.shape[-1]}")
    out = np.empty_like(arr)
    out[..., spec.inv] = arr
    return out
