"""Gray-coded constellation mapping and hard/soft demapping.

BPSK maps bit 0 to -1 and bit 1 to +1.  The QAM schemes use per-axis
reflected Gray labels with the I bits ahead of the Q bits and bit 0 on
the positive side, so QPSK 00 -> (+1+1j)/sqrt(2).  Normalization keeps
mean symbol energy at exactly 1 (1/sqrt(2), 1/sqrt(10), 1/sqrt(42)).

Soft metrics are max-log LLRs, positive favoring bit 0, computed per axis
(exact for these separable constellations).  noise_var may be a scalar or
a per-symbol array, e.g. after zero-forcing equalization.
"""

from dataclasses import dataclass

import numpy as np


def _gray(i: np.ndarray) -> np.ndarray:
    return i ^ (i >> 1)


def _axis_tables(m: int):
    """PAM levels indexed by m-bit Gray label; level 2^m-1-2i for label gray(i)."""
    idx = np.arange(1 << m)
    levels_by_label = np.empty(1 << m)
    levels_by_label[_gray(idx)] = (1 << m) - 1 - 2 * idx
    return levels_by_label


@dataclass(frozen=True)
class Constellation:
    scheme: str
    bits_per_symbol: int
    points: np.ndarray  # indexed by the bit-pattern label
    scale: float
    i_bits: int
    q_bits: int
    i_levels: np.ndarray  # unnormalized PAM level per I label
    q_levels: np.ndarray


def _build(scheme: str) -> Constellation:
    if scheme == "bpsk":
        points = np.array([-1.0 + 0j, 1.0 + 0j])
        return Constellation("bpsk", 1, points, 1.0, 1, 0, np.array([-1.0, 1.0]), np.array([0.0]))
    n_bits = {"qpsk": 2, "16qam": 4, "64qam": 6}[scheme]
    m = n_bits // 2
    i_levels = _axis_tables(m)
    q_levels = _axis_tables(m)
    grid = i_levels[:, None] + 1j * q_levels[None, :]
    scale = 1.0 / np.sqrt(np.mean(np.abs(grid) ** 2))
    labels = (np.arange(1 << m)[:, None] << m) | np.arange(1 << m)[None, :]
    points = np.empty(1 << n_bits, dtype=complex)
    points[labels.ravel()] = (grid * scale).ravel()
    return Constellation(scheme, n_bits, points, float(scale), m, m, i_levels, q_levels)


_CONSTELLATIONS = {s: _build(s) for s in ("bpsk", "qpsk", "16qam", "64qam")}


def constellation(scheme: str) -> Constellation:
    try:
        return _CONSTELLATIONS[scheme.lower()]
    except KeyError:
        raise ValueError(f"unknown modulation {scheme!r}") from None


def map_bits(bits, c: Constellation) -> np.ndarray:
    """Map a bit block (last axis, multiple of bits_per_symbol) to symbols."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.shape[-1] % c.bits_per_symbol != 0:
        raise ValueError(f"bit count {arr.shape[-1]} not a multiple of {c.bits_per_symbol} for {c.scheme}")
    grouped = arr.reshape(arr.shape[:-1] + (-1, c.bits_per_symbol))
    weights = 1 << np.arange(c.bits_per_symbol - 1, -1, -1)
    labels = (grouped * weights).sum(axis=-1)
    return c.points[labels]


def _axis_metrics(vals: np.ndarray, levels: np.ndarray, scale: float, noise_var) -> np.ndarray:
    """Max-log LLRs for one real axis.

    vals: (..., n) received coordinate; levels: PAM level per m-bit label.
    Returns (..., n, m) metrics, s.t. positive favors bit 0, bit 0 of the
    label being the most significant.
    """
    m = int(np.log2(len(levels)))
    d2 = (vals[..., None] - levels[None, :] * scale) ** 2  # (..., n, 2^m)
    llr = np.empty(vals.shape + (m,))
    labels = np.arange(len(levels))
    for b in range(m):
        sel1 = (labels >> (m - 1 - b)) & 1 == 1
        d1 = d2[..., sel1].min(axis=-1)
        d0 = d2[..., ~sel1].min(axis=-1)
        llr[..., b] = d1 - d0
    if np.ndim(noise_var) > 0:
        llr /= np.asarray(noise_var)[..., None]
    else:
        llr /= noise_var
    return llr


def demap_soft(symbols, c: Constellation, noise_var=1.0) -> np.ndarray:
    """Per-bit max-log LLRs (last axis = bits), positive favoring bit 0."""
    if np.any(np.asarray(noise_var) <= 0):
        raise ValueError("noise_var must be positive")
    sym = np.asarray(symbols, dtype=complex)
    llr_i = _axis_metrics(sym.real, c.i_levels, c.scale, noise_var)
    if c.q_bits == 0:
        out = llr_i
    else:
        llr_q = _axis_metrics(sym.imag, c.q_levels, c.scale, noise_var)
        out = np.concatenate([llr_i, llr_q], axis=-1)
    return out.reshape(sym.shape[:-1] + (-1,))


def demap_hard(symbols, c: Constellation) -> np.ndarray:
    """Nearest-point decisions; on boundary ties the lower label wins."""
    sym = np.asarray(symbols, dtype=complex)

    def axis_bits(vals, levels):
        m = int(np.log2(len(levels)))
        d2 = (vals[..., None] - levels[None, :] * c.scale) ** 2
        label = np.argmin(d2, axis=-1)  # first minimum = lowest label
        shifts = np.arange(m - 1, -1, -1)
        return (label[..., None] >> shifts) & 1

    out = axis_bits(sym.real, c.i_levels)
    if c.q_bits:
        out = np.concatenate([out, axis_bits(sym.imag, c.q_levels)], axis=-1)
    return out.reshape(sym.shape[:-1] + (-1,)).astype(np.uint8)
