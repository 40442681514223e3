"""256-point OFDM: subcarrier allocation, FFT/IFFT kernel, cyclic prefix.

Fixed-WiMAX layout: 192 data + 8 pilot + 56 null subcarriers (DC, 28 low
and 27 high guards).  Pilots sit at frequency offsets +/-88, +/-63,
+/-38, +/-13; data fills the remaining offsets in ascending order.

The transform pair is the in-repo radix-2 kernel (no numpy.fft), unitary
in both directions (1/16 scaling), so fft256(ifft256(x)) == x and energy
is conserved.  Offsets map to natural FFT bins as offset mod 256.
"""

from dataclasses import dataclass, field

import numpy as np

N_FFT = 256
N_DATA = 192
N_PILOT = 8
N_NULL = 56
CP_RATIOS = ("1/32", "1/16", "1/8", "1/4")
PILOT_OFFSETS = np.array([-88, -63, -38, -13, 13, 38, 63, 88])
GUARD_OFFSETS = np.concatenate([np.arange(-128, -100), np.arange(101, 128)])
NULL_OFFSETS = np.sort(np.concatenate([GUARD_OFFSETS, [0]]))
DATA_OFFSETS = np.array(
    sorted(set(range(-100, 101)) - {0} - set(PILOT_OFFSETS.tolist()))
)
SAMPLING_FACTOR = 8.0 / 7.0  # Fs = factor * bandwidth for these profiles

# ---- radix-2 transform kernel -------------------------------------------

_BITREV = np.array([int(f"{i:08b}"[::-1], 2) for i in range(N_FFT)])
_TWIDDLES = {
    m: np.exp(-2j * np.pi * np.arange(m // 2) / m) for m in (2, 4, 8, 16, 32, 64, 128, 256)
}


def _fft_raw(x: np.ndarray) -> np.ndarray:
    """Unscaled decimation-in-time FFT over the last axis (length 256)."""
    y = np.asarray(x, dtype=complex)[..., _BITREV]
    lead = y.shape[:-1]
    m = 2
    while m <= N_FFT:
        half = m // 2
        y = y.reshape(lead + (N_FFT // m, m))
        even = y[..., :half]
        odd = y[..., half:] * _TWIDDLES[m]
        y = np.concatenate([even + odd, even - odd], axis=-1)
        m *= 2
    return y.reshape(lead + (N_FFT,))


def fft256(x) -> np.ndarray:
    """Unitary forward transform of 256 samples (last axis)."""
    arr = np.asarray(x)
    if arr.shape[-1] != N_FFT:
        raise ValueError(f"expected {N_FFT} samples, got {arr.shape[-1]}")
    return _fft_raw(arr) / 16.0


def ifft256(x) -> np.ndarray:
    """Unitary inverse transform; fft256(ifft256(x)) == x."""
    arr = np.asarray(x)
    if arr.shape[-1] != N_FFT:
        raise ValueError(f"expected {N_FFT} bins, got {arr.shape[-1]}")
    return np.conj(_fft_raw(np.conj(arr))) / 16.0


# ---- subcarrier allocation ----------------------------------------------


@dataclass(frozen=True)
class OfdmParams:
    """Subcarrier maps plus cyclic-prefix and sampling configuration."""

    g: str = "1/4"
    bandwidth_hz: float = 5e6
    sampling_factor: float = SAMPLING_FACTOR
    pilot_values: np.ndarray = None
    cp_len: int = field(init=False)
    sample_rate: float = field(init=False)
    data_bins: np.ndarray = field(init=False, repr=False)
    pilot_bins: np.ndarray = field(init=False, repr=False)
    null_bins: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.g not in CP_RATIOS:
            raise ValueError(f"cyclic-prefix ratio must be one of {CP_RATIOS}, got {self.g!r}")
        num, den = self.g.split("/")
        cp_len = N_FFT * int(num) // int(den)
        pilots = np.ones(N_PILOT) if self.pilot_values is None else np.asarray(self.pilot_values, dtype=complex)
        if pilots.shape != (N_PILOT,):
            raise ValueError(f"expected {N_PILOT} pilot values")
        object.__setattr__(self, "pilot_values", pilots)
        object.__setattr__(self, "cp_len", cp_len)
        object.__setattr__(self, "sample_rate", self.sampling_factor * self.bandwidth_hz)
        object.__setattr__(self, "data_bins", DATA_OFFSETS % N_FFT)
        object.__setattr__(self, "pilot_bins", PILOT_OFFSETS % N_FFT)
        object.__setattr__(self, "null_bins", NULL_OFFSETS % N_FFT)

    @property
    def symbol_len(self) -> int:
        return N_FFT + self.cp_len


def assemble(data_syms, pilot_syms, p: OfdmParams) -> np.ndarray:
    """Place 192 data and 8 pilot values into a 256-bin spectrum (last axis)."""
    d = np.asarray(data_syms, dtype=complex)
    q = np.asarray(pilot_syms, dtype=complex)
    if d.shape[-1] != N_DATA:
        raise ValueError(f"expected {N_DATA} data symbols, got {d.shape[-1]}")
    if q.shape[-1] != N_PILOT:
        raise ValueError(f"expected {N_PILOT} pilot symbols, got {q.shape[-1]}")
    freq = np.zeros(d.shape[:-1] + (N_FFT,), dtype=complex)
    freq[..., p.data_bins] = d
    freq[..., p.pilot_bins] = q
    return freq


def disassemble(freq, p: OfdmParams):
    """Extract (data, pilot) values from a 256-bin spectrum."""
    arr = np.asarray(freq)
    if arr.shape[-1] != N_FFT:
        raise ValueError(f"expected {N_FFT} bins, got {arr.shape[-1]}")
    return arr[..., p.data_bins], arr[..., p.pilot_bins]


def add_cp(time_syms, p: OfdmParams) -> np.ndarray:
    """Prepend the last cp_len samples of each 256-sample symbol."""
    arr = np.asarray(time_syms)
    return np.concatenate([arr[..., N_FFT - p.cp_len :], arr], axis=-1)


def remove_cp(samples, p: OfdmParams) -> np.ndarray:
    """Drop the cyclic prefix from (..., 256+cp_len) sample blocks."""
    return np.asarray(samples)[..., p.cp_len :]
