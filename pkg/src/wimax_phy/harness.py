"""Monte-Carlo BER estimation over SNR grids.

Each burst is one OFDM symbol with its own payload, channel realization
and noise, drawn from a generator seeded by (master_seed, snr_index,
burst_index).  Outcomes are therefore reproducible bit-for-bit and do
not depend on the stopping rule or on how bursts are batched.

A point stops once min_errors bit errors accumulate or max_bits payload
bits have been simulated; errors are counted on information bits, before
scrambling versus after descrambling.
"""

from dataclasses import dataclass, field

import numpy as np

from . import link, ofdm
from .channel import ChannelModel, apply_taps, draw_realization, ebn0_to_snr_db

DEFAULT_MIN_ERRORS = 100
DEFAULT_MAX_BITS = 10_000_000
_CHUNK = 128


@dataclass(frozen=True)
class Experiment:
    profile: link.LinkProfile
    channel: ChannelModel
    snr_grid: tuple = ()
    snr_axis: str = "snr"  # grid is channel SNR or per-info-bit Eb/N0
    min_errors: int = DEFAULT_MIN_ERRORS
    max_bits: int = DEFAULT_MAX_BITS
    master_seed: int = 0

    def __post_init__(self):
        grid = tuple(float(v) for v in self.snr_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("snr_grid must be strictly increasing")
        if self.snr_axis not in ("snr", "ebn0"):
            raise ValueError(f"snr_axis must be 'snr' or 'ebn0', got {self.snr_axis!r}")
        if self.min_errors < 1:
            raise ValueError("min_errors must be at least 1")
        if self.max_bits < 8 * self.profile.block_bytes:
            raise ValueError("max_bits must cover at least one burst")
        object.__setattr__(self, "snr_grid", grid)


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    bits: int
    bit_errors: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits

    @property
    def stderr(self) -> float:
        return float(np.sqrt(self.ber * (1.0 - self.ber) / self.bits))


@dataclass(frozen=True)
class BerCurve:
    points: tuple[BerPoint, ...] = field(default_factory=tuple)


def _channel_snr_db(e: Experiment, grid_value: float) -> float:
    if e.snr_axis == "snr":
        return grid_value
    return ebn0_to_snr_db(grid_value, e.profile.constellation.bits_per_symbol, e.profile.code_rate)


def _run_chunk(e: Experiment, snr_db: float, snr_index: int, first_burst: int, n_bursts: int):
    """Simulate bursts [first, first+n) in one vectorized pass.

    Returns (payload blocks, decoded blocks); randomness is drawn
    per burst in a fixed order (payload, taps, noise) from that burst's
    own generator.
    """
    prof = e.profile
    bb = prof.block_bytes
    sym_len = prof.ofdm.symbol_len
    rngs = [
        np.random.default_rng(np.random.SeedSequence((e.master_seed, snr_index, b)))
        for b in range(first_burst, first_burst + n_bursts)
    ]
    payloads = np.stack([r.integers(0, 256, bb, dtype=np.uint8) for r in rngs])
    tx = link.transmit_blocks(payloads, prof)

    snr_lin = 10.0 ** (snr_db / 10.0) if np.isfinite(snr_db) else np.inf
    rx = np.empty((n_bursts, sym_len), dtype=complex)
    h_freq = np.empty((n_bursts, ofdm.N_FFT), dtype=complex)
    noise_var = np.zeros(n_bursts)
    for i, r in enumerate(rngs):
        h = draw_realization(e.channel, r, prof.ofdm.sample_rate)
        faded = apply_taps(tx[i], h)
        if np.isfinite(snr_db):
            noise_var[i] = float(np.mean(np.abs(faded) ** 2)) / snr_lin
            noise = r.standard_normal(sym_len) + 1j * r.standard_normal(sym_len)
            faded = faded + np.sqrt(noise_var[i] / 2.0) * noise
        rx[i] = faded
        h_freq[i] = h.freq_response(ofdm.N_FFT)

    decoded = link.receive_blocks(rx, prof, h_freq if prof.estimation == "perfect" else None, noise_var)
    return payloads, decoded


def iter_burst_errors(e: Experiment, snr_index: int, max_bursts: int | None = None):
    """Yield (bits, bit_errors) per burst, in burst order.

    Bursts are simulated in batches, but each outcome depends only on its
    own seed, so the sequence is invariant to batching and to max_bursts.
    """
    snr_db = _channel_snr_db(e, e.snr_grid[snr_index])
    bits_per_burst = 8 * e.profile.block_bytes
    burst = 0
    while max_bursts is None or burst < max_bursts:
        chunk = _CHUNK if max_bursts is None else min(_CHUNK, max_bursts - burst)
        payloads, decoded = _run_chunk(e, snr_db, snr_index, burst, chunk)
        diff = np.bitwise_xor(payloads, decoded)
        per_burst = np.unpackbits(diff, axis=1).sum(axis=1)
        for n_err in per_burst:
            yield bits_per_burst, int(n_err)
        burst += chunk


def run_point(e: Experiment, snr_index: int) -> BerPoint:
    """Accumulate bursts until min_errors or the max_bits budget is reached."""
    bits_per_burst = 8 * e.profile.block_bytes
    bits = errors = 0
    for nb, ne in iter_burst_errors(e, snr_index, max_bursts=e.max_bits // bits_per_burst):
        bits += nb
        errors += ne
        if errors >= e.min_errors:
            break
    return BerPoint(e.snr_grid[snr_index], bits, errors)


def run_curve(e: Experiment) -> BerCurve:
    return BerCurve(tuple(run_point(e, i) for i in range(len(e.snr_grid))))
