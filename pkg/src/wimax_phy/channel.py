"""AWGN and SUI tapped-delay-line channels for time-domain sample bursts.

The six SUI models (terrain C: sui1/2, B: sui3/4, A: sui5/6) are loaded
from data/sui_taps.txt; powers are rescaled so the total mean tap power
is 1.  Fading is quasi-static: one realization per burst, independent
across bursts.  The doppler class is carried for reference only and does
not shape the fading in this version; with burst-averaged BER as the only
output there is no coherence-time effect to represent.

Tap delays are rounded to the nearest sample at the configured rate.
Noise is calibrated per burst against the mean power of the received
(faded) signal over the whole burst, CP included, so every burst meets
the requested SNR exactly; fading then acts through the frequency
selectivity of the taps rather than through overall burst level.
"""

import hashlib
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

TERRAIN_BY_MODEL = {"sui1": "C", "sui2": "C", "sui3": "B", "sui4": "B", "sui5": "A", "sui6": "A"}


@dataclass(frozen=True)
class Tap:
    delay_us: float
    power_db: float
    rician_k: float  # linear; inf = deterministic tap


@dataclass(frozen=True)
class ChannelModel:
    name: str
    terrain: str | None
    doppler: str | None
    taps: tuple[Tap, ...]

    @property
    def linear_powers(self) -> np.ndarray:
        p = np.array([10.0 ** (t.power_db / 10.0) for t in self.taps])
        return p / p.sum()


AWGN = ChannelModel("awgn", None, None, (Tap(0.0, 0.0, math.inf),))


def _tap_table_text() -> str:
    return resources.files("wimax_phy").joinpath("data/sui_taps.txt").read_text()


def tap_table_checksum() -> str:
    """SHA-256 of the tap-table file, recorded in run manifests."""
    return hashlib.sha256(_tap_table_text().encode()).hexdigest()


def load_sui_models() -> dict[str, ChannelModel]:
    """Parse the tap-table file into the six SUI models, with validation."""
    models = {}
    for line in _tap_table_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, terrain, doppler, *tap_fields = line.split()
        taps = []
        for f in tap_fields:
            delay, power, k = (float(v) for v in f.split(":"))
            taps.append(Tap(delay, power, k))
        if len(taps) != 3:
            raise ValueError(f"{name}: expected 3 taps, got {len(taps)}")
        delays = [t.delay_us for t in taps]
        if delays != sorted(delays):
            raise ValueError(f"{name}: tap delays must be nondecreasing")
        if TERRAIN_BY_MODEL.get(name) != terrain:
            raise ValueError(f"{name}: terrain {terrain!r} contradicts the SUI terrain map")
        models[name] = ChannelModel(name, terrain, doppler, tuple(taps))
    if sorted(models) != sorted(TERRAIN_BY_MODEL):
        raise ValueError(f"tap table defines {sorted(models)}, expected {sorted(TERRAIN_BY_MODEL)}")
    return models


_SUI = None


def get_channel_model(name: str) -> ChannelModel:
    """Look up 'awgn' or 'sui1'..'sui6'."""
    global _SUI
    if name == "awgn":
        return AWGN
    if _SUI is None:
        _SUI = load_sui_models()
    try:
        return _SUI[name]
    except KeyError:
        valid = ["awgn"] + sorted(TERRAIN_BY_MODEL)
        raise ValueError(f"unknown channel {name!r}; valid: {', '.join(valid)}") from None


@dataclass(frozen=True)
class ChannelRealization:
    """Quasi-static complex tap gains with integer sample delays."""

    gains: np.ndarray
    sample_delays: np.ndarray

    def freq_response(self, n_fft: int = 256) -> np.ndarray:
        k = np.arange(n_fft)
        return sum(
            g * np.exp(-2j * np.pi * k * int(d) / n_fft)
            for g, d in zip(self.gains, self.sample_delays)
        )


def draw_realization(model: ChannelModel, rng: np.random.Generator, sample_rate: float) -> ChannelRealization:
    """Draw per-tap Rician gains; deterministic LOS part plus complex scatter."""
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    powers = model.linear_powers
    gains = np.empty(len(model.taps), dtype=complex)
    delays = np.empty(len(model.taps), dtype=np.int64)
    for i, (tap, p) in enumerate(zip(model.taps, powers)):
        k = tap.rician_k
        if math.isinf(k):
            los, scatter_var = math.sqrt(p), 0.0
        else:
            los = math.sqrt(p * k / (k + 1.0))
            scatter_var = p / (k + 1.0)
        scatter = 0.0
        if scatter_var > 0:
            re, im = rng.standard_normal(2)
            scatter = math.sqrt(scatter_var / 2.0) * (re + 1j * im)
        gains[i] = los + scatter
        delays[i] = round(tap.delay_us * 1e-6 * sample_rate)
    return ChannelRealization(gains, delays)


def apply_taps(x: np.ndarray, h: ChannelRealization) -> np.ndarray:
    """Faded signal: sum of delayed, scaled copies, truncated to len(x)."""
    arr = np.asarray(x, dtype=complex)
    out = np.zeros_like(arr)
    n = arr.shape[-1]
    for g, d in zip(h.gains, h.sample_delays):
        d = int(d)
        if d < n:
            out[..., d:] += g * arr[..., : n - d]
    return out


def apply_channel(x, h: ChannelRealization, snr_db: float, rng: np.random.Generator):
    """Fade a burst and add calibrated complex AWGN.

    Returns (received samples, per-sample noise variance).  The noise
    variance is mean(|faded|^2) / 10^(snr_db/10), making the ratio of
    received signal power to noise power exactly the request for every
    burst; snr_db = inf adds no noise.
    """
    arr = np.asarray(x, dtype=complex)
    faded = apply_taps(arr, h)
    if np.isinf(snr_db):
        return faded, 0.0
    p_sig = float(np.mean(np.abs(faded) ** 2))
    noise_var = p_sig / (10.0 ** (snr_db / 10.0))
    noise = rng.standard_normal(arr.shape) + 1j * rng.standard_normal(arr.shape)
    return faded + np.sqrt(noise_var / 2.0) * noise, noise_var


def ebn0_to_snr_db(ebn0_db: float, bits_per_symbol: int, code_rate: float, occupancy: float = 200.0 / 256.0) -> float:
    """Convert per-information-bit Eb/N0 to the burst SNR used by apply_channel.

    SNR = Eb/N0 * bits_per_symbol * code_rate * occupancy: the occupancy
    term (200 of 256 bins carrying energy) makes the per-data-bin Es/N0
    equal Eb/N0 * bits_per_symbol * code_rate, so uncoded BPSK lands on
    the Q(sqrt(2 Eb/N0)) reference curve.
    """
    return ebn0_db + 10.0 * math.log10(bits_per_symbol * code_rate * occupancy)


def snr_to_ebn0_db(snr_db: float, bits_per_symbol: int, code_rate: float, occupancy: float = 200.0 / 256.0) -> float:
    return snr_db - 10.0 * math.log10(bits_per_symbol * code_rate * occupancy)
