"""End-to-end transmitter/receiver chains for the mandatory coding profiles.

Per OFDM symbol the transmit pipeline is: randomize -> RS encode ->
convolutional encode + puncture -> interleave -> map -> subcarrier
assembly + IFFT -> cyclic prefix.  One RS/CC block fills exactly one
OFDM symbol, so the seven table rows tile the 192 data subcarriers with
no tail-bit expansion; the convolutional trellis is truncated (starts in
state 0, best-end-state traceback) rather than zero-flushed.

The receiver reverses the chain with zero-forcing equalization from
either perfect channel knowledge or least-squares pilot estimates
interpolated linearly across the data bins.
"""

from dataclasses import dataclass

import numpy as np

from . import conv_codec, mapper, ofdm, scrambler
from .bits import bits_to_bytes, bytes_to_bits
from .channel import ChannelRealization
from .interleaver import InterleaverSpec, deinterleave, interleave
from .rs_codec import RsProfile, rs_decode_blocks, rs_encode_blocks

EQ_NULL_THRESHOLD = 1e-12


@dataclass(frozen=True)
class CodingProfile:
    """One row of the mandatory channel-coding table."""

    modulation: str
    overall_rate: str
    uncoded_bytes: int
    coded_bytes: int
    rs: RsProfile
    cc_rate: str


CODING_TABLE = (
    CodingProfile("bpsk", "1/2", 12, 24, RsProfile(12, 12, 0), "1/2"),
    CodingProfile("qpsk", "1/2", 24, 48, RsProfile(32, 24, 4), "2/3"),
    CodingProfile("qpsk", "3/4", 36, 48, RsProfile(40, 36, 2), "5/6"),
    CodingProfile("16qam", "1/2", 48, 96, RsProfile(64, 48, 8), "2/3"),
    CodingProfile("16qam", "3/4", 72, 96, RsProfile(80, 72, 4), "5/6"),
    CodingProfile("64qam", "2/3", 96, 144, RsProfile(108, 96, 6), "3/4"),
    CodingProfile("64qam", "3/4", 108, 144, RsProfile(120, 108, 6), "5/6"),
)


def coding_profile(modulation: str, overall_rate: str) -> CodingProfile:
    """Table lookup; unknown pairs list the valid rows."""
    for row in CODING_TABLE:
        if row.modulation == modulation.lower() and row.overall_rate == overall_rate:
            return row
    rows = ", ".join(f"{r.modulation} {r.overall_rate}" for r in CODING_TABLE)
    raise ValueError(f"no coding-table row for {modulation} rate {overall_rate}; valid rows: {rows}")


@dataclass(frozen=True)
class LinkProfile:
    """Modulation + coding row (None = uncoded) + OFDM and estimation config."""

    modulation: str
    coding: CodingProfile | None
    ofdm: ofdm.OfdmParams
    estimation: str = "perfect"  # or "pilot_ls"

    def __post_init__(self):
        if self.estimation not in ("perfect", "pilot_ls"):
            raise ValueError(f"estimation must be 'perfect' or 'pilot_ls', got {self.estimation!r}")
        if self.coding is not None and self.coding.modulation != self.modulation:
            raise ValueError(f"coding row {self.coding} does not match modulation {self.modulation}")

    @property
    def constellation(self):
        return mapper.constellation(self.modulation)

    @property
    def block_bytes(self) -> int:
        """Payload bytes carried by one OFDM symbol."""
        if self.coding is not None:
            return self.coding.uncoded_bytes
        return ofdm.N_DATA * self.constellation.bits_per_symbol // 8

    @property
    def code_rate(self) -> float:
        if self.coding is None:
            return 1.0
        return self.coding.uncoded_bytes / self.coding.coded_bytes

    @property
    def interleaver(self) -> InterleaverSpec:
        return InterleaverSpec(self.modulation)


def make_profile(modulation: str, overall_rate: str | None, g: str = "1/4",
                 bandwidth_hz: float = 5e6, estimation: str = "perfect") -> LinkProfile:
    """Convenience constructor; overall_rate=None selects the uncoded chain."""
    coding = None if overall_rate is None else coding_profile(modulation, overall_rate)
    return LinkProfile(modulation.lower(), coding, ofdm.OfdmParams(g=g, bandwidth_hz=bandwidth_hz), estimation)


def _payload_blocks(payload, profile: LinkProfile) -> np.ndarray:
    data = np.asarray(payload, dtype=np.uint8)
    bb = profile.block_bytes
    if data.ndim == 1:
        if data.size == 0 or data.size % bb != 0:
            raise ValueError(
                f"payload of {data.size} bytes does not tile the {bb}-byte "
                f"block of this profile; pad to a multiple of {bb}"
            )
        data = data.reshape(-1, bb)
    elif data.shape[1] != bb:
        raise ValueError(f"expected {bb}-byte blocks, got {data.shape[1]}")
    return data


def encode_blocks(blocks: np.ndarray, profile: LinkProfile, scramble_seed: int) -> np.ndarray:
    """Payload blocks (B, block_bytes) -> interleaved coded bits (B, n_cbps)."""
    bits = scrambler.scramble(bytes_to_bits(blocks), scramble_seed)
    if profile.coding is None:
        coded = bits
    else:
        rs_out = rs_encode_blocks(bits_to_bytes(bits), profile.coding.rs)
        cc_in = bytes_to_bits(rs_out)
        coded = conv_codec.puncture(conv_codec.conv_encode(cc_in, terminate=False), profile.coding.cc_rate)
        coded = interleave(coded, profile.interleaver)
    return coded


def transmit_blocks(blocks: np.ndarray, profile: LinkProfile, scramble_seed: int = scrambler.DEFAULT_SEED) -> np.ndarray:
    """Payload blocks (B, block_bytes) -> time-domain bursts (B, 256+cp)."""
    coded = encode_blocks(blocks, profile, scramble_seed)
    syms = mapper.map_bits(coded, profile.constellation)
    freq = ofdm.assemble(syms, np.broadcast_to(profile.ofdm.pilot_values, syms.shape[:-1] + (ofdm.N_PILOT,)), profile.ofdm)
    return ofdm.add_cp(ofdm.ifft256(freq), profile.ofdm)


def transmit(payload, profile: LinkProfile, scramble_seed: int = scrambler.DEFAULT_SEED) -> np.ndarray:
    """Encode a payload (multiple of block_bytes) to a flat sample stream."""
    blocks = _payload_blocks(payload, profile)
    return transmit_blocks(blocks, profile, scramble_seed).reshape(-1)


def equalize(bins, h_freq, noise_var):
    """Zero-forcing per bin.

    Returns (equalized bins, per-bin effective noise variance, erasure
    mask).  Bins with |h| below threshold are flagged as erasures instead
    of being divided, so the decoder sees zero-information metrics there.
    """
    h = np.asarray(h_freq, dtype=complex)
    y = np.asarray(bins, dtype=complex)
    if h.shape[-1] != y.shape[-1]:
        raise ValueError(f"bin count {y.shape[-1]} does not match channel response {h.shape[-1]}")
    dead = np.abs(h) < EQ_NULL_THRESHOLD
    h_safe = np.where(dead, 1.0, h)
    eq = np.where(dead, 0.0, y / h_safe)
    nv = np.asarray(noise_var, dtype=float)
    if nv.ndim == 1 and y.ndim == 2 and nv.shape[0] == y.shape[0]:
        nv = nv[:, None]  # one variance per burst row
    nv_eq = np.where(dead, np.inf, np.broadcast_to(nv, eq.shape) / np.abs(h_safe) ** 2)
    return eq, nv_eq, dead


def _pilot_interp_matrix() -> np.ndarray:
    """Linear interpolation weights from the 8 pilot offsets to the 192
    data offsets, extrapolating from the two nearest pilots at the band
    edges (data extends past the outermost pilots)."""
    pilots = ofdm.PILOT_OFFSETS.astype(float)
    w = np.zeros((ofdm.N_DATA, ofdm.N_PILOT))
    for row, off in enumerate(ofdm.DATA_OFFSETS.astype(float)):
        i = int(np.clip(np.searchsorted(pilots, off) - 1, 0, ofdm.N_PILOT - 2))
        lo, hi = pilots[i], pilots[i + 1]
        t = (off - lo) / (hi - lo)
        w[row, i] = 1.0 - t
        w[row, i + 1] = t
    return w


_PILOT_INTERP = _pilot_interp_matrix()


def _estimate_freq_response(freq, profile: LinkProfile) -> np.ndarray:
    """LS pilot estimates, linearly interpolated over the data offsets."""
    p = profile.ofdm
    _, pilots_rx = ofdm.disassemble(freq, p)
    h_pilot = pilots_rx / p.pilot_values
    return h_pilot @ _PILOT_INTERP.T


def receive_blocks(bursts: np.ndarray, profile: LinkProfile, h_freq, noise_var,
                   scramble_seed: int = scrambler.DEFAULT_SEED, shared_channel: bool = False) -> np.ndarray:
    """Burst batch (B, 256+cp) -> decoded payload blocks (B, block_bytes).

    h_freq: (B or broadcastable, 256) channel response for perfect
    estimation, or None in pilot_ls mode.  noise_var: scalar or (B,).
    shared_channel: the rows ride one quasi-static realization, so pilot
    estimates may be averaged across them (used for multi-symbol bursts).
    """
    p = profile.ofdm
    freq = ofdm.fft256(ofdm.remove_cp(bursts, p))
    data_rx, _ = ofdm.disassemble(freq, p)
    if profile.estimation == "perfect":
        if h_freq is None:
            raise ValueError("perfect estimation requires the channel realization (h_freq)")
        h_data = np.asarray(h_freq, dtype=complex)[..., p.data_bins]
    else:
        h_data = _estimate_freq_response(freq, profile)
        if shared_channel and h_data.ndim > 1:
            h_data = h_data.mean(axis=0, keepdims=True) + np.zeros_like(h_data)

    nv = np.asarray(noise_var, dtype=float)
    nv = np.where(nv > 0, nv, 1.0)  # noiseless loopback: any positive scale works
    eq, nv_eq, dead = equalize(data_rx, h_data, nv)

    c = profile.constellation
    if profile.coding is None:
        bits = mapper.demap_hard(eq, c)
    else:
        llr = mapper.demap_soft(eq, c, np.where(dead, 1.0, nv_eq))
        dead_bits = np.repeat(dead, c.bits_per_symbol, axis=-1)
        llr = np.where(dead_bits, 0.0, llr)  # erased bins carry no information
        llr = deinterleave(llr, profile.interleaver)
        cc_bits = conv_codec.viterbi_decode(llr, profile.coding.cc_rate, terminated=False)
        rs_words = bits_to_bytes(cc_bits)
        msgs, _, _ = rs_decode_blocks(rs_words, profile.coding.rs)
        bits = bytes_to_bits(msgs)
    return bits_to_bytes(scrambler.descramble(bits, scramble_seed))


def receive(samples, profile: LinkProfile, h_known: ChannelRealization | None = None,
            noise_var=0.0, scramble_seed: int = scrambler.DEFAULT_SEED) -> np.ndarray:
    """Decode a flat sample stream of whole OFDM symbols back to payload bytes."""
    arr = np.asarray(samples)
    sym_len = profile.ofdm.symbol_len
    if arr.size % sym_len != 0:
        raise ValueError(f"sample count {arr.size} is not a multiple of the {sym_len}-sample symbol")
    bursts = arr.reshape(-1, sym_len)
    h_freq = None
    if profile.estimation == "perfect":
        if h_known is None:
            raise ValueError("perfect estimation requires h_known")
        h_freq = h_known.freq_response(ofdm.N_FFT)[None, :]
    return receive_blocks(bursts, profile, h_freq, noise_var, scramble_seed, shared_channel=True).reshape(-1)
