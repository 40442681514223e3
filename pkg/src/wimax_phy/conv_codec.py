"""Rate-1/2 K=7 convolutional code: encoder, puncturing, soft Viterbi.

Generators G1 = 171 octal (X output) and G2 = 133 octal (Y output), taps
applied MSB-first to [current input, 6 delayed bits].  Coded bits are
interleaved X0,Y0,X1,Y1,...  Puncturing to 2/3, 3/4 and 5/6 keeps the
sequences X1Y1Y2, X1Y1Y2X3 and X1Y1Y2X3Y4X5 per period; the depuncturer
restores mother-rate length with zero-metric erasures at dropped slots.

Soft metrics are LLR-like reals, positive favoring bit 0.  The decoder
maximizes the correlation metric sum(L_i * (1 - 2*c_i)) over the trellis,
starting from state 0.  Terminated blocks (6 zero flush bits) trace back
from state 0; unterminated blocks from the best end state, ties broken
deterministically toward the 0 branch / lowest state.
"""

import numpy as np

G1_TAPS = np.array([1, 1, 1, 1, 0, 0, 1], dtype=np.uint8)  # 171 octal
G2_TAPS = np.array([1, 0, 1, 1, 0, 1, 1], dtype=np.uint8)  # 133 octal
MEMORY = 6
N_STATES = 64

# keep-masks over the X0,Y0,X1,Y1,... stream, one entry per rate
PUNCTURE_MASKS = {
    "1/2": np.array([1, 1], dtype=bool),
    "2/3": np.array([1, 1, 0, 1], dtype=bool),
    "3/4": np.array([1, 1, 0, 1, 1, 0], dtype=bool),
    "5/6": np.array([1, 1, 0, 1, 1, 0, 0, 1, 1, 0], dtype=bool),
}


def conv_encode(bits, terminate: bool = True) -> np.ndarray:
    """Encode a bit block (last axis); output X/Y interleaved.

    With terminate=True six zero flush bits return the encoder to state 0
    and the output has 2*(L+6) bits; without, exactly 2L (truncated
    trellis, used where block budgets leave no room for tail bits).
    """
    arr = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    nblk, length = arr.shape
    out_len = length + MEMORY if terminate else length
    x = np.zeros((nblk, out_len), dtype=np.uint8)
    y = np.zeros((nblk, out_len), dtype=np.uint8)
    # tap accumulation: out[t] ^= bits[t-d] for every set tap d
    for d in np.nonzero(G1_TAPS)[0]:
        if d < out_len:
            hi = min(out_len, length + d)
            x[:, d:hi] ^= arr[:, : hi - d]
    for d in np.nonzero(G2_TAPS)[0]:
        if d < out_len:
            hi = min(out_len, length + d)
            y[:, d:hi] ^= arr[:, : hi - d]
    coded = np.empty((nblk, 2 * out_len), dtype=np.uint8)
    coded[:, 0::2] = x
    coded[:, 1::2] = y
    return coded if np.asarray(bits).ndim > 1 else coded[0]


def puncture(coded, rate: str) -> np.ndarray:
    """Drop masked positions of a mother-rate stream (last axis)."""
    mask = PUNCTURE_MASKS[rate]
    arr = np.asarray(coded)
    if arr.shape[-1] % len(mask) != 0:
        raise ValueError(
            f"coded length {arr.shape[-1]} not a multiple of the rate-{rate} "
            f"puncture period {len(mask)}; pad to the profile block size"
        )
    reps = arr.shape[-1] // len(mask)
    return arr[..., np.tile(mask, reps)]


def depuncture(vals, rate: str, fill=0.0) -> np.ndarray:
    """Re-expand a punctured stream, placing `fill` (erasure) at dropped slots."""
    mask = PUNCTURE_MASKS[rate]
    arr = np.asarray(vals)
    keep = int(mask.sum())
    if arr.shape[-1] % keep != 0:
        raise ValueError(f"punctured length {arr.shape[-1]} not a multiple of {keep} for rate {rate}")
    reps = arr.shape[-1] // keep
    out = np.full(arr.shape[:-1] + (reps * len(mask),), fill, dtype=np.result_type(arr, type(fill)))
    out[..., np.tile(mask, reps)] = arr
    return out


def _trellis():
    """Predecessors and output signs per new state; state packs newest bit at MSB."""
    ns = np.arange(N_STATES)
    u = ns >> 5
    p0 = (ns & 31) << 1
    p1 = p0 | 1
    reg0 = (u << 6) | p0
    reg1 = (u << 6) | p1

    def outs(reg):
        xb = np.zeros(N_STATES, dtype=np.int8)
        yb = np.zeros(N_STATES, dtype=np.int8)
        for d in range(7):
            bit = (reg >> (6 - d)) & 1
            if G1_TAPS[d]:
                xb ^= bit.astype(np.int8)
            if G2_TAPS[d]:
                yb ^= bit.astype(np.int8)
        return 1 - 2 * xb, 1 - 2 * yb  # +1 for coded 0, -1 for coded 1

    sx0, sy0 = outs(reg0)
    sx1, sy1 = outs(reg1)
    return p0, p1, (sx0, sy0), (sx1, sy1)


_P0, _P1, (_SX0, _SY0), (_SX1, _SY1) = _trellis()


def viterbi_decode(soft, rate: str = "1/2", terminated: bool = True) -> np.ndarray:
    """ML-decode punctured soft metrics (last axis) back to information bits.

    Accepts one block (1-D) or a batch (2-D, block per row).  Dropped
    positions are re-inserted as zero metrics before the trellis pass.
    """
    metrics = depuncture(np.asarray(soft, dtype=np.float64), rate, fill=0.0)
    arr = np.atleast_2d(metrics)
    if arr.shape[-1] % 2 != 0:
        raise ValueError(f"metric count {arr.shape[-1]} does not form X/Y pairs")
    nblk, nsteps = arr.shape[0], arr.shape[-1] // 2
    if terminated and nsteps <= MEMORY:
        raise ValueError(f"terminated block needs more than {MEMORY} trellis steps, got {nsteps}")
    lx = arr[:, 0::2]
    ly = arr[:, 1::2]

    pm = np.full((nblk, N_STATES), -np.inf)
    pm[:, 0] = 0.0
    choices = np.empty((nsteps, nblk, N_STATES), dtype=np.uint8)
    for t in range(nsteps):
        bm0 = lx[:, t, None] * _SX0[None, :] + ly[:, t, None] * _SY0[None, :]
        bm1 = lx[:, t, None] * _SX1[None, :] + ly[:, t, None] * _SY1[None, :]
        cand0 = pm[:, _P0] + bm0
        cand1 = pm[:, _P1] + bm1
        take1 = cand1 > cand0  # ties keep the even (older-bit-0) predecessor
        pm = np.where(take1, cand1, cand0)
        choices[t] = take1

    if terminated:
        state = np.zeros(nblk, dtype=np.int64)
    else:
        state = np.argmax(pm, axis=1)
    decoded = np.empty((nblk, nsteps), dtype=np.uint8)
    rows = np.arange(nblk)
    for t in range(nsteps - 1, -1, -1):
        decoded[:, t] = state >> 5
        b = choices[t, rows, state]
        state = ((state & 31) << 1) | b
    if terminated:
        decoded = decoded[:, :-MEMORY]
    return decoded if np.asarray(soft).ndim > 1 else decoded[0]


def to_soft(coded_bits) -> np.ndarray:
    """Ideal noiseless metrics for coded bits: +1 for 0, -1 for 1."""
    return 1.0 - 2.0 * np.asarray(coded_bits, dtype=np.float64)
