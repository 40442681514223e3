"""Systematic Reed-Solomon coding over GF(2^8) with shortening and puncturing.

Mother code RS(255,239,T=8), field polynomial x^8+x^4+x^3+x^2+1 (0x11D),
generator roots lambda^0..lambda^(2T-1) with lambda = 0x02.  A derived
profile (n, k, t) shortens by prepending 239-k zero bytes and punctures
the parity down to the first 2t of the 16 mother-code parity bytes.

Decoding is syndrome-based: Berlekamp-Massey for the error locator, Chien
search, Forney magnitudes.  The punctured parity positions are known at
fixed locations, so the decoder folds them in as structural erasures
(Forney syndromes); the public interface takes no channel erasure marks.
"""

from dataclasses import dataclass

import numpy as np

FIELD_POLY = 0x11D  # x^8 + x^4 + x^3 + x^2 + 1
MOTHER_N, MOTHER_K, MOTHER_T = 255, 239, 8

# log/antilog tables for the field generated by lambda = 0x02
_ALOG = np.zeros(512, dtype=np.int64)
_LOG = np.zeros(256, dtype=np.int64)
_x = 1
for _i in range(255):
    _ALOG[_i] = _x
    _LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= FIELD_POLY
_ALOG[255:510] = _ALOG[:255]


def gf_mul(a: int, b: int) -> int:
    """Product in GF(2^8)."""
    if a == 0 or b == 0:
        return 0
    return int(_ALOG[_LOG[a] + _LOG[b]])


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 in GF(2^8)")
    return int(_ALOG[255 - _LOG[a]])


def gf_pow(a: int, e: int) -> int:
    if a == 0:
        return 0
    return int(_ALOG[(_LOG[a] * e) % 255])


def _poly_mul(p, q):
    # coefficient lists, ascending powers
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] ^= gf_mul(a, b)
    return out


def _poly_eval(p, x):
    y = 0
    for c in reversed(p):
        y = gf_mul(y, x) ^ c
    return y


def rs_generator(t: int) -> list[int]:
    """Generator polynomial with roots lambda^0 .. lambda^(2t-1), ascending coeffs."""
    if not 0 <= t <= MOTHER_T:
        raise ValueError(f"t must be in 0..{MOTHER_T}, got {t}")
    g = [1]
    for i in range(2 * t):
        g = _poly_mul(g, [gf_pow(2, i), 1])  # factor (x + lambda^i)
    return g


@dataclass(frozen=True)
class RsProfile:
    """One derived code: n output bytes, k message bytes, t correctable."""

    n_out: int
    k_in: int
    t_corr: int

    def __post_init__(self):
        if self.n_out - self.k_in != 2 * self.t_corr:
            raise ValueError(f"inconsistent RS profile ({self.n_out},{self.k_in},{self.t_corr})")
        if self.k_in > MOTHER_K or self.t_corr > MOTHER_T:
            raise ValueError(f"profile ({self.n_out},{self.k_in},{self.t_corr}) exceeds the mother code")

    @property
    def bypass(self) -> bool:
        return self.t_corr == 0


MOTHER = RsProfile(MOTHER_N, MOTHER_K, MOTHER_T)

# mother-code generator, descending-degree numpy copy used by the encoder LFSR
_GEN16 = rs_generator(MOTHER_T)
_GEN16_HIGH = np.array(_GEN16[:-1][::-1], dtype=np.uint8)  # g_15 .. g_0 without the monic lead
_GEN16_HIGH_LOG = _LOG[_GEN16_HIGH]


def rs_encode_blocks(msgs: np.ndarray, profile: RsProfile) -> np.ndarray:
    """Encode a (B, k_in) byte batch to (B, n_out); systematic, message first.

    Parity is the mother-code remainder; shortening prefix zeros never
    produce feedback, so the division runs over the k_in real bytes only.
    """
    msgs = np.atleast_2d(np.asarray(msgs, dtype=np.uint8))
    if msgs.shape[1] != profile.k_in:
        raise ValueError(f"expected {profile.k_in} message bytes per block, got {msgs.shape[1]}")
    if profile.bypass:
        return msgs.copy()
    nblk = msgs.shape[0]
    parity = np.zeros((nblk, 16), dtype=np.uint8)
    for col in range(profile.k_in):
        fb = msgs[:, col] ^ parity[:, 0]
        parity[:, :-1] = parity[:, 1:]
        parity[:, -1] = 0
        nz = fb != 0
        if nz.any():
            prod = _ALOG[_LOG[fb[nz]][:, None] + _GEN16_HIGH_LOG[None, :]].astype(np.uint8)
            parity[nz] ^= prod
    return np.concatenate([msgs, parity[:, : 2 * profile.t_corr]], axis=1)


def rs_encode(msg, profile: RsProfile) -> np.ndarray:
    """Encode one k_in-byte message to n_out bytes."""
    return rs_encode_blocks(np.asarray(msg, dtype=np.uint8)[None, :], profile)[0]


def _positions(profile: RsProfile):
    """Exponent positions (coefficient of x^e) of the transmitted and erased bytes.

    Mother codeword byte i holds the coefficient of x^(254-i).  The k_in
    message bytes sit at exponents 15+k_in .. 16, the kept parity at
    15 .. 16-2t, and the punctured parity at 15-2t .. 0.
    """
    msg_exp = np.arange(15 + profile.k_in, 15, -1)
    par_exp = np.arange(15, 15 - 2 * profile.t_corr, -1)
    erased_exp = np.arange(15 - 2 * profile.t_corr, -1, -1)
    return msg_exp, par_exp, erased_exp


def _syndrome_matrix(profile: RsProfile) -> np.ndarray:
    """Log-domain table: entry [j, p] = j * exponent(p) mod 255 for all word bytes."""
    msg_exp, par_exp, _ = _positions(profile)
    exps = np.concatenate([msg_exp, par_exp])
    j = np.arange(16)[:, None]
    return (j * exps[None, :]) % 255


def _syndromes_blocks(words: np.ndarray, profile: RsProfile) -> np.ndarray:
    """S_j = word(lambda^j), j = 0..15, for every row of a (B, n_out) batch."""
    logm = _syndrome_matrix(profile)  # (16, n_out)
    logs = _LOG[words]  # (B, n_out)
    terms = _ALOG[logs[:, None, :] + logm[None, :, :]]
    terms = np.where(words[:, None, :] != 0, terms, 0)
    return np.bitwise_xor.reduce(terms.astype(np.uint8), axis=2)


def _berlekamp_massey(synd):
    """Error locator from a syndrome list (ascending), ascending coeffs."""
    c = [1]
    b = [1]
    L, m, bb = 0, 1, 1
    for n, sn in enumerate(synd):
        d = sn
        for i in range(1, L + 1):
            if i < len(c) and c[i]:
                d ^= gf_mul(c[i], synd[n - i])
        if d == 0:
            m += 1
            continue
        t = c[:]
        coef = gf_mul(d, gf_inv(bb))
        c = c + [0] * max(0, len(b) + m - len(c))
        for i, bi in enumerate(b):
            if bi:
                c[i + m] ^= gf_mul(coef, bi)
        if 2 * L <= n:
            L, b, bb, m = n + 1 - L, t, d, 1
        else:
            m += 1
    return c[: L + 1], L


def _chien_roots(poly):
    """All exponents e in 0..254 with poly(lambda^-e) = 0, via table evaluation."""
    e = np.arange(255)
    acc = np.zeros(255, dtype=np.uint8)
    for k, ck in enumerate(poly):
        if ck:
            acc ^= _ALOG[(_LOG[ck] + (255 - k) * e % 255) % 255].astype(np.uint8)
    return np.nonzero(acc == 0)[0]


def _decode_word(word: np.ndarray, synd: np.ndarray, profile: RsProfile):
    """Errata decode of one full word layout [msg | kept parity], zeros at erasures.

    Returns (corrected word, corrections in transmitted bytes, ok).
    """
    msg_exp, par_exp, erased_exp = _positions(profile)
    exps = np.concatenate([msg_exp, par_exp])
    n_era = len(erased_exp)

    # erasure locator Gamma(x) = prod (1 + lambda^e x) over punctured positions
    gamma = [1]
    for e in erased_exp:
        gamma = _poly_mul(gamma, [1, gf_pow(2, int(e))])

    # Forney syndromes: coefficients e .. 15 of S(x) * Gamma(x)
    s_poly = [int(v) for v in synd]
    xi = _poly_mul(s_poly, gamma)[:16]
    forney = xi[n_era:]

    lam, n_err = _berlekamp_massey(forney)
    if 2 * n_err > 16 - n_era:
        return word, 0, False

    psi = _poly_mul(lam, gamma)
    roots = _chien_roots(psi)
    if len(roots) != len(psi) - 1:
        return word, 0, False
    err_pos = sorted(set(int(r) for r in roots) - set(int(e) for e in erased_exp))
    if len(err_pos) != n_err:
        return word, 0, False
    valid = set(int(e) for e in exps)
    if any(p not in valid for p in err_pos):
        return word, 0, False

    # Forney magnitudes; first generator root is lambda^0, hence the extra X factor
    omega = _poly_mul(s_poly, psi)[:16]
    dpsi = [psi[k] for k in range(1, len(psi), 2)]  # formal derivative, char 2
    fixed = word.copy()
    exp_index = {int(e): i for i, e in enumerate(exps)}
    n_corr = 0
    era_fill = {}
    for p in sorted(set(int(r) for r in roots)):
        x = gf_pow(2, p)
        xinv = gf_inv(x)
        num = _poly_eval(omega, xinv)
        den = 0
        xp = 1
        for c in dpsi:
            if c:
                den ^= gf_mul(c, xp)
            xp = gf_mul(xp, gf_mul(xinv, xinv))
        if den == 0:
            return word, 0, False
        mag = gf_mul(x, gf_mul(num, gf_inv(den)))
        if p in exp_index:
            if mag == 0 and p in err_pos:
                return word, 0, False
            fixed[exp_index[p]] ^= mag
            if p in err_pos:
                n_corr += 1
        else:
            # reconstructed punctured-parity byte; checked below, never emitted
            era_fill[p] = mag

    # full-codeword syndrome recheck including the erased-position fills
    s2 = _syndromes_blocks(fixed[None, :], profile)[0].astype(np.int64)
    j16 = np.arange(16)
    for e, v in era_fill.items():
        if v:
            s2 ^= _ALOG[(_LOG[v] + j16 * e % 255) % 255]
    if s2.any():
        return word, 0, False
    return fixed, n_corr, True


def rs_decode_blocks(codes: np.ndarray, profile: RsProfile):
    """Decode a (B, n_out) batch.

    Returns (msgs (B, k_in), corrected counts (B,), ok flags (B,)).  A
    failed block passes its received message bytes through unchanged with
    ok = False; the caller counts the residual errors either way.
    """
    codes = np.atleast_2d(np.asarray(codes, dtype=np.uint8))
    if codes.shape[1] != profile.n_out:
        raise ValueError(f"expected {profile.n_out} code bytes per block, got {codes.shape[1]}")
    nblk = codes.shape[0]
    if profile.bypass:
        return codes.copy(), np.zeros(nblk, dtype=int), np.ones(nblk, dtype=bool)

    msgs = codes[:, : profile.k_in].copy()
    counts = np.zeros(nblk, dtype=int)
    ok = np.ones(nblk, dtype=bool)
    synd = _syndromes_blocks(codes, profile)
    dirty = np.nonzero(synd.any(axis=1))[0]
    for i in dirty:
        fixed, n_corr, good = _decode_word(codes[i], synd[i], profile)
        ok[i] = good
        counts[i] = n_corr
        if good:
            msgs[i] = fixed[: profile.k_in]
    return msgs, counts, ok


def rs_decode(code, profile: RsProfile):
    """Decode one n_out-byte word; returns (message, corrected count, ok)."""
    msgs, counts, ok = rs_decode_blocks(np.asarray(code, dtype=np.uint8)[None, :], profile)
    return msgs[0], int(counts[0]), bool(ok[0])
