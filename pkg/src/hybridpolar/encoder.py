"""Encoders for the two repetition schemes.

The hybrid scheme builds its outer code in two stages.  Stage 1 applies
a small binary kernel to each group of t input bits, after which every
group is packed into one GF(2^t) symbol (first bit of the group is the
alpha^0 coefficient).  Stage 2 applies the binary Arikan kernel to the
n/t symbols, with the 0/1 kernel entries acting by field addition, i.e.
symbol XOR.  The inner code repeats the n/t outer symbols r times, each
repeated symbol scaled by a random nonzero field coefficient.

Two Stage-1 variants exist and produce different codes for t = 4:

* ``flat``      : each t-tuple is multiplied by B_t G_2^{(x) m'}, that
                  is, the Kronecker-power kernel with bit-reversed rows.
* ``recursive`` : G_2 is applied pairwise over growing subfields and
                  the outputs regrouped layer by layer, which works out
                  to the plain Kronecker power without bit reversal.

The baseline scheme is an ordinary binary polar code whose codeword is
repeated r times verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .galois import FieldTables, pack_bits_array, unpack_symbol_array

if TYPE_CHECKING:  # pragma: no cover
    from .codespec import CodeSpec


# ---------------------------------------------------------------------------
# CRC
# ---------------------------------------------------------------------------

def crc_attach(info_bits: np.ndarray, crc_poly: int, p: int) -> np.ndarray:
    """Append the p-bit remainder of info_bits * x^p modulo crc_poly.

    Bits are processed most-significant-degree first, so the first
    entry of the returned CRC block is the x^{p-1} coefficient of the
    remainder.  An all-zero message therefore yields an all-zero CRC.
    """
    if p == 0:
        return np.asarray(info_bits, dtype=np.int8).copy()
    if crc_poly.bit_length() != p + 1:
        raise ValueError(f"crc_poly 0x{crc_poly:x} does not have degree {p}")
    info_bits = np.asarray(info_bits, dtype=np.int8)
    reg = 0
    top = 1 << p
    for b in info_bits:
        reg = (reg << 1) | int(b)
        if reg & top:
            reg ^= crc_poly
    for _ in range(p):
        reg <<= 1
        if reg & top:
            reg ^= crc_poly
    crc = np.array([(reg >> (p - 1 - j)) & 1 for j in range(p)], dtype=np.int8)
    return np.concatenate([info_bits, crc])


def crc_check(bits: np.ndarray, crc_poly: int, p: int) -> bool:
    """True iff the trailing p bits are a valid CRC of the leading bits."""
    if p == 0:
        return True
    bits = np.asarray(bits, dtype=np.int8)
    reg = 0
    top = 1 << p
    for b in bits:
        reg = (reg << 1) | int(b)
        if reg & top:
            reg ^= crc_poly
    return reg == 0


_CRC_MATRIX_CACHE: dict = {}


def crc_remainder_matrix(length: int, crc_poly: int, p: int) -> np.ndarray:
    """(length, p) GF(2) matrix M with M[i] = CRC contribution of bit i.

    ``bits @ M % 2`` is the p-bit syndrome of a length-``length`` block,
    which is zero exactly when :func:`crc_check` passes.  Derived by
    pushing unit vectors through the division routine, so it stays
    consistent with it by construction.  Cached (read-only) since the
    decoder asks for the same matrix on every batch.
    """
    key = (length, crc_poly, p)
    cached = _CRC_MATRIX_CACHE.get(key)
    if cached is not None:
        return cached
    m = np.zeros((length, p), dtype=np.int8)
    for i in range(length):
        unit = np.zeros(length, dtype=np.int8)
        unit[i] = 1
        reg = 0
        top = 1 << p
        for b in unit:
            reg = (reg << 1) | int(b)
            if reg & top:
                reg ^= crc_poly
        m[i] = [(reg >> (p - 1 - j)) & 1 for j in range(p)]
    m.setflags(write=False)
    _CRC_MATRIX_CACHE[key] = m
    return m


# ---------------------------------------------------------------------------
# Polar transforms
# ---------------------------------------------------------------------------

def polar_transform(v: np.ndarray) -> np.ndarray:
    """u @ G_2^{(x) m} over the last axis, natural order, XOR arithmetic.

    Works on bit arrays and on packed GF(2^t) symbol arrays alike since
    the kernel entries only ever add (XOR) elements.
    """
    v = np.asarray(v)
    n = v.shape[-1]
    if n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    out = v.copy()
    width = 2
    while width <= n:
        half = width // 2
        blocks = out.reshape(*out.shape[:-1], n // width, width)
        blocks[..., :half] ^= blocks[..., half:]
        width *= 2
    return out


def polar_transform_binary(v: np.ndarray) -> np.ndarray:
    """Binary codomain wrapper around :func:`polar_transform`."""
    return polar_transform(np.asarray(v, dtype=np.int8))


def bit_reversal_permutation(t: int) -> np.ndarray:
    """Index permutation reversing the binary digits of 0..t-1."""
    m = t.bit_length() - 1
    if t != 1 << m:
        raise ValueError(f"{t} is not a power of two")
    idx = np.arange(t)
    rev = np.zeros(t, dtype=np.int64)
    for _ in range(m):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def stage1_block_map(t: int, variant: str) -> np.ndarray:
    """Lookup table from a packed t-bit input tuple to its Stage-1 symbol.

    Entry w is the packed transform of the tuple whose j-th bit is
    (w >> j) & 1.  The decoder uses the same table to re-pack decided
    bits into the symbol fed back to Stage 2.
    """
    if variant not in ("flat", "recursive"):
        raise ValueError(f"unknown encoder variant {variant!r}")
    tuples = unpack_symbol_array(np.arange(1 << t, dtype=np.int64), t)
    if variant == "flat" and t > 1:
        tuples = tuples[:, bit_reversal_permutation(t)]
    return pack_bits_array(polar_transform(tuples))


def encode_stage1(u: np.ndarray, t: int, variant: str) -> np.ndarray:
    """Transform n input bits into n/t Stage-1 symbols.

    The flat variant multiplies each t-tuple by the bit-reversed
    Kronecker kernel in one shot.  The recursive variant applies G_2
    pairwise over subfields of doubling size, regrouping after every
    layer; for t <= 2 the two variants coincide.
    """
    u = np.asarray(u, dtype=np.int64)
    n = u.shape[-1]
    if n % t:
        raise ValueError(f"t={t} does not divide n={n}")
    if variant == "flat":
        groups = u.reshape(*u.shape[:-1], n // t, t)
        if t > 1:
            groups = groups[..., bit_reversal_permutation(t)]
        return pack_bits_array(polar_transform(groups))
    if variant == "recursive":
        symbols = u.copy()
        width = 1
        while width < t:
            low = symbols[..., 0::2]
            high = symbols[..., 1::2]
            symbols = (low ^ high) | (high << width)
            width *= 2
        return symbols
    raise ValueError(f"unknown encoder variant {variant!r}")


def encode_stage2(a: np.ndarray) -> np.ndarray:
    """Apply the Arikan kernel to the symbol vector (field-XOR butterflies)."""
    return polar_transform(np.asarray(a, dtype=np.int64))


# ---------------------------------------------------------------------------
# Message assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MessageFrame:
    """One outer-code input block: info bits, CRC bits and the u vector."""

    info_bits: np.ndarray
    crc_bits: np.ndarray
    u: np.ndarray


def make_message_frame(info_bits: np.ndarray, spec: "CodeSpec") -> MessageFrame:
    """CRC-extend the payload and scatter it into the unfrozen positions.

    Unfrozen positions are filled in ascending index order, info bits
    first and CRC bits last; frozen positions stay zero.
    """
    info_bits = np.asarray(info_bits, dtype=np.int8)
    if info_bits.shape != (spec.k,):
        raise ValueError(f"expected {spec.k} information bits, got {info_bits.shape}")
    payload = crc_attach(info_bits, spec.crc_poly, spec.p)
    u = np.zeros(spec.n, dtype=np.int8)
    u[spec.unfrozen_indices()] = payload
    return MessageFrame(info_bits=info_bits, crc_bits=payload[spec.k:], u=u)


def validate_input_vector(u: np.ndarray, spec: "CodeSpec") -> None:
    """Reject u vectors that set a frozen position to a nonzero value."""
    u = np.asarray(u)
    frozen = np.fromiter(spec.frozen_set, dtype=np.int64) if spec.frozen_set else None
    if frozen is not None and frozen.size and np.any(u[frozen] != 0):
        raise ValueError("frozen positions of u must be zero")


# ---------------------------------------------------------------------------
# Inner codes and full chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Codeword:
    """Channel-facing codeword.

    ``symbols`` holds r*n/t field symbols for the hybrid scheme or
    r*n bits for the baseline.  ``coefficients`` is the (r-1, n/t)
    array of nonzero repetition multipliers, or None for the baseline.
    """

    symbols: np.ndarray
    coefficients: np.ndarray | None = None


def draw_coefficients(n_symbols: int, r: int, tables: FieldTables, rng) -> np.ndarray:
    """(r-1, n_symbols) multipliers drawn uniformly from the nonzero elements."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return rng.integers(1, tables.q, size=(r - 1, n_symbols), dtype=np.int64)


def multiplicative_repeat(
    z: np.ndarray,
    r: int,
    tables: FieldTables,
    rng=None,
    coefficients: np.ndarray | None = None,
) -> Codeword:
    """Repeat the outer symbols r times, scaling each repeat elementwise.

    Block 1 is z itself; block j >= 2 is rho_j * z with rho_j the j-th
    row of coefficients.  Coefficients come from ``rng`` unless pinned
    explicitly.
    """
    z = np.asarray(z, dtype=np.int64)
    if coefficients is None:
        if r > 1 and rng is None:
            raise ValueError("need an rng or explicit coefficients for r > 1")
        coefficients = draw_coefficients(z.shape[-1], r, tables, rng) if r > 1 \
            else np.zeros((0, z.shape[-1]), dtype=np.int64)
    else:
        coefficients = np.asarray(coefficients, dtype=np.int64)
        if coefficients.shape != (r - 1, z.shape[-1]):
            raise ValueError(
                f"coefficient array must have shape {(r - 1, z.shape[-1])}, "
                f"got {coefficients.shape}"
            )
        if np.any(coefficients == 0) or np.any(coefficients >= tables.q):
            raise ValueError("repetition coefficients must be nonzero field elements")
    blocks = [z] + [tables.mul[coefficients[j], z] for j in range(r - 1)]
    return Codeword(symbols=np.concatenate(blocks, axis=-1), coefficients=coefficients)


def encode_hybrid(
    info_bits: np.ndarray,
    spec: "CodeSpec",
    tables: FieldTables,
    rng=None,
    coefficients: np.ndarray | None = None,
) -> Codeword:
    """Full hybrid chain: CRC, frozen insertion, both stages, repetition."""
    if spec.scheme != "hybrid":
        raise ValueError(f"spec scheme is {spec.scheme!r}, expected 'hybrid'")
    frame = make_message_frame(info_bits, spec)
    a = encode_stage1(frame.u, spec.t, spec.encoder_variant)
    z = encode_stage2(a)
    return multiplicative_repeat(z, spec.r, tables, rng=rng, coefficients=coefficients)


def encode_baseline(info_bits: np.ndarray, spec: "CodeSpec") -> Codeword:
    """Binary polar codeword repeated r times verbatim."""
    if spec.scheme != "polar_repetition":
        raise ValueError(f"spec scheme is {spec.scheme!r}, expected 'polar_repetition'")
    frame = make_message_frame(info_bits, spec)
    x = polar_transform_binary(frame.u)
    return Codeword(symbols=np.tile(x, spec.r), coefficients=None)


def encode_u_vector(u: np.ndarray, spec: "CodeSpec", tables: FieldTables,
                    coefficients: np.ndarray | None = None) -> np.ndarray:
    """Outer+inner transform of a raw u vector (no CRC, no frozen checks).

    Used by the code construction (which ranks bit channels with fully
    random u) and by weight enumeration (which re-encodes decoded u
    vectors under pinned coefficients).  Returns the symbol stream.
    """
    if spec.scheme == "polar_repetition":
        return np.tile(polar_transform_binary(u), spec.r)
    a = encode_stage1(np.asarray(u, dtype=np.int64), spec.t, spec.encoder_variant)
    z = encode_stage2(a)
    return multiplicative_repeat(z, spec.r, tables, coefficients=coefficients).symbols


def format_codeword_dump(codeword: Codeword, tables: FieldTables) -> str:
    """Textual debug dump: hex symbol values plus coefficient exponents."""
    sym = " ".join(f"{int(s):x}" for s in codeword.symbols)
    lines = [f"symbols: {sym}"]
    if codeword.coefficients is not None and codeword.coefficients.size:
        exps = " ".join(
            str(int(tables.log[c])) for c in codeword.coefficients.ravel()
        )
        lines.append(f"rho_exp: {exps}")
    return "\n".join(lines)
