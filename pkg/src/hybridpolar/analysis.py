"""Decoding operation counts, weight-spectrum estimation, union bound.

Operation counts tally the summations and comparisons a successive
cancellation pass spends on LLR updates, split by decoder part:

* baseline: n(r-1) for the inner repetition combining plus
  2.5 * n * log2(n) for the outer polar code;
* hybrid:   (n(r-1)/t)(2^t - 1) for the inner multiplicative
  repetition, (2^{2t} - 3/2) * (n/t) * log2(n/t) for the symbol-level
  Stage-2 updates, and (n/t) * sum_{i=1..t} (2(2^{t-i} - 1) + 1) for
  the Stage-1 bit extraction.

Weight spectra are estimated by decoding an all-zero transmission at
very high SNR with a large-list decoder, re-encoding every surviving
path and recording nonzero codeword weights; the exhaustive encoder
(:func:`brute_force_weights`) serves as ground truth on small codes.
Weights are measured in modulated channel bits for both schemes, so
the two spectra are directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import channel as _channel
from . import decoder as _decoder
from . import encoder as _encoder
from .codespec import CodeSpec


@dataclass(frozen=True)
class ComplexityReport:
    """Exact LLR-update operation counts for one parameter set."""

    scheme: str
    n: int
    r: int
    t: int
    inner_ops: int
    stage2_ops: int
    stage1_ops: int

    @property
    def total_ops(self) -> int:
        return self.inner_ops + self.stage2_ops + self.stage1_ops


def count_operations(scheme: str, n: int, r: int, t: int = 1) -> ComplexityReport:
    """Summation/comparison counts for one SC pass of the given scheme."""
    if n < 2 or n & (n - 1):
        raise ValueError(f"n={n} is not a power of two")
    if r < 1:
        raise ValueError("r must be >= 1")
    log_n = n.bit_length() - 1
    if scheme == "polar_repetition":
        inner = n * (r - 1)
        outer = 5 * n * log_n // 2
        return ComplexityReport(scheme=scheme, n=n, r=r, t=1,
                                inner_ops=inner, stage2_ops=outer, stage1_ops=0)
    if scheme == "hybrid":
        if t not in (1, 2, 4) or n % t:
            raise ValueError(f"invalid symbol degree t={t} for n={n}")
        n2 = n // t
        log_n2 = n2.bit_length() - 1
        inner = (n * (r - 1) // t) * ((1 << t) - 1)
        stage2 = ((1 << (2 * t + 1)) - 3) * n2 * log_n2 // 2
        stage1 = n2 * sum(2 * ((1 << (t - i)) - 1) + 1 for i in range(1, t + 1))
        return ComplexityReport(scheme=scheme, n=n, r=r, t=t,
                                inner_ops=inner, stage2_ops=stage2, stage1_ops=stage1)
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass
class WeightHistogram:
    """Codeword-weight multiplicities (all-zero codeword excluded)."""

    counts: dict = field(default_factory=dict)
    list_size: int = 0
    snr_db: float = 0.0

    def add(self, weight: int, count: int = 1) -> None:
        if weight <= 0:
            raise ValueError("only nonzero codeword weights are recorded")
        self.counts[weight] = self.counts.get(weight, 0) + count

    @property
    def min_weight(self) -> int:
        if not self.counts:
            raise ValueError("empty histogram has no minimum weight")
        return min(self.counts)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_csv(self) -> str:
        lines = ["weight,count"]
        lines += [f"{w},{self.counts[w]}" for w in sorted(self.counts)]
        return "\n".join(lines) + "\n"


def _codeword_bit_weight(symbols: np.ndarray, t: int) -> np.ndarray:
    """Hamming weight of the modulated bit stream, per leading index."""
    bits = np.zeros(symbols.shape, dtype=np.int64)
    s = np.asarray(symbols, dtype=np.int64).copy()
    for _ in range(t):
        bits += s & 1
        s >>= 1
    return bits.sum(axis=-1)


def pinned_coefficients(spec: CodeSpec, seed: int) -> np.ndarray:
    """The fixed repetition multipliers used for one enumeration run."""
    tables = spec.field_tables()
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 1)))
    return _encoder.draw_coefficients(spec.n // spec.t, spec.r, tables, rng)


def enumerate_low_weight(spec: CodeSpec, list_size: int, high_snr_db: float,
                         seed: int,
                         coefficients: np.ndarray | None = None) -> WeightHistogram:
    """Estimate the low-weight spectrum from a large-list decode of zero.

    The all-zero codeword is transmitted at ``high_snr_db``; every path
    surviving the list decode (no CRC filtering) is re-encoded under
    the pinned coefficients and its nonzero bit weight recorded, after
    removing duplicate u vectors.
    """
    tables = spec.field_tables()
    if coefficients is None and spec.scheme == "hybrid":
        coefficients = pinned_coefficients(spec, seed)
    cfg = _channel.ChannelConfig(kind="awgn", ebn0_db=high_snr_db, rate=spec.rate)
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0)))

    if spec.scheme == "hybrid":
        zero_syms = np.zeros(spec.r * spec.n // spec.t, dtype=np.int64)
        x = _channel.bpsk_modulate(zero_syms, spec.t)
        y, h = _channel.transmit(x, cfg, rng)
        s_in = _channel.initial_llrs(y, h, cfg.sigma2, spec.t)
        s_inner = _decoder.combine_repetitions(s_in, coefficients, tables)
        out = _decoder.scl_decode_batch(spec, s_inner[None], list_size,
                                        crc_on=False, return_paths=True)
    else:
        x = 1.0 - 2.0 * np.zeros(spec.N)
        y, h = _channel.transmit(x, cfg, rng)
        llrs = (2.0 / cfg.sigma2) * h * y
        out = _decoder.baseline_decode_batch(spec, llrs[None], list_size,
                                             crc_on=False, return_paths=True)

    paths = np.unique(out.all_u[0], axis=0)
    hist = WeightHistogram(list_size=list_size, snr_db=high_snr_db)
    for u in paths:
        symbols = _encoder.encode_u_vector(u, spec, tables, coefficients=coefficients)
        w = int(_codeword_bit_weight(symbols, spec.t if spec.scheme == "hybrid" else 1))
        if w > 0:
            hist.add(w)
    return hist


def brute_force_weights(spec: CodeSpec,
                        coefficients: np.ndarray | None = None,
                        guard: int = 20) -> WeightHistogram:
    """Exact weight enumerator over every nonzero unfrozen assignment.

    All 2^{k+p} fillings of the unfrozen positions are encoded: this is
    the code a list decoder without CRC filtering actually explores, so
    it is the right ground truth for :func:`enumerate_low_weight`.
    """
    n_payload = spec.k + spec.p
    if n_payload > guard:
        raise ValueError(f"k+p = {n_payload} exceeds the exhaustive guard of {guard}")
    tables = spec.field_tables()
    if coefficients is None and spec.scheme == "hybrid" and spec.r > 1:
        raise ValueError("hybrid brute force needs pinned coefficients")
    hist = WeightHistogram()
    unfrozen = spec.unfrozen_indices()
    for msg in range(1, 1 << n_payload):
        payload = np.array([(msg >> j) & 1 for j in range(n_payload)], dtype=np.int8)
        u = np.zeros(spec.n, dtype=np.int8)
        u[unfrozen] = payload
        symbols = _encoder.encode_u_vector(u, spec, tables, coefficients=coefficients)
        w = int(_codeword_bit_weight(symbols, spec.t if spec.scheme == "hybrid" else 1))
        hist.add(w)
    return hist


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def union_bound(hist: WeightHistogram, rate: float, ebn0_db: float) -> float:
    """Truncated union bound on block error probability under ML decoding.

    Sums A_w * Q(sqrt(2 w R Eb/N0)) over the recorded weights.
    """
    if rate <= 0:
        raise ValueError("rate must be positive")
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return sum(count * q_function(math.sqrt(2.0 * w * rate * ebn0))
               for w, count in hist.counts.items())
