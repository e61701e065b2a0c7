"""BPSK transmission over AWGN and Rayleigh block-fading channels.

Symbol LLR convention: a symbol observation is summarised by a vector
of length 2^t indexed by candidate symbol value s, holding

    S[s] = ln W(y | 0 transmitted) - ln W(y | s transmitted),

so S[0] is identically zero and the most likely symbol attains the
minimum.  For BPSK in Gaussian noise the vector decomposes over the
bits of s: S[s] = sum of 2*h_j*y_j/sigma^2 over the bit positions j
where s has a 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .galois import unpack_symbol_array


@dataclass(frozen=True)
class ChannelConfig:
    """Channel parameters for one operating point.

    ``sigma2`` is derived from the per-information-bit SNR as
    1 / (2 * R * 10^(ebn0_db/10)) with R = k/N counting information
    bits only.  ``fading_blocks`` is the number of independent fading
    realisations per frame (Rayleigh only); each block spans
    N_sym / fading_blocks consecutive symbols.
    """

    kind: str
    ebn0_db: float
    rate: float
    fading_blocks: int = 0

    def __post_init__(self):
        if self.kind not in ("awgn", "rayleigh_block"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.rate <= 0:
            raise ValueError("code rate must be positive")
        if self.kind == "rayleigh_block" and self.fading_blocks < 1:
            raise ValueError("rayleigh_block needs fading_blocks >= 1")

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))


def bpsk_modulate(symbols: np.ndarray, t: int) -> np.ndarray:
    """Unpack symbols to bits (alpha^0 coefficient first) and map 0 -> +1, 1 -> -1."""
    bits = unpack_symbol_array(np.asarray(symbols, dtype=np.int64), t)
    x = 1.0 - 2.0 * bits.astype(np.float64)
    return x.reshape(*x.shape[:-2], -1)


def transmit(x: np.ndarray, cfg: ChannelConfig, rng) -> tuple[np.ndarray, np.ndarray]:
    """Send modulated samples through the configured channel.

    Returns (y, h) where h is the per-sample gain seen by the receiver
    (all ones for AWGN).  Fading gains are real magnitudes with
    E[h^2] = 1, constant over each block of t * tau_f samples; perfect
    channel state information is assumed, so h is returned as-is.
    """
    x = np.asarray(x, dtype=np.float64)
    sigma = float(np.sqrt(cfg.sigma2))
    if cfg.kind == "awgn":
        h = np.ones_like(x)
    else:
        b = cfg.fading_blocks
        n_samples = x.shape[-1]
        if n_samples % b:
            raise ValueError(f"fading_blocks={b} does not divide sample count {n_samples}")
        gains = rng.rayleigh(scale=np.sqrt(0.5), size=(*x.shape[:-1], b))
        h = np.repeat(gains, n_samples // b, axis=-1)
    w = rng.normal(0.0, sigma, size=x.shape) if sigma > 0 else np.zeros_like(x)
    return h * x + w, h


def initial_llrs(y: np.ndarray, h: np.ndarray, sigma2: float, t: int) -> np.ndarray:
    """Per-symbol LLR vectors from channel output and gains.

    Input arrays run over the flattened bit stream (t samples per
    symbol); the result has shape (..., n_symbols, 2^t) with entry 0
    pinned to zero.
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive to form LLRs")
    y = np.asarray(y, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if y.shape[-1] % t:
        raise ValueError(f"sample count {y.shape[-1]} is not a multiple of t={t}")
    bit_llrs = (2.0 / sigma2) * h * y
    bit_llrs = bit_llrs.reshape(*y.shape[:-1], -1, t)
    membership = unpack_symbol_array(np.arange(1 << t, dtype=np.int64), t)
    return bit_llrs @ membership.T.astype(np.float64)
