"""Code parameterisation, Monte-Carlo construction and persistence.

A :class:`CodeSpec` is the full persisted identity of one code: which
scheme, the block lengths, the frozen set, the CRC, the design SNR and
the encoder variant.  The frozen set is found by Monte-Carlo ranking:
random messages are pushed through the complete encoding chain,
transmitted over AWGN at the design SNR, and decoded by a genie-aided
successive cancellation pass in which every decision is corrected to
the truth right after its LLR is formed.  The first wrong decision of
each trial increments that bit position's error counter, and the
n-k-p positions with the highest counts are frozen (ties freeze the
lower index first).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import channel as _channel
from . import decoder as _decoder
from . import encoder as _encoder
from .galois import DEFAULT_PRIMITIVE_POLY, SUPPORTED_DEGREES, build_field

SCHEMES = ("hybrid", "polar_repetition")
ENCODER_VARIANTS = ("flat", "recursive")

DEFAULT_CONSTRUCTION_TRIALS = 100_000


@dataclass(frozen=True)
class CodeSpec:
    """All parameters identifying one code instance.

    ``frozen_set`` lives in the outer input vector u_0^{n-1} and has
    exactly n - k - p elements; the unfrozen positions carry the k
    information bits followed by the p CRC bits in ascending index
    order.  The reported rate k/N counts information bits only.
    """

    scheme: str
    n: int
    k: int
    t: int
    r: int
    p: int
    crc_poly: int
    frozen_set: tuple
    design_snr: float
    primitive_poly: int = 0
    encoder_variant: str = "flat"
    N: int = 0

    def __post_init__(self):
        if self.primitive_poly == 0 and self.t in DEFAULT_PRIMITIVE_POLY:
            object.__setattr__(self, "primitive_poly", DEFAULT_PRIMITIVE_POLY[self.t])
        if self.N == 0:
            object.__setattr__(self, "N", self.n * self.r)
        object.__setattr__(self, "frozen_set", tuple(sorted(int(i) for i in self.frozen_set)))
        self.validate()

    def validate(self) -> None:
        def fail(field_name, message):
            raise ValueError(f"invalid CodeSpec field {field_name!r}: {message}")

        if self.scheme not in SCHEMES:
            fail("scheme", f"must be one of {SCHEMES}")
        if self.n < 1 or self.n & (self.n - 1):
            fail("n", f"{self.n} is not a power of two")
        if self.t not in SUPPORTED_DEGREES:
            fail("t", f"{self.t} not in {SUPPORTED_DEGREES}")
        if self.n % self.t or (self.n // self.t) & (self.n // self.t - 1):
            fail("t", f"n/t must be a power of two (n={self.n}, t={self.t})")
        if self.r < 1:
            fail("r", "needs at least one repetition")
        if self.N != self.n * self.r:
            fail("N", f"{self.N} != n*r = {self.n * self.r}")
        if self.k < 0 or self.p < 0 or self.k + self.p > self.n:
            fail("k", f"k+p = {self.k + self.p} exceeds n = {self.n}")
        if self.k > self.N:
            fail("k", "rate k/N exceeds 1")
        if self.p > 0 and self.crc_poly.bit_length() != self.p + 1:
            fail("crc_poly", f"0x{self.crc_poly:x} does not have degree {self.p}")
        if len(self.frozen_set) != self.n - self.k - self.p:
            fail("frozen_set", f"expected {self.n - self.k - self.p} indices, "
                               f"got {len(self.frozen_set)}")
        if self.frozen_set and not (0 <= self.frozen_set[0] and self.frozen_set[-1] < self.n):
            fail("frozen_set", "indices out of range")
        if len(set(self.frozen_set)) != len(self.frozen_set):
            fail("frozen_set", "duplicate indices")
        if self.encoder_variant not in ENCODER_VARIANTS:
            fail("encoder_variant", f"must be one of {ENCODER_VARIANTS}")
        if self.primitive_poly.bit_length() != self.t + 1:
            fail("primitive_poly", f"0x{self.primitive_poly:x} does not have degree {self.t}")

    @property
    def rate(self) -> float:
        return self.k / self.N

    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        if self.frozen_set:
            mask[list(self.frozen_set)] = True
        return mask

    def unfrozen_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.frozen_mask())

    def field_tables(self):
        return build_field(self.t, self.primitive_poly)


def default_frozen_set(n: int, k: int, p: int) -> tuple:
    """Placeholder frozen set: the lowest n-k-p indices."""
    return tuple(range(n - k - p))


# ---------------------------------------------------------------------------
# Monte-Carlo construction
# ---------------------------------------------------------------------------

def _rng_for(seed: int, *path: int):
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(path)))


def first_error_counts(params: CodeSpec, trials: int, seed: int,
                       batch: int = 512) -> np.ndarray:
    """Per-position first-error counters from genie-aided SC trials.

    Each trial encodes a fully random u through the complete chain,
    transmits over AWGN at the design SNR and counts only the first
    wrong genie decision, so the counters sum to at most ``trials``.
    Trials are deterministic functions of (seed, trial index) and the
    counters aggregate by plain addition, so the result does not depend
    on the batch size.  Repetition coefficients stay fixed for the
    whole run (drawn once from the seed): they only permute symbol LLR
    vectors, which leaves the bit-channel ranking untouched.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tables = params.field_tables()
    n2 = params.n // params.t
    cfg = _channel.ChannelConfig(kind="awgn", ebn0_db=params.design_snr,
                                 rate=params.rate)
    sigma = np.sqrt(cfg.sigma2)
    coeff = None
    if params.scheme == "hybrid" and params.r > 1:
        coeff = _encoder.draw_coefficients(n2, params.r, tables, _rng_for(seed, 1))

    counts = np.zeros(params.n, dtype=np.int64)
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        u = np.zeros((m, params.n), dtype=np.int8)
        noise = np.zeros((m, params.N))
        for j in range(m):
            rng = _rng_for(seed, 0, done + j)
            u[j] = rng.integers(0, 2, size=params.n, dtype=np.int8)
            noise[j] = rng.normal(0.0, sigma, size=params.N)
        if params.scheme == "hybrid":
            a = _encoder.encode_stage1(u, params.t, params.encoder_variant)
            z = _encoder.encode_stage2(a)
            blocks = [z] + [tables.mul[coeff[j], z] for j in range(params.r - 1)]
            symbols = np.concatenate(blocks, axis=-1)
            y = _channel.bpsk_modulate(symbols, params.t) + noise
            s_in = _channel.initial_llrs(y, np.ones_like(y), cfg.sigma2, params.t)
            rho = np.broadcast_to(coeff, (m,) + coeff.shape) if coeff is not None \
                else np.zeros((m, 0, n2), dtype=np.int64)
            channel_input = _decoder.combine_repetitions(s_in, rho, tables)
        else:
            x = np.tile(_encoder.polar_transform_binary(u), (1, params.r))
            y = (1.0 - 2.0 * x) + noise
            channel_input = (2.0 / cfg.sigma2) * y
        firsts = _decoder.genie_first_errors(params, channel_input, u)
        hits = firsts[firsts >= 0]
        counts += np.bincount(hits, minlength=params.n)
        done += m
    return counts


def monte_carlo_construct(params: CodeSpec, trials: int, seed: int,
                          batch: int = 512) -> tuple:
    """Rank bit channels at the design SNR and return the frozen set.

    ``params.frozen_set`` is ignored during the ranking.  The n-k-p
    positions with the highest first-error counts are frozen; equal
    counts freeze the lower index first.
    """
    n_frozen = params.n - params.k - params.p
    if n_frozen < 0:
        raise ValueError(f"k+p = {params.k + params.p} exceeds n = {params.n}")
    if n_frozen == 0:
        return ()
    counts = first_error_counts(params, trials, seed, batch=batch)
    order = np.lexsort((np.arange(params.n), -counts))
    return tuple(sorted(int(i) for i in order[:n_frozen]))


def construct_code(params: CodeSpec, trials: int = DEFAULT_CONSTRUCTION_TRIALS,
                   seed: int = 0) -> CodeSpec:
    """Convenience wrapper returning a new CodeSpec with the ranked frozen set."""
    frozen = monte_carlo_construct(params, trials, seed)
    return dataclasses.replace(params, frozen_set=frozen)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def save_spec(spec: CodeSpec, path) -> None:
    """Write the spec as flat key/value text with an explicit frozen list."""
    lines = [
        f"scheme = {spec.scheme}",
        f"N = {spec.N}",
        f"n = {spec.n}",
        f"k = {spec.k}",
        f"t = {spec.t}",
        f"r = {spec.r}",
        f"p = {spec.p}",
        f"crc_poly = 0x{spec.crc_poly:x}",
        f"design_snr = {spec.design_snr!r}",
        f"primitive_poly = 0x{spec.primitive_poly:x}",
        f"encoder_variant = {spec.encoder_variant}",
        "frozen_set = " + ",".join(str(i) for i in spec.frozen_set),
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_spec(path) -> CodeSpec:
    """Parse a saved spec, re-validating every invariant."""
    fields: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
    missing = {"scheme", "n", "k", "t", "r", "p", "crc_poly", "design_snr",
               "primitive_poly", "encoder_variant", "frozen_set"} - fields.keys()
    if missing:
        raise ValueError(f"spec file missing fields: {sorted(missing)}")
    try:
        frozen = tuple(int(tok) for tok in fields["frozen_set"].split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"invalid CodeSpec field 'frozen_set': {exc}") from None

    def parse_int(name):
        try:
            return int(fields[name], 0)
        except ValueError:
            raise ValueError(f"invalid CodeSpec field {name!r}: not an integer") from None

    return CodeSpec(
        scheme=fields["scheme"],
        n=parse_int("n"),
        k=parse_int("k"),
        t=parse_int("t"),
        r=parse_int("r"),
        p=parse_int("p"),
        crc_poly=parse_int("crc_poly"),
        frozen_set=frozen,
        design_snr=float(fields["design_snr"]),
        primitive_poly=parse_int("primitive_poly"),
        encoder_variant=fields["encoder_variant"],
        N=parse_int("N") if "N" in fields else 0,
    )
