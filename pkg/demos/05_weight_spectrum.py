"""Why the non-binary inner code helps: low-weight codeword counts.

Enumerates the low-weight codewords of a small hybrid code with a
large-list decode of the all-zero word, checks it against exhaustive
encoding, and evaluates the truncated union bound both spectra imply.

Run with:  python demos/05_weight_spectrum.py
"""

from hybridpolar.analysis import (brute_force_weights, enumerate_low_weight,
                                  pinned_coefficients, union_bound)
from hybridpolar.codespec import CodeSpec, default_frozen_set

hybrid = CodeSpec("hybrid", n=16, k=6, t=2, r=4, p=0, crc_poly=0,
                  frozen_set=default_frozen_set(16, 6, 0), design_snr=2.0)
baseline = CodeSpec("polar_repetition", n=16, k=6, t=1, r=4, p=0, crc_poly=0,
                    frozen_set=default_frozen_set(16, 6, 0), design_snr=2.0)

rho = pinned_coefficients(hybrid, seed=5)
est = enumerate_low_weight(hybrid, list_size=1024, high_snr_db=40.0, seed=5,
                           coefficients=rho)
exact = brute_force_weights(hybrid, coefficients=rho)

print("hybrid GF(4), N = 64, k = 6, pinned multipliers")
print(f"  list estimate : {dict(sorted(est.counts.items()))}")
print(f"  exhaustive    : {dict(sorted(exact.counts.items()))}")
print(f"  minimum weight {est.min_weight} with multiplicity "
      f"{est.counts[est.min_weight]} (exact match: "
      f"{est.counts == exact.counts})")

base_exact = brute_force_weights(baseline)
print("\nbaseline repetition, same length and payload")
print(f"  exhaustive    : {dict(sorted(base_exact.counts.items()))}")
print("  every weight is a multiple of r = 4: verbatim repetition scales")
print("  each outer weight, while the multiplicative inner code spreads")
print("  symbols across different field elements.")

print("\ntruncated union bound at Eb/N0 = 4 dB:")
print(f"  hybrid   : {union_bound(est, hybrid.rate, 4.0):.3e}")
print(f"  baseline : {union_bound(base_exact, baseline.rate, 4.0):.3e}")
