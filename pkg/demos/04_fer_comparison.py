"""Small frame-error-rate comparison of the two schemes.

A desk-scale version of the headline experiment: same total length,
same payload, same list size, AWGN. Expect the non-binary scheme to
pull ahead as the list grows.

Run with:  python demos/04_fer_comparison.py   (about a minute)
"""

from hybridpolar.cli import simulate_point
from hybridpolar.codespec import CodeSpec, construct_code, default_frozen_set

n, k, p, r = 128, 24, 6, 8
configs = [("polar repetition", "polar_repetition", 1),
           ("hybrid over GF(4)", "hybrid", 2),
           ("hybrid over GF(16)", "hybrid", 4)]

specs = []
for label, scheme, t in configs:
    params = CodeSpec(scheme, n=n, k=k, t=t, r=r, p=p, crc_poly=0x43,
                      frozen_set=default_frozen_set(n, k, p), design_snr=2.0)
    specs.append((label, construct_code(params, trials=8000, seed=3)))
    print(f"constructed {label}")

print(f"\nN = {n * r}, k = {k}, r = {r}, CRC-aided list decoding, AWGN")
print(f"{'scheme':<20}{'Eb/N0':>7}{'L':>4}{'frames':>8}{'errors':>8}{'FER':>10}")
for ebn0 in (1.0, 2.0):
    for L in (1, 8):
        for label, spec in specs:
            rec = simulate_point(spec, ebn0, L, seed=17, max_frames=4000,
                                 target_errors=80)
            print(f"{label:<20}{ebn0:>7.1f}{L:>4}{rec.frames:>8}"
                  f"{rec.frame_errors:>8}{rec.fer:>10.4f}")
