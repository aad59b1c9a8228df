"""
Center point and pairing for a random spectrum
==============================================

Find a point z0 with three 60-degree lines through it, each splitting the
atoms in half, then build a permutation T whose steps i -> T(i) all keep
the ratio |g_i - g_T(i)| / (|g_i - z0| + |g_T(i) - z0|) above sqrt(3)/2.
"""
import numpy as np

from normcomm import WeightedSpectrum, build_pairing, cycle_type_report, find_center, verify_certificate
from normcomm.pairing import ratios

rng = np.random.default_rng(3)
g = rng.normal(size=11) + 1j * rng.normal(size=11)
s = WeightedSpectrum.uniform(g)

cert = find_center(s)
print("z0 =", np.round(cert.z0, 6))
print("half-plane masses per direction:", [tuple(round(m, 3) for m in pair) for pair in cert.masses])
print("certificate verifies:", verify_certificate(s, cert))

# odd n: one fixed point, 3-cycle or 5-cycle; the rest are swaps
p = build_pairing(s)
print("permutation:", p.permutation.tolist())
print("cycle type:", cycle_type_report(p))
print("ratios:", np.round(ratios(g, p.permutation, p.z0), 4))
print("min ratio %.6f vs sqrt(3)/2 = %.6f" % (p.achieved_lambda, np.sqrt(3) / 2))
