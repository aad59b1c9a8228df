"""
Commutator lower bound on normal matrices
=========================================

For a normal matrix a with pairing (T, z0), take u = U K U* with K the
permutation matrix of T. In the eigenbasis,

    |[a, u]|         = diag |l_T(i) - l_i|
    u |a - z0| u*    = diag |l_T^-1(i) - z0|
    u* |a - z0| u    = diag |l_T(i) - z0|

so the pairing's guarantee controls the right-hand side with u* ... u.
For involutions the two agree; for 3- and 5-cycles they do not.
"""
import numpy as np

from normcomm import WeightedSpectrum, build_pairing, normal_eig, verify_commutator_bound
from normcomm.linalg import random_normal

C = np.sqrt(3) / 2
roots = np.exp(2j * np.pi * np.arange(3) / 3)

for label, spectrum in [("equilateral", roots), ("radii 1,1,3", np.array([1, 1, 3]) * roots)]:
    a = np.diag(spectrum)
    p = build_pairing(WeightedSpectrum.uniform(normal_eig(a).eigenvalues))
    r1 = verify_commutator_bound(a, p, C)
    r2 = verify_commutator_bound(a, p, C, form="adjoint")
    print(f"{label:12s} cycles {dict((k, len(v)) for k, v in p.cycle_partition.items())}"
          f"  u|.|u* eigmin {r1.eigmin:+.4f}  u*|.|u eigmin {r2.eigmin:+.4f}")

rng = np.random.default_rng(0)
for n in (6, 7, 8, 9):
    a = random_normal(n, rng)
    p = build_pairing(WeightedSpectrum.uniform(normal_eig(a).eigenvalues))
    r1 = verify_commutator_bound(a, p, C)
    r2 = verify_commutator_bound(a, p, C, form="adjoint")
    print(f"n={n}: cycle lengths {sorted(p.cycle_partition)}  eigmin {r1.eigmin:+.3e} / {r2.eigmin:+.3e}")
