"""
The constants Lambda_n and tilde-Lambda_n
=========================================

tilde-Lambda_n has a closed form depending on n mod 3. Each value is the
reciprocal of the best L1 distance from a three-valued diameter-one
spectrum to a scalar, which we recompute numerically here.
"""
import numpy as np

from normcomm import extremal_lambda_witness, extremal_tilde_witness, lambda_exact, lambda_n, tilde_lambda
from normcomm.derivation import weighted_median_l1

print(" n  Lambda_n          tilde   1/median   t0")
for n in range(2, 14):
    w = extremal_tilde_witness(n)
    med = weighted_median_l1(w.spectrum)
    lam = lambda_n(n)
    lam_txt = f"{lam.lower:.4f}" if lam.is_point else f"[{lam.lower:.4f},{lam.upper:.0f}]"
    t0 = "-" if w.minimizer_t0 is None else f"{w.minimizer_t0:.5f}"
    print(f"{n:2d}  {lam_txt:16s} {tilde_lambda(n):.6f} {1 / med.value:.6f}  {t0}")

# cube-root witnesses pin Lambda(g) at sqrt(3)/2
for n in (3, 5, 6):
    w = extremal_lambda_witness(n)
    print(n, w.class_sizes, lambda_exact(w.spectrum).lambda_value)

# only the origin lies in all three ellipses with foci among the cube roots
from normcomm.plane import ellipse_mask

roots = np.exp(2j * np.pi * np.arange(3) / 3)
xs = np.linspace(-0.01, 0.01, 201)
z = xs[:, None] + 1j * xs[None, :]
inside = np.ones(z.shape, bool)
for i, j in ((0, 1), (1, 2), (0, 2)):
    inside &= ellipse_mask(z, roots[i], roots[j], np.sqrt(3) / 2)
print("points inside all three:", z[inside])
