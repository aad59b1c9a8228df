"""
Bracketing the norm of the inner derivation
===========================================

lower: largest ||[a, u]||_1 found among candidate unitaries.
upper: min(2 min_z ||a - z||_1, max over the orbit of ||a - u a u*||_2).
"""
import numpy as np

from normcomm import derivation_bracket
from normcomm.linalg import random_normal

roots = np.exp(2j * np.pi * np.arange(3) / 3)
cases = {
    "equilateral/sqrt3": np.diag(roots / np.sqrt(3)),
    "diag(0,1)": np.diag([0.0, 1.0]),
    "random 6x6": random_normal(6, np.random.default_rng(1)),
    "random 12x12": random_normal(12, np.random.default_rng(2)),
}
for name, a in cases.items():
    br = derivation_bracket(a)
    print(f"{name:18s} lower {br.lower:.6f}  upper {br.upper:.6f}  median {br.median.value:.6f}"
          f"  ratios [{br.ratio_lower:.4f}, {br.ratio_upper:.4f}]  via {br.lower_source}")
