"""Brute-force Lambda(g, T) and Lambda(g) for small uniform spectra.

For a fixed permutation with no degenerate pair (``g_i == g_T(i)``) the best
center minimizes the convex function

    Phi(z) = max_i (|g_i - z| + |g_T(i) - z|) / |g_i - g_T(i)|

and Lambda(g, T) = 1 / min Phi. A degenerate pair makes the ratio 1 at a
single point and 0 elsewhere, so only that point is a candidate.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .center import WeightedSpectrum
from .optim import ellipsoid_batch, grid_seed, nelder_mead
from .pairing import ratios

EXACT_MAX_N = 8
TIE_TOL = 1e-12


@dataclass(frozen=True)
class LambdaReport:
    lambda_value: float
    best_permutation: np.ndarray
    best_z: complex
    per_pair_ratios: np.ndarray


def _as_values(s) -> np.ndarray:
    if isinstance(s, WeightedSpectrum):
        if not s.is_uniform:
            raise ValueError("oracle requires counting measure")
        return np.asarray(s.values, dtype=complex)
    return np.atleast_1d(np.asarray(s, dtype=complex))


def phi(values, perm, z) -> np.ndarray:
    """Phi at one or many points ``z``; infinite where a degenerate pair exists."""
    g = np.asarray(values, dtype=complex)
    p, q = g, g[np.asarray(perm)]
    d = np.abs(p - q)
    if np.any(d == 0):
        return np.full(np.shape(z), np.inf)
    z = np.asarray(z, dtype=complex)
    s = np.abs(p[None, :] - z.reshape(-1, 1)) + np.abs(q[None, :] - z.reshape(-1, 1))
    return np.max(s / d[None, :], axis=1).reshape(z.shape)


def _batch_solve(p: np.ndarray, q: np.ndarray, lo: complex, hi: complex):
    """Minimize Phi for a batch of nondegenerate pair lists; p, q of shape (B, n)."""
    inv = 1.0 / np.abs(p - q)

    def fg(z):
        dp = z[:, None] - p
        dq = z[:, None] - q
        ap, aq = np.abs(dp), np.abs(dq)
        terms = (ap + aq) * inv
        k = np.argmax(terms, axis=1)
        rows = np.arange(z.size)
        up = np.where(ap[rows, k] > 0, dp[rows, k] / np.where(ap[rows, k] > 0, ap[rows, k], 1.0), 0)
        uq = np.where(aq[rows, k] > 0, dq[rows, k] / np.where(aq[rows, k] > 0, aq[rows, k], 1.0), 0)
        return terms[rows, k], (up + uq) * inv[rows, k]

    b = p.shape[0]
    centre = np.full(b, (lo + hi) / 2)
    radius = np.full(b, abs(hi - lo) / 2 * (1 + 1e-9) + 1e-12)
    return ellipsoid_batch(fg, centre, radius)


def _degenerate_values(g: np.ndarray, perms: np.ndarray):
    """Best value and center for permutations with at least one degenerate pair."""
    q = g[perms]
    p = np.broadcast_to(g, q.shape)
    deg = np.abs(p - q) == 0
    first = np.argmax(deg, axis=1)
    c = g[first]
    same = np.all(~deg | (p == c[:, None]), axis=1)
    num = np.abs(p - q)
    den = np.abs(p - c[:, None]) + np.abs(q - c[:, None])
    r = np.where(den > 0, num / np.where(den > 0, den, 1.0), 1.0)
    val = np.where(same, np.min(np.minimum(r, 1.0), axis=1), 0.0)
    return val, c


def _evaluate(g: np.ndarray, perms: np.ndarray, chunk: int = 8192):
    """Lambda(g, T) and an attaining center for every row of ``perms``."""
    lo = complex(g.real.min(), g.imag.min())
    hi = complex(g.real.max(), g.imag.max())
    vals = np.empty(perms.shape[0])
    zs = np.empty(perms.shape[0], dtype=complex)
    deg_any = np.any(g[perms] == g[None, :], axis=1)
    di = np.flatnonzero(deg_any)
    if di.size:
        vals[di], zs[di] = _degenerate_values(g, perms[di])
    ni = np.flatnonzero(~deg_any)
    for start in range(0, ni.size, chunk):
        sl = ni[start:start + chunk]
        q = g[perms[sl]]
        p = np.broadcast_to(g, q.shape)
        z, f = _batch_solve(p, q, lo, hi)
        vals[sl] = 1.0 / f
        zs[sl] = z
    return vals, zs


def _polish(g: np.ndarray, perm: np.ndarray, z: complex, value: float):
    """Shrinking-simplex refinement started at the ellipsoid answer; keeps the better point."""
    if np.any(g == g[perm]):
        return value, z
    diam = float(np.max(np.abs(g[:, None] - g[None, :])))
    f = lambda w: float(phi(g, perm, np.array([w]))[0])
    w, fw, _ = nelder_mead(f, z, step=1e-6 * (1 + diam), xtol=1e-10 * (1 + diam))
    if 1.0 / fw > value:
        return 1.0 / fw, w
    return value, z


def lambda_given_T(s, T) -> tuple[float, complex]:
    """max over z of min_i ratio(g_i, g_T(i), z) and an attaining z."""
    g = _as_values(s)
    perm = np.asarray(T, dtype=int)
    if perm.shape != g.shape or not np.array_equal(np.sort(perm), np.arange(g.size)):
        raise ValueError("invalid permutation")
    if np.any(g == g[perm]):
        v, c = _degenerate_values(g, perm[None, :])
        return float(v[0]), complex(c[0])
    lo = complex(g.real.min(), g.imag.min())
    hi = complex(g.real.max(), g.imag.max())
    # coarse grid, then ellipsoid from the full box, then simplex polish
    f_batch = lambda zz: phi(g, perm, zz)
    seed = grid_seed(f_batch, lo, hi)
    z, f = _batch_solve(g[None, :], g[perm][None, :], lo, hi)
    z0 = complex(z[0]) if f[0] <= f_batch(np.array([seed]))[0] else seed
    value = 1.0 / float(f_batch(np.array([z0]))[0])
    value, z0 = _polish(g, perm, z0, value)
    return float(min(value, 1.0)), complex(z0)


def all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=int).reshape(-1, n)


def lambda_exact(s) -> LambdaReport:
    """Lambda(g) by enumerating every permutation (lexicographic tie-break)."""
    g = _as_values(s)
    n = g.size
    if n > EXACT_MAX_N:
        raise ValueError(f"exact oracle limited to n <= {EXACT_MAX_N}")
    perms = all_permutations(n)
    vals, zs = _evaluate(g, perms)
    best = float(vals.max())
    k = int(np.flatnonzero(vals >= best - TIE_TOL)[0])
    perm = perms[k]
    value, z = _polish(g, perm, complex(zs[k]), float(vals[k]))
    value = min(value, 1.0)
    r = ratios(g, perm, z)
    # report the value actually realized at z so that it equals min(ratios)
    return LambdaReport(float(r.min()), perm.copy(), complex(z), r)


def random_probe_spectrum(n: int, rng: np.random.Generator) -> np.ndarray:
    """Mixture of Gaussian clouds and jittered three-cluster configurations."""
    kind = rng.integers(0, 3)
    if kind == 0:
        return rng.normal(size=n) + 1j * rng.normal(size=n)
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    labels = np.arange(n) % 3 if kind == 1 else rng.integers(0, 3, n)
    jitter = 10.0 ** rng.uniform(-6, -1)
    return roots[labels] + jitter * (rng.normal(size=n) + 1j * rng.normal(size=n))


def lambda_min_estimate(n: int, trials: int, seed: int = 0) -> float:
    """Smallest lambda_exact over ``trials`` seeded random spectra of size n."""
    if not 1 <= n <= 7:
        raise ValueError("lambda_min_estimate supports 1 <= n <= 7")
    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(trials):
        best = min(best, lambda_exact(random_probe_spectrum(n, rng)).lambda_value)
    return best
