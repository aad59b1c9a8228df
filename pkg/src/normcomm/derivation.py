"""Brackets for the norm of the inner derivation x -> [a, x] from the algebra to L1.

All norms are trace-normalized. For a normal matrix with eigenvalues
``lam``:

* ``lower`` is the largest ``||[a, u]||_1`` over a documented set of
  candidate unitaries,
* ``upper`` is the smaller of ``2 min_z ||a - z||_1`` and the largest
  ``||a - u* a u||_2`` (attained at a permutation of the eigenbasis).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .center import WeightedSpectrum
from .constants import lambda_n
from .linalg import normal_eig, random_unitaries
from .optim import nelder_mead
from .pairing import build_pairing

EXHAUSTIVE_MAX_N = 8


@dataclass(frozen=True)
class MedianResult:
    z_star: complex
    value: float
    iterations: int


def _merge_atoms(values: np.ndarray, probs: np.ndarray):
    uniq, inv = np.unique(values, return_inverse=True)
    w = np.zeros(uniq.size)
    np.add.at(w, inv.ravel(), probs)
    return uniq, w


def _objective(values, probs, z) -> float:
    return float(np.sum(probs * np.abs(values - z)))


def _collinear_median(values: np.ndarray, probs: np.ndarray) -> complex | None:
    """Exact 1-D weighted median when every atom lies on one line; else None."""
    base = values[0]
    far = values[int(np.argmax(np.abs(values - base)))]
    span = abs(far - base)
    if span == 0:
        return complex(base)
    d = (far - base) / span
    rel = (values - base) / d
    if np.max(np.abs(rel.imag)) > 1e-12 * (1 + span):
        return None
    t = rel.real
    order = np.argsort(t, kind="stable")
    ts, cw = t[order], np.cumsum(probs[order])
    k = int(np.argmax(cw >= 0.5 - 1e-12))
    lo = ts[k]
    # a cumulative weight of exactly one half makes the whole gap optimal
    hi = ts[k + 1] if abs(cw[k] - 0.5) <= 1e-12 and k + 1 < ts.size else lo
    return complex(base + d * (lo + hi) / 2)


def _atom_optimal(values: np.ndarray, w: np.ndarray) -> int | None:
    """Index of an atom satisfying the subgradient optimality test, if any."""
    for i in np.argsort(-w, kind="stable"):
        diff = values - values[i]
        dist = np.abs(diff)
        mask = dist > 0
        pull = np.sum(w[mask] * diff[mask] / dist[mask])
        if abs(pull) <= w[i] * (1 + 1e-12):
            return int(i)
    return None


def weighted_median_l1(s: WeightedSpectrum, tol: float = 1e-13, max_iter: int = 10000) -> MedianResult:
    """Minimize z -> sum_i p_i |g_i - z| (p the normalized weights).

    Collinear spectra use the exact 1-D weighted median (midpoint of the
    optimal interval). Otherwise each atom is tested for optimality first
    and then a Weiszfeld iteration (with the Vardi-Zhang step at atoms) runs,
    followed by a simplex polish.
    """
    values = np.asarray(s.values, dtype=complex)
    probs = s.probabilities
    z = _collinear_median(values, probs)
    if z is not None:
        return MedianResult(z, _objective(values, probs, z), 0)
    uv, uw = _merge_atoms(values, probs)
    k = _atom_optimal(uv, uw)
    if k is not None:
        z = complex(uv[k])
        return MedianResult(z, _objective(values, probs, z), 0)

    scale = 1.0 + float(np.max(np.abs(uv - uv.mean())))
    z = complex(np.sum(uw * uv))
    it = 0
    for it in range(1, max_iter + 1):
        diff = uv - z
        dist = np.abs(diff)
        hit = dist <= 1e-12 * scale
        inv = np.where(hit, 0.0, uw / np.where(hit, 1.0, dist))
        t = np.sum(inv * uv) / np.sum(inv)
        if hit.any():
            # Vardi-Zhang: damp the step by the weight sitting at the iterate
            r = abs(np.sum(inv * (uv - z)))
            eta = float(uw[hit].sum())
            lam = min(1.0, eta / r) if r > 0 else 1.0
            t = (1 - lam) * t + lam * z
        step = abs(t - z)
        z = complex(t)
        if step <= tol * scale:
            break
    z, extra = _newton_polish(uv, uw, z, scale)
    more = 0
    if not _stationary(uv, uw, z, scale):
        f = lambda w: _objective(uv, uw, w)
        zp, fp, more = nelder_mead(f, z, step=1e-9 * scale, xtol=1e-13 * scale)
        if fp < f(z):
            z = zp
    return MedianResult(complex(z), _objective(values, probs, z), it + extra + more)


def _stationary(uv: np.ndarray, uw: np.ndarray, z: complex, scale: float) -> bool:
    """Gradient vanishes to rounding at a point away from every atom."""
    diff = z - uv
    dist = np.abs(diff)
    if np.any(dist <= 1e-9 * scale):
        return False
    return abs(np.sum(uw * diff / dist)) <= 1e-13


def _newton_polish(uv: np.ndarray, uw: np.ndarray, z: complex, scale: float, steps: int = 20):
    """Newton steps on the smooth objective away from the atoms (monotone)."""
    f = lambda w: _objective(uv, uw, w)
    fz = f(z)
    k = 0
    for k in range(1, steps + 1):
        diff = z - uv
        dist = np.abs(diff)
        if np.any(dist <= 1e-12 * scale):
            break
        ux, uy = diff.real / dist, diff.imag / dist
        gx, gy = np.sum(uw * ux), np.sum(uw * uy)
        hxx = np.sum(uw * (1 - ux * ux) / dist)
        hyy = np.sum(uw * (1 - uy * uy) / dist)
        hxy = np.sum(-uw * ux * uy / dist)
        det = hxx * hyy - hxy * hxy
        if det <= 0:
            break
        dx = -(hyy * gx - hxy * gy) / det
        dy = -(-hxy * gx + hxx * gy) / det
        t = 1.0
        while t > 1e-6:
            cand = z + t * complex(dx, dy)
            fc = f(cand)
            if fc <= fz:
                break
            t /= 2
        else:
            break
        done = abs(cand - z) <= 1e-15 * scale
        z, fz = cand, fc
        if done:
            break
    return z, k


def hungarian(cost: np.ndarray) -> np.ndarray:
    """Minimum-cost perfect assignment; returns col[i] assigned to row i.

    Shortest augmenting path with row/column potentials, O(n^3).
    """
    c = np.asarray(cost, dtype=float)
    n = c.shape[0]
    if c.shape != (n, n):
        raise ValueError("square cost matrix required")
    inf = math.inf
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    match = np.zeros(n + 1, dtype=int)  # match[j] = row assigned to column j (1-based, 0 = free)
    way = np.zeros(n + 1, dtype=int)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = np.full(n + 1, inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match[j0]
            free = ~used[1:]
            cur = c[i0 - 1, :] - u[i0] - v[1:]
            upd = free & (cur < minv[1:])
            minv[1:][upd] = cur[upd]
            way[1:][upd] = j0
            cand = np.where(free, minv[1:], inf)
            j1 = int(np.argmin(cand)) + 1
            delta = cand[j1 - 1]
            u[match[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while True:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
            if j0 == 0:
                break
    col = np.zeros(n, dtype=int)
    for j in range(1, n + 1):
        col[match[j] - 1] = j - 1
    return col


def _orbit_gain(a: np.ndarray) -> np.ndarray:
    n = a.size
    return -np.real(a[:, None] * np.conj(a)[None, :]) / n


def max_orbit_distance_l2(a_diag, exhaustive: bool | None = None) -> tuple[float, np.ndarray]:
    """max over permutations s of ||a - a_s||_2 (trace-normalized) and an argmax."""
    a = np.atleast_1d(np.asarray(a_diag, dtype=complex))
    n = a.size
    d = _orbit_gain(a)
    base = 2.0 * float(np.mean(np.abs(a) ** 2))
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_MAX_N
    if exhaustive:
        perms = np.array(list(itertools.permutations(range(n))), dtype=int)
        gains = d[np.arange(n)[None, :], perms].sum(axis=1)
        k = int(np.argmax(gains))
        perm = perms[k]
    else:
        perm = hungarian(-d)
        ident = float(np.trace(d))
        if ident >= float(d[np.arange(n), perm].sum()) - 1e-15 * (1 + base):
            perm = np.arange(n)
    gain = float(d[np.arange(n), perm].sum())
    return math.sqrt(max(base + 2.0 * gain, 0.0)), np.asarray(perm)


def commutator_l1_permutations(lam: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """||[a, u_s]||_1 for permutation unitaries of the eigenbasis, one per row of ``perms``."""
    return np.mean(np.abs(lam[None, :] - lam[perms]), axis=1)


def commutator_l1_unitaries(lam: np.ndarray, unitaries: np.ndarray) -> np.ndarray:
    """||[a, v]||_1 for unitaries v written in the eigenbasis of a (shape (k, n, n))."""
    diff = lam[:, None] - lam[None, :]
    c = diff[None, :, :] * unitaries
    # batched singular values; trace norm normalized by n
    return np.linalg.svd(c, compute_uv=False).sum(axis=1) / lam.size


@dataclass(frozen=True)
class CandidateBest:
    value: float
    permutation: np.ndarray
    source: str
    candidates: dict = field(default_factory=dict)


def best_commutator(lam: np.ndarray, n_random: int = 1000, seed: int = 0) -> CandidateBest:
    """Largest ||[a, u]||_1 over the documented candidate set."""
    lam = np.asarray(lam, dtype=complex)
    n = lam.size
    if n <= EXHAUSTIVE_MAX_N:
        perms = np.array(list(itertools.permutations(range(n))), dtype=int)
        vals = commutator_l1_permutations(lam, perms)
        k = int(np.argmax(vals))
        return CandidateBest(float(vals[k]), perms[k], "permutation",
                             {"all_permutations": int(perms.shape[0])})
    rng = np.random.default_rng(seed)
    fixed = [build_pairing(WeightedSpectrum.uniform(lam)).permutation,
             max_orbit_distance_l2(lam)[1], np.arange(n)]
    perms = np.vstack(fixed + [rng.permutation(n) for _ in range(n_random)])
    vals = commutator_l1_permutations(lam, perms)
    k = int(np.argmax(vals))
    best = CandidateBest(float(vals[k]), perms[k], "permutation")
    if n_random:
        us = random_unitaries(n_random, n, rng)
        uvals = commutator_l1_unitaries(lam, us)
        if uvals.max() > best.value:
            best = CandidateBest(float(uvals.max()), perms[k], "random_unitary")
    counts = {"structured_permutations": len(fixed), "random_permutations": n_random,
              "random_unitaries": n_random}
    return CandidateBest(best.value, best.permutation, best.source, counts)


@dataclass(frozen=True)
class DerivationBracket:
    lower: float
    upper: float
    witness_unitary: np.ndarray
    median: MedianResult
    ratio_window: tuple[float, float]
    lower_source: str = "permutation"
    candidates: dict = field(default_factory=dict)

    @property
    def ratio_lower(self) -> float | None:
        return self.lower / self.median.value if self.median.value > 0 else None

    @property
    def ratio_upper(self) -> float | None:
        return self.upper / self.median.value if self.median.value > 0 else None

    def to_json(self) -> dict:
        z = self.median.z_star
        return {
            "lower": self.lower,
            "upper": self.upper,
            "median": {"z": [z.real, z.imag], "value": self.median.value},
            "ratio_lower": self.ratio_lower,
            "ratio_upper": self.ratio_upper,
            "witness_permutation": [int(i) for i in self.witness_unitary],
            "lower_source": self.lower_source,
            "candidates": self.candidates,
        }


BRACKET_TOL = 1e-9


def derivation_bracket(a, n_random: int = 1000, seed: int = 0, check: bool = True) -> DerivationBracket:
    """Lower and upper bounds on the derivation norm of a normal matrix."""
    lam = normal_eig(a).eigenvalues
    n = lam.size
    med = weighted_median_l1(WeightedSpectrum.uniform(lam))
    orbit, _ = max_orbit_distance_l2(lam)
    best = best_commutator(lam, n_random=n_random, seed=seed)
    upper = min(2.0 * med.value, orbit)
    lam_low = lambda_n(n).lower
    br = DerivationBracket(best.value, upper, best.permutation, med, (2 * lam_low, 2.0),
                           best.source, best.candidates)
    if check:
        scale = 1.0 + float(np.max(np.abs(lam)))
        if br.lower > br.upper + BRACKET_TOL * scale:
            raise RuntimeError("bracket inverted: lower > upper")
        if br.lower < 2 * lam_low * med.value - BRACKET_TOL * scale:
            raise RuntimeError("lower bound below 2 Lambda_n min ||a - z||_1")
    return br


def orbit_diameter_l1(a, sample_budget: int = 1000, seed: int = 0) -> float:
    """Largest ||a - u a u*||_1 over the same candidate unitaries as the bracket."""
    lam = normal_eig(a).eigenvalues
    return best_commutator(lam, n_random=sample_budget, seed=seed).value
