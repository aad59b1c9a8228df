"""Weighted finite spectra and the three-line center point.

Given a finite weighted point cloud ``g`` in the plane, :func:`find_center`
returns a point ``z0`` together with three unit normals at mutual angle
``2*pi/3`` such that each of the six closed half-planes bounded by the lines
through ``z0`` carries at least half of the total mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: base grid for the initial scan; rounded up to a multiple of 6 so that the
#: shifts by 2*pi/3 and by pi stay on the grid
GRID_SAMPLES = 4096
BISECT_WIDTH = 1e-13
_MASS_SLACK = 1e-12


def _geom_slack(values: np.ndarray) -> float:
    return 1e-12 * (1.0 + float(np.max(np.abs(values))))


@dataclass(frozen=True)
class WeightedSpectrum:
    """Finite multiset of complex points with positive weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=complex)).copy()
        w = np.atleast_1d(np.asarray(self.weights, dtype=float)).copy()
        if v.ndim != 1 or v.size == 0:
            raise ValueError("spectrum must be a non-empty list of points")
        if w.shape != v.shape:
            raise ValueError("weights and values differ in length")
        if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
            raise ValueError("spectrum values must be finite")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be positive")
        v.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, values) -> "WeightedSpectrum":
        """Normalized counting measure: weight 1/n on every point."""
        v = np.atleast_1d(np.asarray(values, dtype=complex))
        return cls(v, np.full(v.shape, 1.0 / max(v.size, 1)))

    def __len__(self) -> int:
        return self.values.size

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self.weights.sum()

    @property
    def is_uniform(self) -> bool:
        w = self.weights
        return bool(np.all(np.abs(w - w[0]) <= 1e-12 * w[0]))


@dataclass(frozen=True)
class CenterCertificate:
    """Center ``z0``, direction angle ``t0`` and the three half-plane splits.

    ``directions`` holds unit vectors at angles ``t0 - 2pi/3``, ``t0 + 2pi/3``
    and ``t0``; ``offsets[i] = <z0, directions[i]>``; ``masses[i]`` is the
    pair (mass of ``<g, v_i> <= a_i``, mass of ``<g, v_i> >= a_i``).
    """

    z0: complex
    t0: float
    directions: tuple[complex, complex, complex]
    offsets: tuple[float, float, float]
    masses: tuple[tuple[float, float], ...] = field(default=())


def _inner(z, v):
    """Euclidean inner product of plane vectors stored as complex numbers."""
    return np.real(z) * np.real(v) + np.imag(z) * np.imag(v)


def _median_of_projections(proj: np.ndarray, probs: np.ndarray, uniform: bool) -> np.ndarray:
    """Lower weighted median along the last axis (the infimum of the 1/2-level set)."""
    n = proj.shape[-1]
    if uniform:
        k = (n + 1) // 2 - 1
        return np.partition(proj, k, axis=-1)[..., k]
    order = np.argsort(proj, axis=-1, kind="stable")
    sp = np.take_along_axis(proj, order, axis=-1)
    cw = np.cumsum(probs[order], axis=-1)
    k = np.argmax(cw >= 0.5 - _MASS_SLACK, axis=-1)
    return np.take_along_axis(sp, k[..., None], axis=-1)[..., 0]


def directional_median(s: WeightedSpectrum, t) -> np.ndarray | float:
    """Smallest r with mass{<g, v(t)> <= r} >= 1/2.

    ``t`` may be a scalar or an array of angles.
    """
    t_arr = np.asarray(t, dtype=float)
    v = np.exp(1j * t_arr)[..., None]
    proj = _inner(s.values[None, :] if t_arr.ndim else s.values, v if t_arr.ndim else v[0])
    out = _median_of_projections(np.asarray(proj, dtype=float), s.probabilities, s.is_uniform)
    return float(out) if t_arr.ndim == 0 else out


def _c(s: WeightedSpectrum, t: float) -> float:
    ts = np.array([t - 2 * math.pi / 3, t, t + 2 * math.pi / 3])
    return float(np.sum(directional_median(s, ts)))


def _half_plane_masses(s: WeightedSpectrum, directions, offsets, slack: float):
    probs = s.probabilities
    masses = []
    for v, a in zip(directions, offsets):
        p = _inner(s.values, v)
        masses.append((float(probs[p <= a + slack].sum()), float(probs[p >= a - slack].sum())))
    return tuple(masses)


def _certificate_from(s: WeightedSpectrum, t0: float, b: np.ndarray | None, z0: complex | None = None) -> CenterCertificate:
    angles = (t0 - 2 * math.pi / 3, t0 + 2 * math.pi / 3, t0)
    dirs = tuple(complex(math.cos(a), math.sin(a)) for a in angles)
    # z0 solves <z0, v1> = b1, <z0, v2> = b2; the third line passes through it
    # because b1 + b2 + b3 = 0
    if z0 is None:
        m = np.array([[dirs[0].real, dirs[0].imag], [dirs[1].real, dirs[1].imag]])
        x, y = np.linalg.solve(m, b[:2])
        z0 = complex(x, y)
    offsets = tuple(float(_inner(z0, d)) for d in dirs)
    masses = _half_plane_masses(s, dirs, offsets, _geom_slack(s.values))
    return CenterCertificate(z0=z0, t0=float(t0 % (2 * math.pi)), directions=dirs,
                             offsets=offsets, masses=masses)


def _choose_offsets(s: WeightedSpectrum, t0: float) -> np.ndarray:
    """Pick b_i in [a(t_i), -a(t_i + pi)] with b_1 + b_2 + b_3 = 0."""
    ts = np.array([t0 - 2 * math.pi / 3, t0 + 2 * math.pi / 3, t0])
    left = directional_median(s, ts)
    right = -directional_median(s, ts + math.pi)
    right = np.maximum(right, left)
    lo, hi = left.sum(), right.sum()
    if lo > 0.0:
        # only reachable through rounding in the bisection; shift evenly
        return left - lo / 3.0
    if hi < 0.0:
        return right - hi / 3.0
    if hi == lo:
        return left
    return left + (right - left) * (-lo / (hi - lo))


def find_center(s: WeightedSpectrum) -> CenterCertificate:
    """Center point with three lines at 60 degrees, each splitting the mass in half.

    Scans c(t) = a(t - 2pi/3) + a(t) + a(t + 2pi/3) on a fixed grid for a
    direction with c(t) <= 0 and c(t + pi) <= 0; failing that, bisects
    c(. + pi) between a grid point with c <= 0 and its antipode.
    """
    vals = s.values
    if np.all(vals == vals[0]):
        return _certificate_from(s, 0.0, None, z0=complex(vals[0]))

    n_grid = -(-GRID_SAMPLES // 6) * 6
    ts = 2 * math.pi * np.arange(n_grid) / n_grid
    a = directional_median(s, ts)
    third, half = n_grid // 3, n_grid // 2
    c = a + np.roll(a, third) + np.roll(a, -third)
    c_anti = np.roll(c, -half)

    both = np.maximum(c, c_anti)
    k = int(np.argmin(both))
    if both[k] <= 0.0:
        t0 = float(ts[k])
    else:
        k1 = int(np.argmin(c))
        lo, hi = float(ts[k1]), float(ts[k1]) + math.pi
        # invariant: c(lo + pi) > 0 and c(hi + pi) = c(lo) <= 0
        while hi - lo > BISECT_WIDTH:
            mid = 0.5 * (lo + hi)
            if _c(s, mid + math.pi) > 0.0:
                lo = mid
            else:
                hi = mid
        t0 = hi
    return _certificate_from(s, t0, _choose_offsets(s, t0))


def verify_certificate(s: WeightedSpectrum, cert: CenterCertificate, tol: float = 1e-9) -> bool:
    """Re-check every certificate invariant by direct summation over atoms."""
    dirs = cert.directions
    for i in range(3):
        if abs(abs(dirs[i]) - 1.0) > tol:
            return False
        w = dirs[(i + 1) % 3] * dirs[i].conjugate()
        if abs(abs(math.atan2(w.imag, w.real)) - 2 * math.pi / 3) > tol:
            return False
    scale = 1.0 + float(np.max(np.abs(s.values)))
    if abs(sum(cert.offsets)) > tol * scale:
        return False
    for d, a in zip(dirs, cert.offsets):
        if abs(_inner(cert.z0, d) - a) > tol * scale:
            return False
    masses = _half_plane_masses(s, dirs, cert.offsets, _geom_slack(s.values))
    probs = s.probabilities
    slack = _geom_slack(s.values)
    for (ml, mr), d, a in zip(masses, dirs, cert.offsets):
        if ml < 0.5 - tol or mr < 0.5 - tol:
            return False
        on_line = float(probs[np.abs(_inner(s.values, d) - a) <= slack].sum())
        if abs(ml + mr - 1.0 - on_line) > tol:
            return False
    return True
