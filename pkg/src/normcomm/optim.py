"""Small derivative-free minimizers for convex functions of one complex variable."""
from __future__ import annotations

from typing import Callable

import numpy as np


def ellipsoid_batch(
    value_and_subgrad: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    center: np.ndarray,
    radius: np.ndarray,
    iters: int = 360,
    rel_stop: float = 1e-14,
) -> tuple[np.ndarray, np.ndarray]:
    """Central-cut ellipsoid method run on a batch of planar convex problems.

    ``value_and_subgrad(z)`` takes a complex array of shape (B,) and returns
    the objective values and complex subgradients at those points. The start
    ellipsoid for problem b is the disc of radius ``radius[b]`` about
    ``center[b]`` and must contain a minimizer. Returns the best point seen
    and its value for every problem.
    """
    c = np.asarray(center, dtype=complex).copy()
    b = c.size
    r = np.asarray(radius, dtype=float)
    # shape matrix entries [[pxx, pxy], [pxy, pyy]]
    pxx = r ** 2 + 0.0
    pyy = r ** 2 + 0.0
    pxy = np.zeros(b)
    best_f = np.full(b, np.inf)
    best_z = c.copy()
    active = np.ones(b, dtype=bool)
    r0 = np.maximum(r, 1e-300)
    for _ in range(iters):
        f, g = value_and_subgrad(c)
        better = f < best_f
        best_f = np.where(better, f, best_f)
        best_z = np.where(better, c, best_z)
        gx, gy = g.real, g.imag
        pgx = pxx * gx + pxy * gy
        pgy = pxy * gx + pyy * gy
        gpg = gx * pgx + gy * pgy
        # a zero subgradient certifies optimality
        active &= gpg > 0
        # stop once the ellipsoid is below resolution
        active &= np.sqrt(np.maximum(pxx + pyy, 0.0)) > rel_stop * (r0 + np.abs(c))
        if not active.any():
            break
        s = np.where(active, 1.0 / np.sqrt(np.where(gpg > 0, gpg, 1.0)), 0.0)
        ux, uy = pgx * s, pgy * s
        c = c - (ux + 1j * uy) / 3.0
        k = np.where(active, 4.0 / 3.0, 1.0)
        q = np.where(active, 2.0 / 3.0, 0.0)
        pxx = k * (pxx - q * ux * ux)
        pxy = k * (pxy - q * ux * uy)
        pyy = k * (pyy - q * uy * uy)
    f, _ = value_and_subgrad(c)
    better = f < best_f
    return np.where(better, c, best_z), np.where(better, f, best_f)


def nelder_mead(
    f: Callable[[complex], float],
    z0: complex,
    step: float,
    xtol: float = 1e-12,
    max_iter: int = 5000,
) -> tuple[complex, float, int]:
    """Shrinking-simplex (Nelder-Mead) search in the plane.

    Stops when the simplex diameter drops below ``xtol``. Returns
    ``(z, f(z), iterations)``.
    """
    step = step if step > 0 else 1.0
    pts = [complex(z0), complex(z0) + step, complex(z0) + 1j * step]
    vals = [f(p) for p in pts]
    it = 0
    for it in range(1, max_iter + 1):
        order = np.argsort(vals, kind="stable")
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        diam = max(abs(pts[0] - pts[1]), abs(pts[0] - pts[2]), abs(pts[1] - pts[2]))
        if diam < xtol:
            break
        centroid = (pts[0] + pts[1]) / 2
        xr = centroid + (centroid - pts[2])
        fr = f(xr)
        if fr < vals[0]:
            xe = centroid + 2 * (centroid - pts[2])
            fe = f(xe)
            pts[2], vals[2] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < vals[1]:
            pts[2], vals[2] = xr, fr
        else:
            xc = centroid + 0.5 * (pts[2] - centroid) if fr >= vals[2] else centroid + 0.5 * (xr - centroid)
            fc = f(xc)
            if fc < min(fr, vals[2]):
                pts[2], vals[2] = xc, fc
            else:
                for i in (1, 2):
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
                    vals[i] = f(pts[i])
    k = int(np.argmin(vals))
    return pts[k], vals[k], it


def grid_seed(f_batch: Callable[[np.ndarray], np.ndarray], lo: complex, hi: complex, m: int = 41) -> complex:
    """Best point of an m-by-m grid over the box [lo, hi]."""
    xs = np.linspace(lo.real, hi.real, m)
    ys = np.linspace(lo.imag, hi.imag, m)
    zz = (xs[None, :] + 1j * ys[:, None]).ravel()
    return complex(zz[int(np.argmin(f_batch(zz)))])
