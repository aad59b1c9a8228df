"""Complex-plane primitives: angles, corners, ellipses and the cosine-law bound.

Points are plain Python/numpy complex numbers throughout the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

#: absolute slack used on every distance inequality
SLACK = 1e-12

SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class ConjugacyFrame:
    """Two opposite closed corners with common vertex.

    One corner is centred on the ray of direction ``axis_angle``, the other on
    the opposite ray; both have opening ``opening`` (radians, in ``[0, pi]``).
    """

    vertex: complex
    axis_angle: float
    opening: float

    def __post_init__(self):
        if not (0.0 <= self.opening <= math.pi):
            raise ValueError("opening must lie in [0, pi]")
        object.__setattr__(self, "vertex", complex(self.vertex))
        object.__setattr__(self, "axis_angle", float(self.axis_angle) % (2 * math.pi))

    @property
    def axis(self) -> complex:
        return complex(math.cos(self.axis_angle), math.sin(self.axis_angle))

    def corner_of(self, z: complex) -> int:
        """Return +1 / -1 for the forward / backward corner, 0 for the vertex
        itself and 2 if ``z`` lies in neither closed corner."""
        d = complex(z) - self.vertex
        if abs(d) <= SLACK:
            return 0
        half = self.opening / 2.0 + SLACK
        # angle between d and the axis, in [0, pi]
        ang = abs(math.atan2((d / self.axis).imag, (d / self.axis).real))
        if ang <= half:
            return 1
        if math.pi - ang <= half:
            return -1
        return 2


def angle_at(vertex: complex, p: complex, q: complex) -> float:
    """Angle p-vertex-q in [0, pi]."""
    u = complex(p) - complex(vertex)
    v = complex(q) - complex(vertex)
    if u == 0 or v == 0:
        raise ValueError("undefined angle")
    u /= abs(u)
    v /= abs(v)
    # atan2 form stays accurate near 0 and pi where acos loses digits
    w = v * u.conjugate()
    return abs(math.atan2(w.imag, w.real))


def ellipse_mask(zs, focus1: complex, focus2: complex, eccentricity: float) -> np.ndarray:
    """Vectorized :func:`ellipse_contains` over an array of points."""
    if not 0.0 < eccentricity <= 1.0:
        raise ValueError("eccentricity must lie in (0, 1]")
    f1, f2 = complex(focus1), complex(focus2)
    if f1 == f2:
        raise ValueError("degenerate ellipse")
    zs = np.asarray(zs, dtype=complex)
    return abs(f1 - f2) >= eccentricity * (np.abs(f1 - zs) + np.abs(f2 - zs)) - SLACK


def ellipse_contains(z: complex, focus1: complex, focus2: complex, eccentricity: float) -> bool:
    """True iff |f1 - f2| >= e (|f1 - z| + |f2 - z|)."""
    return bool(ellipse_mask(complex(z), focus1, focus2, eccentricity))


def cosine_bound_holds(z0: complex, z1: complex, z2: complex) -> bool:
    """Check |z1 - z2| >= (sqrt(3)/2)(|z1 - z0| + |z2 - z0|).

    Guaranteed whenever the angle z1-z0-z2 is at least 2*pi/3.  Both sides
    vanishing counts as true.
    """
    z0, z1, z2 = complex(z0), complex(z1), complex(z2)
    return abs(z1 - z2) >= SQRT3_2 * (abs(z1 - z0) + abs(z2 - z0)) - SLACK


def are_conjugate(A: Iterable[complex], B: Iterable[complex], frame: ConjugacyFrame) -> bool:
    """True iff A sits in one closed corner of ``frame`` and B in the opposite one."""
    ca = [frame.corner_of(a) for a in A]
    cb = [frame.corner_of(b) for b in B]
    if any(c == 2 for c in ca + cb):
        return False
    for side in (1, -1):
        if all(c in (0, side) for c in ca) and all(c in (0, -side) for c in cb):
            return True
    return False


def orientation(a: complex, b: complex, c: complex) -> float:
    """Twice the signed area of triangle abc (positive when counter-clockwise)."""
    return (b.real - a.real) * (c.imag - a.imag) - (b.imag - a.imag) * (c.real - a.real)


def in_triangle(z: complex, a: complex, b: complex, c: complex, slack: float = SLACK) -> bool:
    """Closed-triangle membership by sign-of-area tests.

    Degenerate (collinear) triangles count as their covering segment.
    """
    z, a, b, c = map(complex, (z, a, b, c))
    d1, d2, d3 = orientation(a, b, z), orientation(b, c, z), orientation(c, a, z)
    if abs(orientation(a, b, c)) <= slack:
        pts = np.array([a, b, c])
        # collinear: z must be on the line and inside the span
        i, j = max(((i, j) for i in range(3) for j in range(3)), key=lambda ij: abs(pts[ij[0]] - pts[ij[1]]))
        p, q = pts[i], pts[j]
        if abs(p - q) <= slack:
            return abs(z - p) <= slack
        return abs(orientation(p, q, z)) <= slack * max(1.0, abs(p - q)) and \
            abs(z - p) + abs(z - q) <= abs(p - q) + slack
    has_neg = min(d1, d2, d3) < -slack
    has_pos = max(d1, d2, d3) > slack
    return not (has_neg and has_pos)
