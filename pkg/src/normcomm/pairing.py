"""Permutations T of a uniform finite spectrum with Lambda(g, T, z0) >= sqrt(3)/2.

The construction works from a :class:`~normcomm.center.CenterCertificate`.
Every atom is placed on the minus or plus side of each of the three lines
through ``z0``. Its sign pattern then puts it in one of eight sectors. Atoms
in opposite 60 degree sectors are swapped. Leftover atoms are grouped in
fours, where two of each group are swapped and the other two are swapped
through the center. For odd ``n`` one, three or five atoms near the lines
are first moved by a fixed point, a 3-cycle or a 5-cycle.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .center import CenterCertificate, WeightedSpectrum, find_center, verify_certificate
from .plane import SQRT3_2, angle_at, in_triangle

ALLOWED_CYCLES = (1, 2, 3, 5)
BOUND_TOL = 1e-9


def lambda_ratio(p: complex, q: complex, z: complex) -> float:
    """|p - q| / (|p - z| + |q - z|), with 0/0 read as 1."""
    num = abs(complex(p) - complex(q))
    den = abs(complex(p) - complex(z)) + abs(complex(q) - complex(z))
    if den == 0.0:
        return 1.0
    return min(num / den, 1.0)


def ratios(values: np.ndarray, perm: np.ndarray, z: complex) -> np.ndarray:
    """Vectorized :func:`lambda_ratio` over all pairs (g_i, g_T(i))."""
    p = np.asarray(values, dtype=complex)
    q = p[np.asarray(perm)]
    num = np.abs(p - q)
    den = np.abs(p - z) + np.abs(q - z)
    out = np.ones_like(num)
    nz = den > 0
    out[nz] = np.minimum(num[nz] / den[nz], 1.0)
    return out


def cycles_of(perm) -> list[list[int]]:
    """Cycle decomposition, each cycle starting at its smallest index."""
    perm = list(perm)
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class Pairing:
    """Permutation (0-based) with its center and cycle structure."""

    permutation: np.ndarray
    z0: complex
    cycle_partition: dict[int, list[list[int]]]
    achieved_lambda: float
    certificate: CenterCertificate | None = None


def cycle_type_report(p: Pairing) -> dict[int, int]:
    counts: dict[int, int] = {}
    for cyc in cycles_of(p.permutation):
        k = len(cyc)
        if k not in ALLOWED_CYCLES:
            raise ValueError("pairing corrupt")
        counts[k] = counts.get(k, 0) + 1
    return dict(sorted(counts.items()))


class _Builder:
    def __init__(self, g: np.ndarray, cert: CenterCertificate):
        self.g = g
        self.z0 = complex(cert.z0)
        self.dirs = cert.directions
        self.perm = np.full(g.size, -1, dtype=int)
        self.scale = 1.0 + float(np.max(np.abs(g)))

    # -- helpers ---------------------------------------------------------
    def proj(self, idx: np.ndarray, j: int) -> np.ndarray:
        v = self.dirs[j]
        return self.g[idx].real * v.real + self.g[idx].imag * v.imag

    def order(self, idx: np.ndarray, j: int) -> np.ndarray:
        """Atoms sorted by projection on direction j, ties by index."""
        return idx[np.lexsort((idx, self.proj(idx, j)))]

    def at_center(self, i: int) -> bool:
        return self.g[i] == self.z0

    def step_angle(self, i: int, k: int) -> float:
        if self.at_center(i) or self.at_center(k):
            return math.pi
        return angle_at(self.z0, self.g[i], self.g[k])

    def set_cycle(self, cyc) -> None:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            self.perm[a] = b

    # -- even case -------------------------------------------------------
    def even(self, idx: np.ndarray, plus: list[set[int]]) -> None:
        """Pair the atoms ``idx`` given balanced halves ``plus[j]`` per direction."""
        if idx.size == 0:
            return
        sectors: dict[tuple[bool, bool, bool], list[int]] = {}
        for i in idx.tolist():
            sig = tuple(i in plus[j] for j in range(3))
            sectors.setdefault(sig, []).append(i)
        # sector j+ has + on direction j only; j- is its mirror; index 3 is the centre
        keys = [
            ((True, False, False), (False, True, True)),
            ((False, True, False), (True, False, True)),
            ((False, False, True), (True, True, False)),
            ((True, True, True), (False, False, False)),
        ]
        pos = [sectors.get(k[0], []) for k in keys]
        neg = [sectors.get(k[1], []) for k in keys]
        diffs = {len(p) - len(m) for p, m in zip(pos, neg)}
        if len(diffs) != 1:
            raise RuntimeError("sector counts inconsistent")
        t = diffs.pop()
        if t < 0:
            pos, neg, t = neg, pos, -t
        spare = []
        for j in range(4):
            members = pos[j]
            if j < 3:
                # keep the atoms farthest from the centre for the quadruples
                dist = np.abs(self.g[members] - self.z0)
                ranked = [members[k] for k in np.lexsort((members, -dist))]
            else:
                ranked = sorted(members)
            chosen = sorted(ranked[:t])
            rest = sorted(set(members) - set(chosen))
            spare.append(chosen)
            for a, b in zip(rest, sorted(neg[j])):
                self.set_cycle([a, b])
        for quad in zip(*spare):
            a1, a2, a3, a4 = quad
            pairs = [(a1, a2, a3), (a1, a3, a2), (a2, a3, a1)]
            x, y, w = max(pairs, key=lambda p: self.step_angle(p[0], p[1]))
            self.set_cycle([x, y])
            self.set_cycle([w, a4])

    def halves(self, idx: np.ndarray) -> list[set[int]]:
        out = []
        for j in range(3):
            o = self.order(idx, j)
            out.append(set(o[o.size // 2:].tolist()))
        return out

    # -- odd case --------------------------------------------------------
    def odd(self, idx: np.ndarray) -> None:
        m = idx.size
        h = (m - 1) // 2
        minus, plus, mid = [], [], []
        for j in range(3):
            o = self.order(idx, j)
            minus.append(set(o[:h].tolist()))
            mid.append(int(o[h]))
            plus.append(set(o[h + 1:].tolist()))

        centre = [i for i in idx.tolist() if self.at_center(i)]
        if centre or len(set(mid)) < 3:
            c = centre[0] if centre else self._closest_middle(mid)
            self.z0 = complex(self.g[c])
            self.set_cycle([c])
            rest = idx[idx != c]
            self.even(rest, self.halves(rest))
            return
        y0 = set(mid)
        if self._three_cycle_ok(mid, minus, plus):
            self.set_cycle(list(mid))
            rest = idx[~np.isin(idx, mid)]
            self.even(rest, [p - y0 for p in plus])
            return
        five = self._five_cycle(mid, minus, plus)
        if five is None:
            raise RuntimeError("no admissible cycle for the odd remainder")
        self.set_cycle(five)
        rest = idx[~np.isin(idx, five)]
        self.even(rest, [p - set(five) for p in plus])

    def _closest_middle(self, mid: list[int]) -> int:
        d = [abs(self.g[i] - self.z0) for i in mid]
        return mid[int(np.argmin(d))]

    def _three_cycle_ok(self, mid, minus, plus) -> bool:
        a, b, c = (self.g[i] for i in mid)
        if not in_triangle(self.z0, a, b, c, slack=1e-12 * self.scale ** 2):
            return False
        for j in range(3):
            others = [i for i in mid if i != mid[j]]
            if sum(i in plus[j] for i in others) != 1 or sum(i in minus[j] for i in others) != 1:
                return False
        return True

    def _five_cycle(self, mid, minus, plus):
        for i1, i2, i3 in itertools.permutations(range(3)):
            w1, w2, w3 = mid[i1], mid[i2], mid[i3]
            if not (w1 in minus[i2] and w3 in plus[i2]):
                continue
            if not (w2 in minus[i1] and w3 in minus[i1] and w1 in plus[i3] and w2 in plus[i3]):
                continue
            four = sorted(plus[i1] & plus[i2] & minus[i3] - set(mid))
            five = sorted(plus[i1] & minus[i2] & minus[i3] - set(mid))
            if not four or not five:
                continue
            return [w1, four[0], w2, five[0], w3]
        return None


def _snap_center(g: np.ndarray, z0: complex) -> complex:
    """Move z0 onto an atom lying within rounding distance of it."""
    d = np.abs(g - z0)
    k = int(np.argmin(d))
    if d[k] <= 1e-10 * (1.0 + float(np.max(np.abs(g)))):
        return complex(g[k])
    return z0


def build_pairing(s: WeightedSpectrum) -> Pairing:
    """Permutation T and center z0 with min_i ratio(g_i, g_T(i), z0) >= sqrt(3)/2.

    Even n yields an involution; odd n adds one cycle of length 1, 3 or 5.
    """
    if not s.is_uniform:
        raise ValueError("pairing requires counting measure")
    g = np.asarray(s.values, dtype=complex)
    cert = find_center(s)
    if not verify_certificate(s, cert):
        raise RuntimeError("center certificate invalid")
    b = _Builder(g, cert)
    b.z0 = _snap_center(g, b.z0)
    idx = np.arange(g.size)
    if g.size % 2 == 0:
        b.even(idx, b.halves(idx))
    else:
        b.odd(idx)
    perm = b.perm
    if np.any(perm < 0) or not np.array_equal(np.sort(perm), idx):
        raise RuntimeError("pairing corrupt")
    z0 = b.z0
    lam = float(np.min(ratios(g, perm, z0)))
    parts: dict[int, list[list[int]]] = {}
    for cyc in cycles_of(perm):
        parts.setdefault(len(cyc), []).append(cyc)
    if not set(parts) <= set(ALLOWED_CYCLES):
        raise RuntimeError("pairing corrupt")
    return Pairing(permutation=perm, z0=z0, cycle_partition=dict(sorted(parts.items())),
                   achieved_lambda=lam, certificate=cert)


def step_angles_ok(values, p: Pairing, tol: float = BOUND_TOL) -> bool:
    """Every step i -> T(i) either touches z0 or subtends an angle >= 2pi/3 at z0."""
    g = np.asarray(values, dtype=complex)
    for i, j in enumerate(p.permutation):
        if g[i] == p.z0 or g[j] == p.z0:
            continue
        if g[i] == g[j]:
            return False
        if angle_at(p.z0, g[i], g[j]) < 2 * math.pi / 3 - tol:
            return False
    return True


def bound_holds(p: Pairing) -> bool:
    return p.achieved_lambda >= SQRT3_2 - BOUND_TOL
