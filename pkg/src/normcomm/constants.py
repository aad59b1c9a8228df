"""Closed-form constants Lambda_n, tilde-Lambda_n and their extremal witnesses."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .center import WeightedSpectrum

SQRT3 = math.sqrt(3.0)
INF = math.inf

CUBE_ROOTS = np.exp(2j * np.pi * np.arange(3) / 3)


@dataclass(frozen=True)
class Interval:
    """Closed interval of admissible values (used where the value is not known)."""

    lower: float
    upper: float

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper


class WitnessKind(str, Enum):
    LAMBDA_UPPER = "LambdaUpper"
    TILDE_LAMBDA_ATTAINER = "TildeLambdaAttainer"


@dataclass(frozen=True)
class ExtremalWitness:
    spectrum: WeightedSpectrum
    claimed_quantity: WitnessKind
    reference_value: float
    minimizer_t0: float | None = None
    class_sizes: tuple[int, ...] = ()


def _check_n(n) -> None:
    if n == INF:
        return
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError("n must be an integer or math.inf")


def tilde_lambda(n) -> float:
    """Piecewise closed form; ``n`` may be ``math.inf``."""
    _check_n(n)
    if n == INF:
        return SQRT3
    if n <= 1:
        raise ValueError("undefined")
    if n in (2, 4):
        return 2.0
    k, r = divmod(int(n), 3)
    if r == 0:
        return SQRT3
    if r == 1:
        return 2 * SQRT3 / (math.sqrt((3 * k - 3) / (3 * k + 1)) + (3 * k + 3) / (3 * k + 1))
    return 2 * SQRT3 / (math.sqrt((3 * k + 6) / (3 * k + 2)) + 3 * k / (3 * k + 2))


def lambda_n(n) -> Interval:
    """Lambda_n as an interval; a point interval wherever the value is known."""
    _check_n(n)
    if n != INF and n < 1:
        raise ValueError("undefined")
    if n in (1, 2):
        return Interval(1.0, 1.0)
    if n == 4:
        return Interval(SQRT3 / 2, 1.0)
    return Interval(SQRT3 / 2, SQRT3 / 2)


def _three_class_sizes(n: int) -> tuple[int, int, int]:
    k, r = divmod(n, 3)
    return tuple(k + (1 if j >= 3 - r else 0) for j in range(3))


def extremal_lambda_witness(n: int) -> ExtremalWitness:
    """Spectrum on the cube roots of unity with balanced class sizes.

    Every class lies between n/5 and 2n/5 except for n = 7, where no integer
    split meets that window; the balanced split (2, 2, 3) is used there and
    its value sqrt(3)/2 is confirmed by the exact oracle instead.
    """
    _check_n(n)
    if n in (1, 2, 4) or n < 1:
        raise ValueError("no witness for this n")
    sizes = _three_class_sizes(int(n))
    if n != 7 and not all(n <= 5 * s <= 2 * n for s in sizes):
        raise AssertionError("class sizes outside the 1/5..2/5 window")
    vals = np.concatenate([np.full(s, CUBE_ROOTS[j]) for j, s in enumerate(sizes)])
    return ExtremalWitness(WeightedSpectrum.uniform(vals), WitnessKind.LAMBDA_UPPER,
                           SQRT3 / 2, None, sizes)


def tilde_masses(n: int) -> tuple[int, int, int]:
    """Atom counts (|A1|, |A2|, |A3|) of the diameter-one attainer."""
    if n == 2:
        return (1, 1, 0)
    k, r = divmod(n, 3)
    if r == 0:
        return (k, k, k)
    if r == 1:
        return (k, k, k + 1)
    return (k + 1, k + 1, k)


def extremal_tilde_witness(n: int) -> ExtremalWitness:
    """Three-valued spectrum of diameter 1 whose best L1 distance to a scalar is 1/tilde_lambda(n).

    ``minimizer_t0`` is the real minimizer of ``z -> ||g0 - z||_1`` for the
    unscaled ``g0`` on the cube roots of unity; the minimizer for the returned
    spectrum ``g = g0 / sqrt(3)`` is ``minimizer_t0 / sqrt(3)``.
    """
    _check_n(n)
    if n <= 1:
        raise ValueError("undefined")
    n = int(n)
    if n == 2:
        spec = WeightedSpectrum.uniform([1.0, 0.0])
        # every point of [0, 1] minimizes; no single t0 is reported
        return ExtremalWitness(spec, WitnessKind.TILDE_LAMBDA_ATTAINER, tilde_lambda(2), None, (1, 1))
    s1, s2, s3 = tilde_masses(n)
    a, b = s1 / n, s3 / n
    if n == 4:
        t0 = 1.0
    else:
        t0 = math.sqrt(3 * b * b / (4 * (2 * a - b))) - 0.5
    # A1 -> w1, A2 -> w2, A3 -> 1
    vals = np.concatenate([np.full(s1, CUBE_ROOTS[1]), np.full(s2, CUBE_ROOTS[2]),
                           np.full(s3, 1.0 + 0j)]) / SQRT3
    return ExtremalWitness(WeightedSpectrum.uniform(vals), WitnessKind.TILDE_LAMBDA_ATTAINER,
                           tilde_lambda(n), t0, (s1, s2, s3))


def tilde_l1_closed_form(n: int) -> float:
    """||g0 - t0||_1 for the unscaled attainer, straight from the t0 algebra."""
    if n == 4:
        return SQRT3 / 2
    _, _, s3 = tilde_masses(n)
    b = s3 / n
    return math.sqrt(3 - 6 * b) / 2 + 3 * b / 2


def constants_table(n_max: int) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        lam = lambda_n(n)
        rows.append({"n": n, "lambda_lower": lam.lower, "lambda_upper": lam.upper,
                     "tilde_lambda": tilde_lambda(n) if n >= 2 else None})
    return rows


def constants_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "lambda_lower", "lambda_upper", "tilde_lambda"])
    for r in rows:
        t = r["tilde_lambda"]
        w.writerow([r["n"], repr(r["lambda_lower"]), repr(r["lambda_upper"]), "" if t is None else repr(t)])
    return buf.getvalue()
