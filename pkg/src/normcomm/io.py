"""JSON documents: spectrum files, matrix files and run reports."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .center import WeightedSpectrum
from .linalg import matrix_from_json, matrix_to_json  # noqa: F401

__all__ = [
    "ParseError", "RunReport", "parse_spectrum", "load_spectrum", "spectrum_to_json",
    "load_matrix", "save_matrix", "digest", "point", "dumps",
]


class ParseError(ValueError):
    pass


def _finite(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{what} must be a number")
    x = float(x)
    if not math.isfinite(x):
        raise ParseError(f"{what} must be finite")
    return x


def parse_spectrum(doc) -> WeightedSpectrum:
    """``{"points": [{"re": .., "im": .., "weight": ..}, ...]}``; missing weights mean uniform."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("points"), list):
        raise ParseError("spectrum document needs a 'points' list")
    pts = doc["points"]
    if not pts:
        raise ParseError("spectrum must be non-empty")
    vals, wts = [], []
    has_w = [isinstance(p, dict) and "weight" in p for p in pts]
    if any(has_w) and not all(has_w):
        raise ParseError("either every point carries a weight or none does")
    for k, p in enumerate(pts):
        if not isinstance(p, dict) or "re" not in p:
            raise ParseError(f"point {k} needs at least 're'")
        vals.append(complex(_finite(p["re"], f"points[{k}].re"), _finite(p.get("im", 0.0), f"points[{k}].im")))
        if all(has_w):
            w = _finite(p["weight"], f"points[{k}].weight")
            if w <= 0:
                raise ParseError(f"points[{k}].weight must be positive")
            wts.append(w)
    if all(has_w):
        return WeightedSpectrum(np.array(vals), np.array(wts))
    return WeightedSpectrum.uniform(np.array(vals))


def load_spectrum(path) -> WeightedSpectrum:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    return parse_spectrum(text)


def spectrum_to_json(s: WeightedSpectrum, weights: bool = False) -> dict:
    pts = []
    for v, w in zip(s.values, s.weights):
        d = {"re": float(v.real), "im": float(v.imag)}
        if weights:
            d["weight"] = float(w)
        pts.append(d)
    return {"points": pts}


def load_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8")
        return matrix_from_json(json.loads(text))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def save_matrix(path, a) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)), encoding="utf-8")


def digest(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode("utf-8")
    return "sha256:" + hashlib.sha256(text).hexdigest()


def point(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


@dataclass
class RunReport:
    command: str
    input_digest: str | None
    outputs: dict
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time: float | None = None
    version: str = "0.1.0"

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc) -> "RunReport":
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        return cls(**doc)


def dumps(doc) -> str:
    """Canonical JSON text: sorted keys, shortest round-trip floats."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
