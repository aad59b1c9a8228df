"""Dense complex matrix kernel and the operator constructions built on it.

Eigen-decompositions use cyclic complex Jacobi rotations. A single Hermitian
matrix is diagonalized directly; a normal matrix is handled by jointly
diagonalizing its real and imaginary parts (which commute). The operator
constructions cover:

* a unitary ``v`` with ``Re(X)_+ <= v |X| v*``,
* unitaries ``v, w`` with ``|X + Y| <= v|X|v* + w|Y|w*``,
* the unitary for two spectra sitting in opposite corners,
* the commutator lower bound ``|[a, u]| >= C (|a - z0| + u|a - z0|u*)``.

Norms reported elsewhere are trace-normalized: ``tau = Tr / n``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .plane import ConjugacyFrame, are_conjugate

HERMITIAN_TOL = 1e-10
NORMAL_TOL = 1e-8
CLIP_REL = 1e-12
RANK_REL = 1e-10
PSD_TOL = 1e-8
MAX_SWEEPS = 60


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues[None, :]) @ u.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("square matrix required")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def fro(a) -> float:
    return float(np.linalg.norm(a))


def adj(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_defect(a: np.ndarray) -> float:
    return fro(a - adj(a))


def normality_defect(a: np.ndarray) -> float:
    return fro(a @ adj(a) - adj(a) @ a)


def unitarity_defect(u: np.ndarray) -> float:
    return fro(adj(u) @ u - np.eye(u.shape[0]))


# ---------------------------------------------------------------- Jacobi kernel

@lru_cache(maxsize=128)
def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off(mats: list[np.ndarray]) -> float:
    tot = 0.0
    for m in mats:
        off = m - np.diag(np.diag(m))
        tot += float(np.sum(off.real ** 2 + off.imag ** 2))
    return math.sqrt(tot)


def _rotation_params(mats: list[np.ndarray], p: np.ndarray, q: np.ndarray):
    """Cosines and sines of the pair rotations minimizing joint off-diagonal mass."""
    if len(mats) == 1:
        m = mats[0]
        d = m.diagonal().real
        x = d[p] - d[q]
        w = 2 * m[p, q].conj()
        nrm = np.sqrt(x * x + (w.real * w.real + w.imag * w.imag))
        # rotate by the half angle; the sign flip keeps c real and >= 1/sqrt(2)
        sgn = np.where(x < 0, -1.0, 1.0)
        nrm = np.where(nrm == 0, 1.0, nrm) * sgn
        x = np.where(w == 0, 1.0, x / nrm)
        t = np.sqrt(2 * (1 + x))
        return 0.5 * t, w / (nrm * t)
    else:
        h = np.stack([np.stack([m[p, p].real - m[q, q].real, 2 * m[p, q].real, 2 * m[p, q].imag], axis=-1)
                      for m in mats], axis=1)  # (pairs, mats, 3)
        g = np.einsum("kmi,kmj->kij", h, h)
        # top eigenvector of each 3x3 symmetric Gram matrix
        _, vecs = np.linalg.eigh(g)
        v = vecs[:, :, -1]
        v[np.all(g == 0, axis=(1, 2))] = np.array([1.0, 0, 0])
        x, y, z = v[:, 0], v[:, 1], v[:, 2]
    flip = x < 0
    x, y, z = np.where(flip, -x, x), np.where(flip, -y, y), np.where(flip, -z, z)
    c = np.sqrt((1 + x) / 2)
    s = (y - 1j * z) / np.sqrt(2 * (1 + x))
    return c, s


@lru_cache(maxsize=128)
def _identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def _rotation_matrix(n: int, p, q, c, s) -> np.ndarray:
    """Product of the disjoint block rotations [[c, -conj(s)], [s, c]] on (p, q)."""
    j = _identity(n).copy()
    j[p, p] = c
    j[q, q] = c
    j[q, p] = s
    j[p, q] = -np.conj(s)
    return j


def joint_diagonalize(mats: list[np.ndarray], tol: float = 1e-15) -> tuple[np.ndarray, list[np.ndarray]]:
    """Unitary U making every U* M U (nearly) diagonal for commuting Hermitian inputs."""
    n = mats[0].shape[0]
    work = [np.array(m, dtype=complex) for m in mats]
    u = np.eye(n, dtype=complex)
    if n == 1:
        return u, work
    rounds = _round_robin(n)
    scale = math.sqrt(sum(fro(m) ** 2 for m in mats)) or 1.0
    prev = _off(work)
    stalled = 0
    for _ in range(MAX_SWEEPS):
        if prev <= tol * scale:
            break
        for p, q in rounds:
            c, s = _rotation_params(work, p, q)
            j = _rotation_matrix(n, p, q, c, s)
            jh = j.conj().T
            work = [jh @ m @ j for m in work]
            u = u @ j
        cur = _off(work)
        # inputs that commute only approximately stall above the tolerance
        stalled = stalled + 1 if cur > 0.9 * prev else 0
        if stalled >= 3:
            break
        prev = cur
    return u, work


def hermitian_eig(a) -> SpectralDecomposition:
    """Eigenvalues ascending with a unitary eigenbasis."""
    a = as_matrix(a)
    if hermitian_defect(a) > HERMITIAN_TOL * (1 + fro(a)):
        raise ValueError("hermitian required")
    h = (a + adj(a)) / 2
    u, (d,) = joint_diagonalize([h])
    lam = np.diag(d).real.copy()
    order = np.argsort(lam, kind="stable")
    return SpectralDecomposition(lam[order], u[:, order])


def normal_eig(a) -> SpectralDecomposition:
    """Complex eigenvalues (sorted by real then imaginary part) with unitary eigenbasis."""
    a = as_matrix(a)
    if normality_defect(a) > NORMAL_TOL * (1 + fro(a) ** 2):
        raise ValueError("normal required")
    re = (a + adj(a)) / 2
    im = (a - adj(a)) / 2j
    u, (dr, di) = joint_diagonalize([re, im])
    lam = np.diag(dr).real + 1j * np.diag(di).real
    order = np.lexsort((lam.imag, lam.real))
    return SpectralDecomposition(lam[order], u[:, order])


def _hermitian_function(h: np.ndarray, fn) -> np.ndarray:
    dec = hermitian_eig(h)
    u = dec.eigenvectors
    return (u * fn(dec.eigenvalues)[None, :]) @ adj(u)


def psd_sqrt(h: np.ndarray) -> np.ndarray:
    """Square root of a PSD Hermitian matrix; tiny negative eigenvalues are clipped."""
    dec = hermitian_eig(h)
    lam = dec.eigenvalues
    top = max(float(np.max(np.abs(lam))), 0.0) if lam.size else 0.0
    if lam.size and lam.min() < -CLIP_REL * top:
        raise ValueError(f"matrix not positive semidefinite (eigenvalue {lam.min():.3e})")
    lam = np.sqrt(np.clip(lam, 0.0, None))
    u = dec.eigenvectors
    out = (u * lam[None, :]) @ adj(u)
    return (out + adj(out)) / 2


def matrix_abs(x) -> np.ndarray:
    """|X| = (X* X)^(1/2).

    The eigenbasis V comes from X* X; the square roots are taken as the
    column norms of X V, which keeps absolute accuracy near zero where
    sqrt of a rounded eigenvalue would not.
    """
    return polar_parts(x).abs_x


def eigmin(h) -> float:
    h = as_matrix(h)
    return float(hermitian_eig((h + adj(h)) / 2).eigenvalues[0])


def real_part(x: np.ndarray) -> np.ndarray:
    return (x + adj(x)) / 2


def positive_part(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(h_+, support projection of h_+) for Hermitian h."""
    dec = hermitian_eig(h)
    lam = dec.eigenvalues
    u = dec.eigenvectors
    top = float(np.max(np.abs(lam))) if lam.size else 0.0
    pos = lam > RANK_REL * top
    hp = (u * np.where(pos, lam, 0.0)[None, :]) @ adj(u)
    proj = u[:, pos] @ adj(u[:, pos])
    return (hp + adj(hp)) / 2, proj


@dataclass(frozen=True)
class PolarParts:
    partial_isometry: np.ndarray
    abs_x: np.ndarray
    left_support: np.ndarray
    right_support: np.ndarray


def polar_parts(x) -> PolarParts:
    """X = u |X| with u a partial isometry vanishing on ker |X|."""
    x = as_matrix(x)
    n = x.shape[0]
    dec = hermitian_eig((adj(x) @ x + adj(adj(x) @ x)) / 2)
    vecs = dec.eigenvectors
    # column norms of X V resolve small singular values far better than sqrt(eig)
    xv = x @ vecs
    sig = np.linalg.norm(xv, axis=0)
    smax = float(sig.max()) if n else 0.0
    keep = sig > RANK_REL * smax if smax > 0 else np.zeros(n, dtype=bool)
    wk = xv[:, keep] / sig[keep][None, :]
    u = wk @ adj(vecs[:, keep])
    absx = (vecs * sig[None, :]) @ adj(vecs)
    absx = (absx + adj(absx)) / 2
    return PolarParts(u, absx, u @ adj(u), adj(u) @ u)


def _completion(p_left: np.ndarray, p_right: np.ndarray) -> np.ndarray:
    """Partial isometry from range(p_right) onto range(p_left); ranks must match."""
    left = _range_basis(p_left)
    right = _range_basis(p_right)
    if left.shape[1] != right.shape[1]:
        raise ValueError("supports of different rank")
    return left @ adj(right)


def _range_basis(p: np.ndarray) -> np.ndarray:
    dec = hermitian_eig((p + adj(p)) / 2)
    return dec.eigenvectors[:, dec.eigenvalues > 0.5]


class VerificationError(RuntimeError):
    def __init__(self, message: str, eigenvalue: float):
        super().__init__(f"{message} (eigmin {eigenvalue:.3e})")
        self.eigenvalue = eigenvalue


def realpart_domination_unitary(x, check: bool = True) -> np.ndarray:
    """Unitary v with Re(X)_+ <= v |X| v*.

    With p the support of Re(X)_+ and a = p(X + |X|), the polar part w of a
    maps onto p. It is completed to a unitary through the complementary
    supports.
    """
    x = as_matrix(x)
    n = x.shape[0]
    absx = matrix_abs(x)
    rp, p = positive_part(real_part(x))
    a = p @ (x + absx)
    pol = polar_parts(a)
    w = pol.partial_isometry
    q = pol.right_support
    one = np.eye(n)
    w0 = polar_parts((one - pol.left_support) @ (one - q)).partial_isometry
    # rank-deficient products: finish with an isometry between the complements
    if unitarity_defect(w + w0) > 1e-8:
        w0 = _completion(one - pol.left_support, one - q)
    v = w + w0
    if check:
        e = eigmin(v @ absx @ adj(v) - rp)
        if e < -PSD_TOL * (1 + fro(x)):
            raise VerificationError("Re(X)_+ <= v|X|v* failed", e)
    return v


def triangle_unitaries(x, y, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Unitaries v, w with |X + Y| <= v|X|v* + w|Y|w*."""
    x, y = as_matrix(x), as_matrix(y)
    if x.shape != y.shape:
        raise ValueError("dimension mismatch")
    pol = polar_parts(x + y)
    n = x.shape[0]
    # extend the polar part to a unitary so that u*(X+Y) = |X+Y| holds exactly
    u = pol.partial_isometry
    one = np.eye(n)
    u = u + _completion(one - pol.left_support, one - pol.right_support)
    ux, uy = adj(u) @ x, adj(u) @ y
    v0 = realpart_domination_unitary(ux, check=False)
    w0 = realpart_domination_unitary(uy, check=False)
    # |X+Y| = Re(u*X) + Re(u*Y) and |u*X| = |X|
    v, w = v0, w0
    if check:
        e = eigmin(v @ matrix_abs(x) @ adj(v) + w @ matrix_abs(y) @ adj(w) - matrix_abs(x + y))
        if e < -PSD_TOL * (1 + fro(x) + fro(y)):
            raise VerificationError("|X+Y| <= v|X|v* + w|Y|w* failed", e)
    return v, w


def conjugate_spectra_unitary(a, b, frame: ConjugacyFrame, check: bool = True) -> np.ndarray:
    """Unitary v with cos(alpha/2)(|A - z0| + |B - z0|) <= v|A - B|v*.

    A and B are normal matrices (not necessarily commuting) whose spectra lie in opposite
    corners of ``frame``.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    sa = normal_eig(a).eigenvalues
    sb = normal_eig(b).eigenvalues
    if not are_conjugate(sa, sb, frame):
        raise ValueError("conjugacy precondition failed")
    z0 = frame.vertex
    # rotate so that the corner holding A is centred on the positive reals
    c = np.conj(frame.axis)
    if not all(frame.corner_of(z) in (0, 1) for z in sa):
        c = -c
    n = a.shape[0]
    one = np.eye(n)
    a1 = c * (a - z0 * one)
    b1 = c * (b - z0 * one)
    v = realpart_domination_unitary(a1 - b1, check=False)
    if check:
        lhs = v @ matrix_abs(a - b) @ adj(v)
        rhs = math.cos(frame.opening / 2) * (matrix_abs(a - z0 * one) + matrix_abs(b - z0 * one))
        e = eigmin(lhs - rhs)
        if e < -PSD_TOL * (1 + fro(a) + fro(b)):
            raise VerificationError("conjugate-corner bound failed", e)
    return v


def permutation_matrix(perm) -> np.ndarray:
    """Matrix of the map e_i -> e_T(i)."""
    perm = np.asarray(perm, dtype=int)
    n = perm.size
    k = np.zeros((n, n))
    k[perm, np.arange(n)] = 1.0
    return k


def random_unitaries(k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """k Haar unitaries (shape (k, n, n)) from QR of complex Ginibre matrices."""
    z = (rng.normal(size=(k, n, n)) + 1j * rng.normal(size=(k, n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    mag = np.abs(d)
    # fix the phases of R's diagonal so the distribution is exactly Haar
    ph = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    return q * ph[:, None, :]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Single Haar unitary."""
    return random_unitaries(1, n, rng)[0]


def random_normal(n: int, rng: np.random.Generator, spectrum=None) -> np.ndarray:
    if spectrum is None:
        spectrum = rng.normal(size=n) + 1j * rng.normal(size=n)
    v = random_unitary(n, rng)
    return (v * np.asarray(spectrum)[None, :]) @ adj(v)


def group_eigenvalues(lam: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Replace eigenvalues equal up to ``rel`` relative tolerance by one representative."""
    out = np.array(lam, dtype=complex)
    scale = 1.0 + float(np.max(np.abs(out))) if out.size else 1.0
    for i in range(out.size):
        for j in range(i):
            if abs(out[i] - out[j]) <= rel * scale:
                out[i] = out[j]
                break
    return out


@dataclass(frozen=True)
class CommutatorCheck:
    eigmin: float
    holds: bool
    tol: float
    u: np.ndarray


def verify_commutator_bound(a, pairing, C: float, tol: float | None = None, form: str = "paired") -> CommutatorCheck:
    """Check |[a, u]| >= C (|a - z0| + u |a - z0| u*) for u built from ``pairing``.

    ``u = U K U*`` where U diagonalizes ``a`` (eigenvalues in the order the
    pairing was built from) and K is the permutation matrix of T.
    ``form="adjoint"`` checks the right-hand side with ``u* |a - z0| u``
    instead.
    """
    a = as_matrix(a)
    dec = normal_eig(a)
    lam = group_eigenvalues(dec.eigenvalues)
    perm = np.asarray(pairing.permutation, dtype=int)
    if perm.size != lam.size:
        raise ValueError("pairing does not match the matrix dimension")
    uu = dec.eigenvectors
    u = uu @ permutation_matrix(perm) @ adj(uu)
    n = a.shape[0]
    one = np.eye(n)
    comm = a @ u - u @ a
    dz = matrix_abs(a - pairing.z0 * one)
    moved = u @ dz @ adj(u) if form == "paired" else adj(u) @ dz @ u
    d = matrix_abs(comm) - C * (dz + moved)
    e = eigmin(d)
    t = PSD_TOL * (1 + fro(a)) if tol is None else tol
    return CommutatorCheck(e, e >= -t, t, u)


# ---------------------------------------------------------------- Matrix JSON

def matrix_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(doc) -> np.ndarray:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        n = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros((n, n))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix document: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValueError("matrix document shape does not match dim")
    return as_matrix(re + 1j * im)
