import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import CUBE, SQRT3_2, uniform
from normcomm.center import WeightedSpectrum
from normcomm.linalg import (
    VerificationError, adj, conjugate_spectra_unitary, eigmin, group_eigenvalues, hermitian_eig,
    matrix_abs, matrix_from_json, matrix_to_json, normal_eig, permutation_matrix, polar_parts,
    positive_part, random_normal, random_unitary, real_part, realpart_domination_unitary,
    triangle_unitaries, unitarity_defect, verify_commutator_bound,
)
from normcomm.pairing import Pairing, build_pairing
from normcomm.plane import ConjugacyFrame


def ginibre(n, rng):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.mark.parametrize("a, expected", [
    (np.diag([3.0, 1.0]), [1, 3]),
    (np.array([[0, 1], [1, 0]]), [-1, 1]),
    (np.array([[2, 1j], [-1j, 2]]), [1, 3]),
])
def test_hermitian_eig(a, expected):
    np.testing.assert_allclose(hermitian_eig(a).eigenvalues, expected, atol=1e-12)


def test_hermitian_required():
    with pytest.raises(ValueError, match="hermitian required"):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_hermitian_against_numpy(rng):
    for n in (1, 2, 5, 16, 33):
        h = ginibre(n, rng)
        h = h + adj(h)
        dec = hermitian_eig(h)
        np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(h), atol=1e-10)
        np.testing.assert_allclose(dec.reconstruct(), h, atol=1e-10)


def test_normal_eig_examples():
    ev = normal_eig(np.diag([1 + 1j, 2])).eigenvalues
    assert sorted(ev, key=lambda z: (z.real, z.imag)) == pytest.approx([1 + 1j, 2])
    shift = np.roll(np.eye(3), 1, axis=0)
    ev = normal_eig(shift).eigenvalues
    for w in CUBE:
        assert np.min(np.abs(ev - w)) < 1e-12


def test_normal_eig_hermitian_consistency(rng):
    h = ginibre(6, rng)
    h = h + adj(h)
    np.testing.assert_allclose(normal_eig(h).eigenvalues.real, hermitian_eig(h).eigenvalues, atol=1e-9)


def test_normal_required():
    with pytest.raises(ValueError, match="normal required"):
        normal_eig(np.array([[0, 1], [0, 0]]))


def test_normal_eig_with_multiplicities(rng):
    lam = np.array([1, 1, 1, 1j, 1j, -2, 0, 0])
    a = random_normal(8, rng, lam)
    dec = normal_eig(a)
    np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-10)
    assert unitarity_defect(dec.eigenvectors) < 1e-10


@pytest.mark.parametrize("x, expected", [
    (np.diag([-2, 3j]), np.diag([2.0, 3.0])),
    (np.zeros((3, 3)), np.zeros((3, 3))),
    (np.array([[0, 2], [0, 0]]), np.diag([0.0, 2.0])),
])
def test_matrix_abs(x, expected):
    np.testing.assert_allclose(matrix_abs(x), expected, atol=1e-12)


def test_polar_examples():
    p = polar_parts(np.diag([0.0, 2.0]))
    np.testing.assert_allclose(p.partial_isometry, np.diag([0, 1]), atol=1e-12)
    np.testing.assert_allclose(p.left_support, np.diag([0, 1]), atol=1e-12)
    p = polar_parts(np.array([[0, 2], [0, 0]]))
    np.testing.assert_allclose(p.partial_isometry, [[0, 1], [0, 0]], atol=1e-12)
    np.testing.assert_allclose(p.left_support, np.diag([1, 0]), atol=1e-12)
    np.testing.assert_allclose(p.right_support, np.diag([0, 1]), atol=1e-12)


def test_polar_unitary(rng):
    u = random_unitary(5, rng)
    p = polar_parts(u)
    np.testing.assert_allclose(p.partial_isometry, u, atol=1e-10)
    np.testing.assert_allclose(p.abs_x, np.eye(5), atol=1e-10)


def test_polar_reconstructs_low_rank(rng):
    x = ginibre(6, rng)[:, :2] @ ginibre(6, rng)[:2, :]
    p = polar_parts(x)
    np.testing.assert_allclose(p.partial_isometry @ p.abs_x, x, atol=1e-9)
    assert np.trace(p.right_support).real == pytest.approx(2, abs=1e-9)


def test_matrix_abs_against_scipy(rng):
    sl = pytest.importorskip("scipy.linalg")
    for n in (2, 7, 12):
        x = ginibre(n, rng)
        want = sl.sqrtm(adj(x) @ x)
        np.testing.assert_allclose(matrix_abs(x), want, atol=1e-8)


def _rpd_residual(x, v):
    rp, _ = positive_part(real_part(x))
    return eigmin(v @ matrix_abs(x) @ adj(v) - rp)


def test_rpd_examples():
    x = np.diag([1.0, 2.0])
    v = realpart_domination_unitary(x)
    assert _rpd_residual(x, v) == pytest.approx(0, abs=1e-12)
    realpart_domination_unitary(-np.eye(3))
    x = np.array([[1j, 1], [0, -1j]])
    v = realpart_domination_unitary(x)
    assert _rpd_residual(x, v) >= -1e-8
    assert unitarity_defect(v) < 1e-9


def test_triangle_examples():
    v, w = triangle_unitaries(np.eye(2), np.eye(2))
    triangle_unitaries(np.eye(2), -np.eye(2))
    with pytest.raises(ValueError, match="dimension"):
        triangle_unitaries(np.eye(2), np.eye(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_constructions_property(n, seed, rank_cut):
    rng = np.random.default_rng(seed)
    x, y = ginibre(n, rng), ginibre(n, rng)
    if rank_cut and n > rank_cut:
        x[:, :rank_cut] = 0
        y[rank_cut:, :] = 0
    v = realpart_domination_unitary(x)
    assert unitarity_defect(v) < 1e-8
    assert _rpd_residual(x, v) >= -1e-8
    v, w = triangle_unitaries(x, y)
    lhs = v @ matrix_abs(x) @ adj(v) + w @ matrix_abs(y) @ adj(w)
    assert eigmin(lhs - matrix_abs(x + y)) >= -1e-8


def test_conjugate_spectra_examples():
    f = ConjugacyFrame(0, 0.0, 0.0)
    conjugate_spectra_unitary(np.diag([1.0]), np.diag([-1.0]), f)
    conjugate_spectra_unitary(np.diag([2.0, 3.0]), np.diag([-2.0, -4.0]), f)
    with pytest.raises(ValueError, match="conjugacy precondition failed"):
        conjugate_spectra_unitary(np.diag([2.0]), np.diag([2.0]), f)


def test_conjugate_spectra_random_corners(rng):
    for _ in range(40):
        n = int(rng.integers(1, 7))
        axis = rng.uniform(0, 2 * math.pi)
        z0 = complex(*rng.normal(size=2))
        f = ConjugacyFrame(z0, axis, math.pi / 3)
        ang_a = axis + rng.uniform(-math.pi / 6, math.pi / 6, n)
        ang_b = axis + math.pi + rng.uniform(-math.pi / 6, math.pi / 6, n)
        la = z0 + rng.uniform(0.1, 3, n) * np.exp(1j * ang_a)
        lb = z0 + rng.uniform(0.1, 3, n) * np.exp(1j * ang_b)
        a = random_normal(n, rng, la)
        b = random_normal(n, rng, lb)
        v = conjugate_spectra_unitary(a, b, f)
        assert unitarity_defect(v) < 1e-8


def test_commutator_equilateral_equality():
    a = np.diag(CUBE)
    p = build_pairing(WeightedSpectrum.uniform(normal_eig(a).eigenvalues))
    res = verify_commutator_bound(a, p, SQRT3_2)
    assert res.eigmin == pytest.approx(0, abs=1e-10)


def test_commutator_self_adjoint_two():
    a = np.diag([0.0, 1.0])
    p = Pairing(np.array([1, 0]), 0.5 + 0j, {2: [[0, 1]]}, 1.0)
    assert verify_commutator_bound(a, p, 1.0).holds


def test_commutator_unitary_invariance(rng):
    base = np.diag(CUBE)
    p = build_pairing(WeightedSpectrum.uniform(normal_eig(base).eigenvalues))
    e0 = verify_commutator_bound(base, p, SQRT3_2).eigmin
    for _ in range(5):
        v = random_unitary(3, rng)
        a = v @ base @ adj(v)
        q = build_pairing(WeightedSpectrum.uniform(group_eigenvalues(normal_eig(a).eigenvalues)))
        assert verify_commutator_bound(a, q, SQRT3_2).eigmin == pytest.approx(e0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 12, 16])
def test_commutator_bound_even_dims(n, rng):
    # even dimensions give involutive pairings
    for _ in range(10):
        a = random_normal(n, rng)
        lam = group_eigenvalues(normal_eig(a).eigenvalues)
        p = build_pairing(WeightedSpectrum.uniform(lam))
        assert verify_commutator_bound(a, p, SQRT3_2).holds


def test_adjoint_form_holds_for_odd_dims(rng):
    for n in (3, 5, 7, 9):
        a = random_normal(n, rng)
        lam = group_eigenvalues(normal_eig(a).eigenvalues)
        p = build_pairing(WeightedSpectrum.uniform(lam))
        paired = verify_commutator_bound(a, p, SQRT3_2, form="paired")
        adjoint = verify_commutator_bound(a, p, SQRT3_2, form="adjoint")
        assert adjoint.holds
        assert np.allclose(paired.u, adjoint.u)


def test_commutator_three_cycle_counterexample():
    # |[a,u]| pairs |l_T(i) - l_i| with index i while u|a-z0|u* puts |l_T^-1(i) - z0| there
    a = np.diag(np.array([1, 1, 3]) * CUBE)
    p = build_pairing(WeightedSpectrum.uniform(normal_eig(a).eigenvalues))
    assert 3 in p.cycle_partition
    assert p.achieved_lambda >= SQRT3_2 - 1e-9
    assert not verify_commutator_bound(a, p, SQRT3_2).holds
    assert verify_commutator_bound(a, p, SQRT3_2, form="adjoint").holds


def test_permutation_matrix_convention():
    k = permutation_matrix([1, 2, 0])
    assert np.array_equal(k @ np.eye(3)[:, 0], np.eye(3)[:, 1])


def test_pairing_mismatch():
    p = Pairing(np.array([1, 0]), 0j, {2: [[0, 1]]}, 1.0)
    with pytest.raises(ValueError):
        verify_commutator_bound(np.eye(3), p, 1.0)


def test_matrix_json_roundtrip(rng):
    a = ginibre(4, rng)
    np.testing.assert_array_equal(matrix_from_json(matrix_to_json(a)), a)
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 3, "re": [[1]]})


def test_random_unitary_is_unitary(rng):
    assert unitarity_defect(random_unitary(20, rng)) < 1e-12
