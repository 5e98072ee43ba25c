import numpy as np
import pytest

from ftriad.errors import ShapeMismatch, SingularMatrix
from ftriad.tensor_core import (
    DEFAULT_TOL, ToleranceConfig, approx_proportional, as_tensor, contract, ldu_decompose,
    ldu_decompose_any, numeric_rank, perm_matrix,
)

from conftest import random_complex, random_invertible

W_MU = np.zeros((3, 3, 3))
for c, a, b in [(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 1, 2), (1, 2, 1), (2, 2, 2)]:
    W_MU[c, a, b] = 1
W_DELTA = np.zeros((3, 3, 3))
for b, c, a in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (1, 1, 2), (2, 0, 2)]:
    W_DELTA[b, c, a] = 1


def brute_bubble(mu, delta):
    d = mu.shape[0]
    out = np.zeros((d, d), dtype=complex)
    for c in range(d):
        for x in range(d):
            out[c, x] = sum(mu[c, a, b] * delta[a, b, x] for a in range(d) for b in range(d))
    return out


def test_tolerance_defaults_and_validation():
    assert DEFAULT_TOL.atol == 1e-9 and DEFAULT_TOL.rtol == 1e-9 and DEFAULT_TOL.rank_cutoff == 1e-8
    with pytest.raises(ValueError):
        ToleranceConfig(atol=-1)


def test_as_tensor_rejects_non_finite():
    with pytest.raises(ValueError):
        as_tensor([1.0, np.nan])


def test_contract_identity_composition():
    np.testing.assert_allclose(contract(np.eye(3), np.eye(3), [(1, 0)]), np.eye(3))


def test_contract_w_bubble_matches_brute_force():
    # mu's inputs (axes 1, 2) against delta's outputs (axes 0, 1)
    got = contract(W_MU, W_DELTA, [(1, 0), (2, 1)])
    expected = np.zeros((3, 3))
    expected[0, 2] = 3
    np.testing.assert_allclose(got, expected)
    np.testing.assert_allclose(brute_bubble(W_MU, W_DELTA), expected)


def test_contract_errors():
    with pytest.raises(ShapeMismatch):
        contract(np.eye(3), np.eye(2), [(1, 0)])
    with pytest.raises(ShapeMismatch):
        contract(np.eye(3), np.eye(3), [(2, 0)])
    with pytest.raises(ShapeMismatch):
        contract(np.eye(3), np.eye(3), [(1, 0), (1, 1)])


def test_numeric_rank_examples():
    assert numeric_rank(np.eye(3)) == 3
    assert numeric_rank(brute_bubble(W_MU, W_DELTA)) == 1
    i_bubble = np.zeros((3, 3))
    i_bubble[0, 1] = 2
    i_bubble[2, 2] = 1
    assert numeric_rank(i_bubble) == 2
    assert numeric_rank(np.zeros((3, 3))) == 0
    with pytest.raises(ShapeMismatch):
        numeric_rank(np.zeros(3))


def test_approx_proportional():
    assert approx_proportional(2 * np.eye(3), np.eye(3)) == pytest.approx(2)
    ghz = np.zeros((2, 2, 2))
    ghz[0, 0, 0] = ghz[1, 1, 1] = 1
    w = np.zeros((2, 2, 2))
    w[0, 0, 1] = w[0, 1, 0] = w[1, 0, 0] = 1
    assert approx_proportional(ghz, w) is None
    assert approx_proportional(np.zeros(4), np.zeros(4)) == 1
    assert approx_proportional(np.zeros(4), np.ones(4)) is None
    assert approx_proportional(np.ones(4), np.zeros(4)) is None
    with pytest.raises(ShapeMismatch):
        approx_proportional(np.ones(3), np.ones(4))


def test_perm_matrix_convention():
    m = perm_matrix((2, 0, 1))
    np.testing.assert_array_equal(m @ np.array([1, 0, 0]), [0, 0, 1])


def test_ldu_identity():
    f = ldu_decompose(np.eye(3))
    assert f.P == (0, 1, 2) and f.P2 == (0, 1, 2)
    np.testing.assert_array_equal(f.L, np.eye(3))
    np.testing.assert_array_equal(f.U, np.eye(3))
    np.testing.assert_array_equal(f.D, np.eye(3))


def test_ldu_antidiagonal():
    A = np.fliplr(np.eye(3))
    f = ldu_decompose(A)
    assert f.P != (0, 1, 2) or f.P2 != (0, 1, 2)
    np.testing.assert_allclose(f.D, np.eye(3))
    np.testing.assert_allclose(f.reconstruct(), A)


def test_ldu_singular_raises():
    with pytest.raises(SingularMatrix):
        ldu_decompose(np.ones((3, 3)))


def test_ldu_any_accepts_rank_two():
    T = np.zeros((3, 3))
    T[1, 0] = 1
    T[2, :] = 1
    f = ldu_decompose_any(T)
    np.testing.assert_allclose(f.reconstruct(), T, atol=1e-15)


def test_ldu_factor_shapes(rng):
    f = ldu_decompose(random_invertible(rng))
    np.testing.assert_allclose(np.diag(f.L), 1)
    np.testing.assert_allclose(np.diag(f.U), 1)
    np.testing.assert_allclose(np.triu(f.L, 1), 0)
    np.testing.assert_allclose(np.tril(f.U, -1), 0)
    assert np.all(f.d != 0)
    assert f.u == (f.U[0, 1], f.U[0, 2], f.U[1, 2])


def test_ldu_reconstruction_1000_random(rng):
    worst = 0.0
    for _ in range(1000):
        F = random_invertible(rng)
        worst = max(worst, np.max(np.abs(ldu_decompose(F).reconstruct() - F)))
    assert worst < 1e-9


def test_rank_of_product_is_bounded(rng):
    for _ in range(50):
        r1, r2 = rng.integers(1, 4, size=2)
        A = random_complex(rng, (3, r1)) @ random_complex(rng, (r1, 3))
        B = random_complex(rng, (3, r2)) @ random_complex(rng, (r2, 3))
        assert numeric_rank(A @ B) <= min(numeric_rank(A), numeric_rank(B))
