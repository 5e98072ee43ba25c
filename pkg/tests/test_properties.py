"""Property tests for the invariants the library promises."""

import itertools

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from ftriad.algebra import builtin, check_axioms, induce_algebra, induce_state
from ftriad.diagram import evaluate, normalize_fgraph, random_fgraph, spider_signature
from ftriad.entanglement import LocalOperation, apply_local, is_symmetric, transport_witness, witness_residual, solve_witness
from ftriad.ket import format_ket, parse_ket
from ftriad.synthesis import fit_residual, matrix_to_diagram, vector_mult_map, Trio
from ftriad.diagram import as_matrix
from ftriad.tensor_core import approx_proportional, contract, ldu_decompose_any, perm_matrix

floats = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, floats, floats)
seeds = st.integers(0, 2**32 - 1)


def arrays(shape):
    n = int(np.prod(shape))
    return st.lists(complexes, min_size=n, max_size=n).map(lambda v: np.array(v).reshape(shape))


@given(arrays((3, 2)), arrays((3, 2)), arrays((2, 4)), complexes)
def test_contract_is_bilinear(a, b, c, s):
    lhs = contract(a + s * b, c, [(1, 0)])
    rhs = contract(a, c, [(1, 0)]) + s * contract(b, c, [(1, 0)])
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


@given(arrays((3, 3, 3)))
def test_contract_with_identity(a):
    np.testing.assert_allclose(contract(a, np.eye(3), [(2, 0)]), a)
    np.testing.assert_allclose(contract(a, np.eye(3), []), np.multiply.outer(a, np.eye(3)))


@given(st.lists(st.integers(-4, 4), min_size=27, max_size=27))
def test_ket_round_trip(coeffs):
    a = np.array(coeffs, dtype=complex).reshape(3, 3, 3)
    assume(np.any(a))
    np.testing.assert_array_equal(parse_ket(format_ket(a)).amplitudes, a)


@given(arrays((3, 3)))
def test_ldu_reconstructs(F):
    f = ldu_decompose_any(F)
    np.testing.assert_allclose(f.reconstruct(), F, atol=1e-9 * max(1, np.abs(F).max()))
    assert np.allclose(np.tril(f.L), f.L) and np.allclose(np.diag(f.L), 1)
    assert np.allclose(np.triu(f.U), f.U) and np.allclose(np.diag(f.U), 1)


@given(arrays((2, 3)), complexes)
def test_proportionality_recovers_scalar(a, c):
    assume(np.abs(a).max() > 1e-3 and abs(c) > 1e-3)
    got = approx_proportional(c * a, a)
    assert got is not None and abs(got - c) < 1e-9 * max(1, abs(c))


@given(arrays((3, 3, 3)), st.booleans())
def test_symmetry_matches_brute_force(a, symmetrize):
    if symmetrize:
        a = sum(a.transpose(p) for p in itertools.permutations(range(3)))
    brute = all(np.allclose(a, a.transpose(p), atol=1e-9) for p in itertools.permutations(range(3)))
    assert is_symmetric(a) == brute


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["GHZ2", "W2", "G", "W", "I"]), seeds)
def test_spider_normal_form_preserves_semantics(name, seed):
    F = builtin(name)
    d = random_fgraph(F, np.random.default_rng(seed))
    n = normalize_fgraph(d, F)
    np.testing.assert_allclose(evaluate(n), evaluate(d), atol=1e-9)
    assert spider_signature(n).as_tuple() == spider_signature(d).as_tuple()


@settings(deadline=None)
@given(st.sampled_from(["GHZ2", "W2", "G", "W", "I"]))
def test_induction_round_trip(name):
    F = builtin(name)
    psi, _, xi = induce_state(F)
    G, _ = induce_algebra(psi, xi)
    for x, y in [(F.mu, G.mu), (F.delta, G.delta), (F.eta, G.eta), (F.epsilon, G.epsilon)]:
        np.testing.assert_allclose(x, y, atol=1e-12)
    assert check_axioms(G).ok


@settings(deadline=None)
@given(arrays((3, 3)), arrays((3,)))
def test_witness_transport_revalidates(L, xi):
    assume(abs(np.linalg.det(L)) > 1e-2 and np.linalg.cond(L) < 1e4)
    G = parse_ket("|000>+|111>+|222>")
    assume(np.all(np.abs(xi) > 1e-2))
    w = solve_witness(G, xi)
    s2 = apply_local(G, LocalOperation.uniform(L))
    moved = transport_witness(G, LocalOperation.uniform(L), w)
    assert witness_residual(s2, moved) < 1e-6


@settings(deadline=None)
@given(arrays((3, 3)))
def test_matrix_synthesis_is_proportional(F):
    assume(abs(np.linalg.det(F)) > 1e-2 and np.linalg.cond(F) < 1e6)
    res = matrix_to_diagram(F)
    assert fit_residual(as_matrix(res.diagram), F)[1] < 1e-8


@given(st.permutations(range(3)), st.permutations(range(3)))
def test_perm_matrix_is_a_homomorphism(p, q):
    pq = tuple(p[q[i]] for i in range(3))
    np.testing.assert_array_equal(perm_matrix(p) @ perm_matrix(q), perm_matrix(pq))


@settings(deadline=None)
@given(arrays((3,)), arrays((3,)))
def test_w_multiplication_commutes(v, w):
    assume(np.any(v) and np.any(w))
    W = Trio.default().w
    a = as_matrix(vector_mult_map(W, v) >> vector_mult_map(W, w))
    b = as_matrix(vector_mult_map(W, w) >> vector_mult_map(W, v))
    np.testing.assert_allclose(a, b, atol=1e-9)
