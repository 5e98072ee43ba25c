import numpy as np
import pytest

from ftriad.diagram import (
    Builder, Diagram, Generator, as_matrix, evaluate, normalize_fgraph, parse_diagram,
    random_fgraph, spider_normal_form, spider_signature, to_dot, to_dsl,
)
from ftriad.diagram.core import COMUL, COUNIT, MUL, UNIT
from ftriad.errors import ForeignNode, ParseError, PortMismatch, ShapeMismatch, UnknownAlgebra

from conftest import random_complex


# -- parsing ---------------------------------------------------------------


def test_parse_cup(algebras):
    d = parse_diagram("eta[G] ; delta[G]", algebras)
    assert (len(d.inputs), len(d.outputs)) == (0, 2)
    np.testing.assert_array_equal(evaluate(d), np.eye(3))


def test_parse_bubble_signature(algebras):
    d = parse_diagram("delta[W] ; mu[W]", algebras)
    assert spider_signature(d).as_tuple() == (1, 1, 1)


def test_parse_parallel(algebras):
    d = parse_diagram("mu[G] * id(3)", algebras)
    assert d.in_dims == (3, 3, 3) and d.out_dims == (3, 3)


def test_parse_precedence_and_parentheses(algebras):
    a = parse_diagram("eta[G] * eta[G] ; mu[G]", algebras)
    b = parse_diagram("(eta[G] * eta[G]) ; mu[G]", algebras)
    np.testing.assert_array_equal(evaluate(a), evaluate(b))


def test_parse_ket_bra_box(algebras):
    d = parse_diagram("ket(|0>+2|1>) ; box(X) ; bra((0+1i)|1>)", algebras,
                      {"X": np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])})
    # X swaps 0 and 1, so the state becomes |1> + 2|0>; the bra picks i * 1
    assert evaluate(d) == pytest.approx(1j)


def test_parse_blank_is_empty(algebras):
    d = parse_diagram("  \n ", algebras)
    assert len(d.nodes) == 0 and evaluate(d) == 1


@pytest.mark.parametrize("text, exc", [
    ("mu[Q]", UnknownAlgebra),
    ("mu[G] ; mu[G]", PortMismatch),
    ("eta[G] ;", ParseError),
    ("eta[G] eta[G]", ParseError),
    ("id(0)", ParseError),
    ("frob[G]", ParseError),
    ("ket(|00>)", ParseError),
    ("ket(|3>)", ParseError),
    ("box(Y)", ParseError),
    ("(eta[G]", ParseError),
    ("mu[W2] ; delta[G]", PortMismatch),
])
def test_parse_errors(algebras, text, exc):
    with pytest.raises(exc):
        parse_diagram(text, algebras)


def test_parse_error_carries_position(algebras):
    with pytest.raises(UnknownAlgebra) as info:
        parse_diagram("eta[G] ; mu[Nope]", algebras)
    assert info.value.position == 12


# -- evaluation ------------------------------------------------------------


def test_eval_w_unit(algebras):
    np.testing.assert_array_equal(evaluate(parse_diagram("eta[W]", algebras)), [0, 0, 1])


def test_eval_bubbles(algebras):
    w = as_matrix(parse_diagram("delta[W];mu[W]", algebras))
    expected = np.zeros((3, 3))
    expected[0, 2] = 3
    np.testing.assert_array_equal(w, expected)
    np.testing.assert_array_equal(as_matrix(parse_diagram("delta[G];mu[G]", algebras)), np.eye(3))


def test_swap_semantics(algebras):
    sw = evaluate(Diagram.swap(3, 2))
    for x in range(3):
        for y in range(2):
            vec = np.einsum("abcd,a,b->cd", sw, np.eye(3)[x], np.eye(2)[y])
            np.testing.assert_array_equal(vec, np.outer(np.eye(2)[y], np.eye(3)[x]))


def test_explicit_swap_node_matches_wiring():
    b = Builder()
    x, y = b.wire(3), b.wire(2)
    outs = b.add(Generator.swap(3, 2), x, y)
    np.testing.assert_array_equal(evaluate(b.build([x, y], outs)), evaluate(Diagram.swap(3, 2)))


def test_composition_is_contraction(rng, algebras):
    A, B = random_complex(rng, (3, 3)), random_complex(rng, (3, 3))
    d = parse_diagram("box(A) ; box(B)", algebras, {"A": A, "B": B})
    np.testing.assert_allclose(as_matrix(d), B @ A)


def test_tensor_is_outer_product(rng, algebras):
    u, v = random_complex(rng, 3), random_complex(rng, 3)
    d1 = Diagram.from_generator(Generator.state(u))
    d2 = Diagram.from_generator(Generator.state(v))
    np.testing.assert_allclose(evaluate(d1 @ d2), np.outer(u, v))


def test_builder_rejects_bad_wiring():
    b = Builder()
    x = b.wire(3)
    with pytest.raises(ShapeMismatch):
        b.add(Generator.box("A", np.eye(2)), x)
    with pytest.raises(PortMismatch):
        Diagram((), (3,), (0,), ())


# -- spider ------------------------------------------------------------------


def test_signature_examples(algebras):
    assert spider_signature(Diagram.id(3)).as_tuple() == (1, 1, 0)
    circle = parse_diagram("eta[G];delta[G];mu[G];eps[G]", algebras)
    assert spider_signature(circle).as_tuple() == (0, 0, 1)
    two = parse_diagram("eta[G] ; eta[G] * delta[G]", algebras)
    sig = spider_signature(two)
    assert [c.signature for c in sig.components] == [(0, 1, 0), (0, 2, 0)]


def test_signature_ignores_swaps(algebras):
    d = parse_diagram("delta[W] ; swap(3,3) ; mu[W]", algebras)
    assert spider_signature(d).as_tuple() == (1, 1, 1)


def _kinds(d):
    return [n.gen.kind for n in d.nodes]


def test_normal_form_shapes(algebras):
    G = algebras["G"]
    assert _kinds(spider_normal_form(2, 1, 0, G)) == [MUL]
    assert _kinds(spider_normal_form(0, 1, 1, G)) == [UNIT, COMUL, MUL]
    assert _kinds(spider_normal_form(0, 0, 1, G)) == [UNIT, COMUL, MUL, COUNIT]
    assert len(spider_normal_form(1, 1, 0, G).nodes) == 0


def test_normal_form_is_left_combed(algebras):
    d = spider_normal_form(3, 1, 0, algebras["G"])
    first, second = d.nodes
    assert second.inputs[0] == first.outputs[0]


def test_normal_form_signature_round_trip(algebras):
    for m, n, l in [(0, 0, 0), (3, 2, 2), (1, 4, 0), (2, 0, 3)]:
        d = spider_normal_form(m, n, l, algebras["I"])
        assert spider_signature(d).as_tuple() == (m, n, l)


def test_normalize_bubble_over_g(algebras):
    d = parse_diagram("delta[G];mu[G]", algebras)
    nf = normalize_fgraph(d, algebras["G"])
    assert spider_signature(nf).as_tuple() == (1, 1, 1)
    np.testing.assert_array_equal(evaluate(nf), np.eye(3))


def test_normalize_bare_wire(algebras):
    nf = normalize_fgraph(Diagram.id(3), algebras["W"])
    assert len(nf.nodes) == 0 and nf.inputs == nf.outputs


def test_normalize_random_w_graph(rng, algebras):
    W = algebras["W"]
    seen = set()
    for _ in range(200):
        d = random_fgraph(W, rng)
        sig = spider_signature(d).as_tuple()
        seen.add(sig)
        np.testing.assert_allclose(evaluate(d), evaluate(normalize_fgraph(d, W)), atol=1e-9)
    assert len(seen) > 10


def test_normalize_rejects_foreign_nodes(algebras):
    with pytest.raises(ForeignNode):
        normalize_fgraph(parse_diagram("mu[G] ; delta[W]", algebras), algebras["G"])
    with pytest.raises(ForeignNode):
        normalize_fgraph(parse_diagram("ket(|0>) * id(3) ; mu[G]", algebras), algebras["G"])


def test_random_fgraph_is_connected(rng, algebras):
    for _ in range(50):
        d = random_fgraph(algebras["I"], rng, max_nodes=8)
        sig = spider_signature(d)
        assert len(sig.components) == 1
        assert 1 <= sum(1 for n in d.nodes if n.gen.kind in (MUL, UNIT, COMUL, COUNIT))
        assert len(d.nodes) <= 8


# -- export ----------------------------------------------------------------


def test_dsl_round_trip(rng, algebras):
    for _ in range(50):
        d = random_fgraph(algebras["W"], rng)
        text, boxes = to_dsl(d)
        np.testing.assert_allclose(evaluate(parse_diagram(text, algebras, boxes)), evaluate(d))


def test_dsl_round_trip_with_kets_and_boxes(rng, algebras):
    X = random_complex(rng, (3, 3))
    d = parse_diagram("ket((1+2i)|0>-|2>) * box(X) ; mu[W] ; bra(|1>+|2>) ", algebras, {"X": X})
    text, boxes = to_dsl(d)
    assert set(boxes) == {"X"}
    np.testing.assert_allclose(evaluate(parse_diagram(text, algebras, boxes)), evaluate(d))


def test_dot_output(algebras):
    dot = to_dot(parse_diagram("eta[W];delta[W];mu[W]", algebras))
    assert dot.startswith("digraph") and "rank=same" in dot
    assert dot.count("->") == 4  # one edge per wire, the two bubble wires included
