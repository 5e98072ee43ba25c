"""Matrices and multipartite qutrit states as diagrams over the trio (G, W, I).

Building blocks, all checked by evaluation:

* ``vector_mult_map(A, v)`` is ``mu_A (v (x) -)``. Over G it is ``diag(v)``;
  over W it is the upper Toeplitz matrix ``[[v2, v1, v0], [0, v2, v1],
  [0, 0, v2]]``; over I it is ``v0 |0><1| + v1 (|0><0| + |1><1|) + v2 |2><2|``.
* Bent wires (a cap of one algebra fed by a cup of another) give the
  transpositions (0 2), (0 1) and a 3-cycle; together they generate S3.
* A unit upper-triangular ``U`` with entries ``a = U01, b = U02, c = U12``
  is ``C (I + (c - a)|0><1|) C^-1`` after the W map of ``(b, a, 1)``, where
  ``C`` is the cycle 0 -> 1 -> 2 -> 0. Lower factors are flipped with (0 2).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import CFA, builtin
from .diagram.core import Builder, Diagram, Generator
from .diagram.evaluate import as_matrix, evaluate
from .errors import ShapeMismatch, SingularMatrix, SynthesisResidualExceeded, ZeroOverlap
from .ket import PureState
from .tensor_core import DEFAULT_TOL, ToleranceConfig, as_tensor, ldu_decompose, ldu_decompose_any, perm_matrix

__all__ = [
    "Trio", "SynthesisResult", "vector_mult_map", "bent_wire", "permutation_diagram",
    "matrix_to_diagram", "qmux", "qmux_n", "qmux_corrected", "state_to_diagram", "fit_residual",
]

_ORDINALS = ("first", "second", "third")


@dataclass(frozen=True)
class Trio:
    g: CFA
    w: CFA
    i: CFA

    @classmethod
    def default(cls) -> "Trio":
        return cls(builtin("G"), builtin("W"), builtin("I"))

    def registry(self) -> dict[str, CFA]:
        return {self.g.name: self.g, self.w.name: self.w, self.i.name: self.i}


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    diagram: Diagram
    target: np.ndarray
    achieved: np.ndarray
    scalar: complex
    residual: float

    def to_dict(self) -> dict:
        from .diagram.export import to_dsl
        from .serialize import complex_json, tensor_json
        text, boxes = to_dsl(self.diagram)
        return {
            "nodes": len(self.diagram.nodes),
            "dsl": text,
            "boxes": {k: tensor_json(v) for k, v in boxes.items()},
            "target": tensor_json(self.target),
            "achieved": tensor_json(self.achieved),
            "scalar": complex_json(self.scalar),
            "residual": self.residual,
        }


def fit_residual(achieved, target) -> tuple[complex, float]:
    """Least-squares ``c`` with ``achieved ~ c * target`` and the relative misfit."""
    a = np.asarray(achieved).reshape(-1)
    t = np.asarray(target).reshape(-1)
    tt = np.vdot(t, t)
    c = np.vdot(t, a) / tt if tt else 0.0
    scale = np.max(np.abs(a))
    if scale == 0:
        return complex(c), (0.0 if not np.any(t) else float("inf"))
    return complex(c), float(np.max(np.abs(a - c * t)) / scale)


# -- single-wire building blocks ---------------------------------------------


def _mult(b: Builder, algebra, v, x: int) -> int:
    (s,) = b.add(Generator.state(v))
    (y,) = b.add(Generator.mul(algebra), s, x)
    return y


def vector_mult_map(algebra, v) -> Diagram:
    """``mu (v (x) id)``: one input, one output."""
    v = as_tensor(v)
    if v.shape != (algebra.d,):
        raise ShapeMismatch(f"vector of length {algebra.d} expected, got shape {v.shape}")
    if not np.any(v):
        raise ValueError("vector_mult_map needs a nonzero vector")
    b = Builder()
    x = b.wire(algebra.d)
    return b.build([x], [_mult(b, algebra, v, x)])


def bent_wire(cap_algebra, cup_algebra) -> Diagram:
    """``(cap (x) id)(id (x) cup)``; as a matrix ``M[z, x] = sum_y cap[x, y] cup[y, z]``."""
    b = Builder()
    x = b.wire(cap_algebra.d)
    (u,) = b.add(Generator.unit(cup_algebra))
    y, z = b.add(Generator.comul(cup_algebra), u)
    (m,) = b.add(Generator.mul(cap_algebra), x, y)
    b.add(Generator.counit(cap_algebra), m)
    return b.build([x], [z])


def _primitives(trio: Trio):
    return {
        "GW": bent_wire(trio.g, trio.w),
        "GI": bent_wire(trio.g, trio.i),
        "WI": bent_wire(trio.w, trio.i),
    }


@lru_cache(maxsize=None)
def _permutation_words(trio: Trio) -> dict[tuple[int, ...], tuple[str, ...]]:
    """Shortest primitive word (applied left to right) for each permutation."""
    prims = {k: as_matrix(d) for k, d in _primitives(trio).items()}
    as_perm = {}
    for k, m in prims.items():
        p = tuple(int(np.argmax(np.abs(m[:, i]))) for i in range(3))
        if not np.allclose(m, m[p[0], 0] * perm_matrix(p)):
            raise SynthesisResidualExceeded(f"bent wire {k} is not a scaled permutation")
        as_perm[k] = p
    start = (0, 1, 2)
    words = {start: ()}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for k, p in as_perm.items():
            nxt = tuple(p[cur[i]] for i in range(3))
            if nxt not in words:
                words[nxt] = words[cur] + (k,)
                queue.append(nxt)
    if len(words) != 6:
        raise SynthesisResidualExceeded("bent wires do not generate all permutations")
    return words


def permutation_diagram(p, trio: Trio | None = None) -> Diagram:
    """A diagram proportional to the matrix sending ``|i>`` to ``|p[i]>``."""
    trio = trio or Trio.default()
    p = tuple(int(x) for x in p)
    if sorted(p) != [0, 1, 2]:
        raise ValueError(f"{p} is not a permutation of (0, 1, 2)")
    word = _permutation_words(trio)[p]
    prims = _primitives(trio)
    d = Diagram.id(3)
    for k in word:
        d = d >> prims[k]
    return d


def _add_perm(b: Builder, x: int, p, trio: Trio) -> int:
    if tuple(p) == (0, 1, 2):
        return x
    return b.embed(permutation_diagram(p, trio), [x])[0]


_CYCLE = (1, 2, 0)       # 0 -> 1 -> 2 -> 0
_CYCLE_INV = (2, 0, 1)
_FLIP = (2, 1, 0)


def _add_upper(b: Builder, x: int, U: np.ndarray, trio: Trio) -> int:
    a, bb, c = U[0, 1], U[0, 2], U[1, 2]
    if a != 0 or bb != 0:
        x = _mult(b, trio.w, np.array([bb, a, 1]), x)
    if c - a != 0:
        x = _add_perm(b, x, _CYCLE_INV, trio)
        x = _mult(b, trio.i, np.array([c - a, 1, 1]), x)
        x = _add_perm(b, x, _CYCLE, trio)
    return x


def _add_lower(b: Builder, x: int, L: np.ndarray, trio: Trio) -> int:
    flipped = L[::-1, ::-1]
    if not np.any(np.triu(flipped, 1)):
        return x
    x = _add_perm(b, x, _FLIP, trio)
    x = _add_upper(b, x, flipped, trio)
    return _add_perm(b, x, _FLIP, trio)


def _add_matrix(b: Builder, x: int, F: np.ndarray, trio: Trio, singular_ok: bool,
                tol: ToleranceConfig) -> int:
    f = ldu_decompose_any(F) if singular_ok else ldu_decompose(F, tol)
    x = _add_perm(b, x, f.P2, trio)
    x = _add_upper(b, x, f.U, trio)
    if not np.allclose(f.d, 1, rtol=0, atol=0):
        x = _mult(b, trio.g, f.d, x)
    x = _add_lower(b, x, f.L, trio)
    return _add_perm(b, x, f.P, trio)


def _check(diagram: Diagram, achieved, target, tol: float) -> SynthesisResult:
    c, r = fit_residual(achieved, target)
    if not r <= tol:
        raise SynthesisResidualExceeded(f"synthesized diagram misses its target (residual {r:.3g})")
    return SynthesisResult(diagram, np.asarray(target), np.asarray(achieved), c, r)


def matrix_to_diagram(F, trio: Trio | None = None, tol: float = 1e-8,
                      tolcfg: ToleranceConfig = DEFAULT_TOL) -> SynthesisResult:
    """Realize an invertible 3x3 matrix (up to scalar) from trio generators and qutrit states."""
    trio = trio or Trio.default()
    F = as_tensor(F)
    if F.shape != (3, 3):
        raise ShapeMismatch(f"matrix_to_diagram needs a 3x3 matrix, got {F.shape}")
    b = Builder()
    x = b.wire(3)
    y = _add_matrix(b, x, F, trio, False, tolcfg)
    d = b.build([x], [y])
    return _check(d, as_matrix(d), F, tol)


# -- multiplexers ----------------------------------------------------------


def _selector_matrix(j: int) -> np.ndarray:
    """``|1><j| + |2>(<0| + <1| + <2|)``: sends ``|j>`` to ``|1> + |2>`` and the rest to ``|2>``."""
    T = np.zeros((3, 3), dtype=np.complex128)
    T[1, j] = 1
    T[2, :] = 1
    return T


@lru_cache(maxsize=None)
def _selector_diagram(j: int, trio: Trio) -> Diagram:
    b = Builder()
    x = b.wire(3)
    y = _add_matrix(b, x, _selector_matrix(j), trio, True, DEFAULT_TOL)
    return b.build([x], [y])


def _copies(b: Builder, algebra, n: int) -> list[int]:
    (x,) = b.add(Generator.unit(algebra))
    outs = [x]
    while len(outs) < n:
        outs += list(b.add(Generator.comul(algebra), outs.pop()))
    return outs


def _qmux_into(b: Builder, branches: list[list[int]], trio: Trio) -> list[int]:
    """Combine three same-length wire groups into ``[selector] + combined``."""
    m = len(branches[0])
    copies = _copies(b, trio.g, 1 + 3 * m)
    selector, controls = copies[0], copies[1:]
    combined = []
    for pos in range(m):
        legs = []
        for j in range(3):
            (t,) = b.embed(_selector_diagram(j, trio), [controls[3 * pos + j]])
            (leg,) = b.add(Generator.mul(trio.i), t, branches[j][pos])
            legs.append(leg)
        (acc,) = b.add(Generator.mul(trio.w), legs[0], legs[1])
        (acc,) = b.add(Generator.mul(trio.w), acc, legs[2])
        combined.append(acc)
    return [selector] + combined


def qmux_n(m: int, trio: Trio | None = None) -> Diagram:
    """Multiplexer over three groups of ``m`` wires (``3m`` inputs, ``1 + m`` outputs).

    On branch states ``s_0, s_1, s_2`` it yields
    ``sum_k c_k |k> (x) s_k`` with ``c_k = prod_{j != k} <2...2|s_j>``.
    """
    trio = trio or Trio.default()
    if m < 1:
        raise ValueError("each branch needs at least one wire")
    b = Builder()
    ins = [b.wire(3) for _ in range(3 * m)]
    outs = _qmux_into(b, [ins[0:m], ins[m:2 * m], ins[2 * m:]], trio)
    return b.build(ins, outs)


def qmux(trio: Trio | None = None) -> Diagram:
    """Three qutrit inputs, two outputs; ``psi, phi, zeta`` go to
    ``<2|phi><2|zeta>|0 psi> + <2|zeta><2|psi>|1 phi> + <2|psi><2|phi>|2 zeta>``."""
    return qmux_n(1, trio)


def _branch_weights(overlaps) -> np.ndarray:
    o = list(overlaps)
    return np.array([o[1] * o[2], o[2] * o[0], o[0] * o[1]])


def qmux_corrected(psi, phi, zeta, trio: Trio | None = None,
                   tol: ToleranceConfig = DEFAULT_TOL) -> Diagram:
    """A 0-input diagram proportional to ``|0 psi> + |1 phi> + |2 zeta>``."""
    trio = trio or Trio.default()
    vecs = [as_tensor(v) for v in (psi, phi, zeta)]
    for k, v in enumerate(vecs):
        if v.shape != (3,):
            raise ShapeMismatch("qmux_corrected takes three qutrit vectors")
        if abs(v[2]) <= tol.atol:
            raise ZeroOverlap(_ORDINALS[k])
    b = Builder()
    legs = [[b.add(Generator.state(v))[0]] for v in vecs]
    sel, out = _qmux_into(b, legs, trio)
    corr = np.diag(1 / _branch_weights(v[2] for v in vecs))
    sel = _add_matrix(b, sel, corr, trio, True, tol)
    return b.build([], [sel, out])


# -- states ----------------------------------------------------------------


def _min_overlap(a: np.ndarray) -> float:
    """Smallest relative ``|<2...2|branch>|`` met anywhere in the recursion."""
    if a.ndim == 1:
        return np.inf
    worst = np.inf
    for k in range(3):
        br = a[k]
        norm = np.max(np.abs(br))
        if norm == 0:
            return 0.0
        worst = min(worst, abs(br[(2,) * br.ndim]) / norm, _min_overlap(br))
    return worst


def _build_state(b: Builder, a: np.ndarray, trio: Trio, tol: ToleranceConfig) -> list[int]:
    if a.ndim == 1:
        return [b.add(Generator.state(a))[0]]
    branches = [_build_state(b, a[k], trio, tol) for k in range(3)]
    outs = _qmux_into(b, branches, trio)
    corr = np.diag(1 / _branch_weights(a[k][(2,) * (a.ndim - 1)] for k in range(3)))
    # The correction is diagonal with nonzero entries; its determinant may be
    # tiny at deep levels, so skip the generic invertibility gate.
    outs[0] = _add_matrix(b, outs[0], corr, trio, True, tol)
    return outs


def state_to_diagram(s, trio: Trio | None = None, tol: float = 1e-7, seed: int = 0,
                     tolcfg: ToleranceConfig = DEFAULT_TOL, max_draws: int = 20) -> SynthesisResult:
    """Realize an N-party qutrit state (up to scalar) as a 0-input diagram.

    Each party is first rotated by a random invertible matrix so that every
    overlap the recursion divides by is safely nonzero; the inverse rotation
    is appended on the matching output wire.
    """
    trio = trio or Trio.default()
    a = s.amplitudes if isinstance(s, PureState) else as_tensor(s)
    if a.ndim < 1 or any(n != 3 for n in a.shape):
        raise ShapeMismatch(f"state_to_diagram needs qutrit parties, got shape {a.shape}")
    if not np.any(a):
        raise ValueError("the zero vector is not a state")
    if a.ndim == 1:
        b = Builder()
        (x,) = b.add(Generator.state(a))
        d = b.build([], [x])
        return _check(d, evaluate(d), a, tol)

    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        R = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(a.ndim)]
        if min(abs(np.linalg.det(r)) for r in R) < 1e-3:
            continue
        rotated = a
        for p, r in enumerate(R):
            rotated = np.moveaxis(np.tensordot(r, rotated, axes=([1], [p])), 0, p)
        if _min_overlap(rotated) > 1e-3:
            break
    else:
        raise SingularMatrix("could not find a well-conditioned pre-rotation")

    b = Builder()
    outs = _build_state(b, rotated, trio, tolcfg)
    outs = [_add_matrix(b, w, np.linalg.inv(r), trio, False, tolcfg) for w, r in zip(outs, R)]
    d = b.build([], outs)
    return _check(d, evaluate(d), a, tol)
