"""Local operations, maximality witnesses and Frobenius-class detection for qutrit triples.

``classify_state`` runs a fixed pipeline: exact/probabilistic maximality
check, symmetry gate, then a search over counit candidates ``xi``. Every
candidate whose induced maps satisfy all seven laws is classified; if the
first classification is ``Other`` the candidate is rescaled once (see
:func:`normalize_counit`) before moving on. Exhausting the budget gives a
``NoValidAlgebraFound`` verdict, which is evidence and not a proof.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (ANTI_SPECIAL, INTERMEDIATE_SPECIAL, OTHER, SPECIAL, CFA, AlgebraClass,
                      check_axioms, classify_algebra, derived_maps, induce_algebra)
from .errors import NotStronglyMaximal, ShapeMismatch, SingularMatrix
from .ket import PureState
from .tensor_core import DEFAULT_TOL, ToleranceConfig, approx_proportional, as_tensor, numeric_rank

__all__ = [
    "LocalOperation", "Witness", "MaximalityResult", "ClassLabel",
    "CLASS_G", "CLASS_W", "CLASS_I", "NON_FROBENIUS",
    "NOT_MAXIMAL", "NOT_STRONGLY_MAXIMAL", "NOT_SYMMETRIC", "NO_VALID_ALGEBRA",
    "apply_local", "is_symmetric", "party_matricization_ranks", "solve_witness",
    "maximality_witness", "structured_candidates", "normalize_counit", "classify_state",
    "transport_witness", "verify_slocc_witness", "witness_residual",
]

CLASS_G, CLASS_W, CLASS_I, NON_FROBENIUS = "ClassG", "ClassW", "ClassI", "NonFrobenius"
NOT_STRONGLY_MAXIMAL = "NotStronglyMaximal"
NOT_MAXIMAL = "NotMaximal"
NOT_SYMMETRIC = "NotSymmetric"
NO_VALID_ALGEBRA = "NoValidAlgebraFound"

_LABEL_FOR = {SPECIAL: CLASS_G, ANTI_SPECIAL: CLASS_W, INTERMEDIATE_SPECIAL: CLASS_I}


@dataclass(frozen=True, eq=False)
class LocalOperation:
    """One ``d x d`` matrix per party, applied as ``L_1 (x) ... (x) L_N``."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        ms = tuple(as_tensor(m) for m in self.matrices)
        for m in ms:
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ShapeMismatch(f"local operations must be square matrices, got {m.shape}")
            m.setflags(write=False)
        object.__setattr__(self, "matrices", ms)

    @classmethod
    def uniform(cls, L, parties: int = 3) -> "LocalOperation":
        return cls((as_tensor(L),) * parties)

    @classmethod
    def identity(cls, parties: int = 3, d: int = 3) -> "LocalOperation":
        return cls.uniform(np.eye(d), parties)

    def inverse(self) -> "LocalOperation":
        try:
            return LocalOperation(tuple(np.linalg.inv(m) for m in self.matrices))
        except np.linalg.LinAlgError:
            raise SingularMatrix("local operation is not invertible") from None


@dataclass(frozen=True, eq=False)
class Witness:
    """Effects ``xi`` (one party) and ``phi`` (the other two) with ``K(xi) @ phi = id``."""

    xi: np.ndarray
    phi: np.ndarray
    party: int = 1

    def to_dict(self):
        from .serialize import tensor_json
        return {"party": self.party, "xi": tensor_json(self.xi), "phi": tensor_json(self.phi)}


@dataclass(frozen=True)
class MaximalityResult:
    maximal: bool
    exact: bool
    ranks: tuple[int, ...]
    witnesses: tuple[Witness | None, ...] = ()

    @property
    def verdict(self) -> str:
        return "Maximal" if self.maximal else NOT_MAXIMAL


@dataclass(frozen=True, eq=False)
class ClassLabel:
    label: str
    reason: str | None = None
    witness: Witness | None = None
    algebra: CFA | None = None
    algebra_class: AlgebraClass | None = None
    residuals: dict = field(default_factory=dict)
    candidates_tried: int = 0

    @property
    def name(self) -> str:
        return f"{self.label}({self.reason})" if self.reason else self.label


def _state_array(s) -> np.ndarray:
    return s.amplitudes if isinstance(s, PureState) else as_tensor(s)


def apply_local(s, op: LocalOperation) -> PureState:
    """``(L_1 (x) ... (x) L_N) |s>``; raises if the result is the zero vector."""
    a = _state_array(s)
    if len(op.matrices) != a.ndim:
        raise ShapeMismatch(f"{len(op.matrices)} matrices for a {a.ndim}-party state")
    for k, m in enumerate(op.matrices):
        if m.shape[1] != a.shape[k]:
            raise ShapeMismatch(f"party {k}: matrix {m.shape} on dimension {a.shape[k]}")
        a = np.moveaxis(np.tensordot(m, a, axes=([1], [k])), 0, k)
    if not np.any(a):
        raise ValueError("local operation annihilates the state")
    return PureState(a)


def is_symmetric(s, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Invariance of the amplitudes under every permutation of the parties."""
    a = _state_array(s)
    scale = float(np.max(np.abs(a)))
    for perm in itertools.permutations(range(a.ndim)):
        if not tol.close(float(np.max(np.abs(a - a.transpose(perm)))), scale):
            return False
    return True


def party_matricization_ranks(s, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[int, ...]:
    """Rank of the ``d x d**(N-1)`` matrix obtained by singling out each party."""
    a = _state_array(s)
    return tuple(numeric_rank(np.moveaxis(a, p, 0).reshape(a.shape[p], -1), tol)
                 for p in range(a.ndim))


def _contraction(a: np.ndarray, xi: np.ndarray, party: int) -> np.ndarray:
    return np.tensordot(a, xi, axes=([party], [0]))


def solve_witness(s, xi, party: int = 1, tol: ToleranceConfig = DEFAULT_TOL) -> Witness:
    """Complete ``xi`` on ``party`` to a witness by inverting the contraction.

    Raises :class:`NotStronglyMaximal` when the contraction is singular.
    """
    a = _state_array(s)
    if a.ndim != 3:
        raise ShapeMismatch("witnesses are defined for tripartite states")
    xi = as_tensor(xi)
    K = _contraction(a, xi, party)
    if numeric_rank(K, tol) < K.shape[0]:
        raise NotStronglyMaximal(f"contraction on party {party} is singular for this xi")
    return Witness(xi, np.linalg.inv(K), party)


def witness_residual(s, w: Witness) -> float:
    a = _state_array(s)
    K = _contraction(a, w.xi, w.party)
    return float(np.max(np.abs(K @ w.phi - np.eye(K.shape[0]))))


def maximality_witness(s, trials: int = 32, seed: int = 0,
                       tol: ToleranceConfig = DEFAULT_TOL) -> MaximalityResult:
    """Search a witness for each party of a tripartite state.

    A party whose matricization has rank below ``d`` makes every contraction
    singular, so that verdict is exact. Otherwise random complex Gaussian
    ``xi`` are tried; the determinant is a polynomial in ``xi`` and a
    nonzero value is found almost surely when one exists.
    """
    a = _state_array(s)
    if a.ndim != 3:
        raise ShapeMismatch("maximality is checked for tripartite states")
    d = a.shape[0]
    ranks = party_matricization_ranks(a, tol)
    if min(ranks) < d:
        return MaximalityResult(False, True, ranks)
    rng = np.random.default_rng(seed)
    found: list[Witness | None] = []
    for p in range(3):
        w = None
        for _ in range(trials):
            xi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            try:
                w = solve_witness(a, xi, p, tol)
                break
            except NotStronglyMaximal:
                continue
        found.append(w)
    return MaximalityResult(all(w is not None for w in found), False, ranks, tuple(found))


def structured_candidates(d: int = 3, limit: int = 64) -> list[np.ndarray]:
    """Small-integer effects, sparsest first: basis effects, sums, then signs and twos."""
    values = (0, 1, -1, 2)
    vecs = [np.array(v, dtype=np.complex128) for v in itertools.product(values, repeat=d) if any(v)]
    vecs.sort(key=lambda v: (np.count_nonzero(v), int(np.sum(np.abs(v) != 1)), int(np.sum(v.real < 0))))
    return vecs[:limit]


def _hermite_coefficients(eigs: np.ndarray, tol: float) -> np.ndarray:
    """Polynomial equal to the cube root on nonzero eigenvalues and to 1 at zero.

    Clustered eigenvalues get matching derivative conditions, so the matrix
    function is exact on Jordan blocks too.
    """
    clusters: list[list[complex]] = []
    for lam in eigs:
        for c in clusters:
            if abs(c[0] - lam) <= tol:
                c.append(lam)
                break
        else:
            clusters.append([lam])
    n = len(eigs)
    rows, rhs = [], []
    for c in clusters:
        lam = complex(np.mean(c))
        zero = abs(lam) <= tol
        for j in range(len(c)):
            rows.append([math.perm(k, j) * (lam ** (k - j) if k >= j else 0) for k in range(n)])
            if zero:
                rhs.append(1.0 if j == 0 else 0.0)
            else:
                coef = np.prod([1 / 3 - i for i in range(j)]) if j else 1.0
                rhs.append(coef * lam ** (1 / 3 - j))
    return np.linalg.solve(np.array(rows, dtype=np.complex128), np.array(rhs, dtype=np.complex128))


def normalize_counit(F: CFA, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """A rescaled counit ``eps o m_z`` for the same state.

    The bubble is multiplication by the element ``e = mu(delta(eta))``.
    Re-inducing with ``eps o m_z`` turns the bubble into multiplication by
    ``e z**-3``; taking ``z`` a cube root of ``e`` on its invertible part
    and 1 on its nilpotent part makes the new bubble idempotent up to a
    nilpotent term.
    """
    B = derived_maps(F).bubble
    eigs = np.linalg.eigvals(B)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    coeffs = _hermite_coefficients(eigs, 1e-6 * scale)
    Lz = sum(c * np.linalg.matrix_power(B, k) for k, c in enumerate(coeffs))
    return np.asarray(F.epsilon) @ Lz


def _try_candidate(a, xi, tol):
    """Induce, check and classify; returns (algebra, class, phi) or None."""
    try:
        F, phi = induce_algebra(a, xi, tol)
    except NotStronglyMaximal:
        return None
    report = check_axioms(F, tol)
    if not report.ok:
        return None
    F = dataclasses.replace(F, verified=True)
    return F, classify_algebra(F, tol), phi, report


def classify_state(s, budget: int = 320, seed: int = 0,
                   tol: ToleranceConfig = DEFAULT_TOL) -> ClassLabel:
    """Frobenius class of a tripartite qutrit state.

    ``budget`` bounds the number of ``xi`` candidates: up to 64 structured
    ones first, then complex Gaussian ones drawn from ``seed``.
    """
    a = _state_array(s)
    if a.shape != (3, 3, 3):
        raise ShapeMismatch(f"classify_state needs a tripartite qutrit state, got shape {a.shape}")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    maxi = maximality_witness(a, seed=seed, tol=tol)
    if not maxi.maximal:
        return ClassLabel(NON_FROBENIUS, NOT_STRONGLY_MAXIMAL,
                          residuals={"party_ranks": list(maxi.ranks)})
    if not is_symmetric(a, tol):
        return ClassLabel(NON_FROBENIUS, NOT_SYMMETRIC)

    rng = np.random.default_rng(seed)
    structured = structured_candidates(3, min(budget, 64))
    tried = 0
    while tried < budget:
        if tried < len(structured):
            xi = structured[tried]
        else:
            xi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        tried += 1
        got = _try_candidate(a, xi, tol)
        if got is None:
            continue
        F, cls, phi, report = got
        if cls.label == OTHER:
            again = _try_candidate(a, normalize_counit(F, tol), tol)
            if again is None:
                continue
            F, cls, phi, report = again
            if cls.label == OTHER:
                continue
        return ClassLabel(_LABEL_FOR[cls.label], None, Witness(np.asarray(F.epsilon), phi, 1),
                          F, cls, dict(report.residuals), tried)
    return ClassLabel(NON_FROBENIUS, NO_VALID_ALGEBRA, candidates_tried=tried)


def transport_witness(s, op: LocalOperation, w: Witness) -> Witness:
    """Witness for ``apply_local(s, L (x) L (x) L)`` built from one for ``s``."""
    L = op.matrices[0]
    if any(not np.array_equal(m, L) for m in op.matrices[1:]):
        raise ValueError("transport_witness needs the same matrix on every party")
    try:
        Li = np.linalg.inv(L)
    except np.linalg.LinAlgError:
        raise SingularMatrix("cannot transport a witness through a singular matrix") from None
    if numeric_rank(L) < L.shape[0]:
        raise SingularMatrix("cannot transport a witness through a singular matrix")
    return Witness(w.xi @ Li, Li.T @ w.phi @ Li, w.party)


def verify_slocc_witness(s1, s2, op: LocalOperation, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``apply_local(s2, op)`` is proportional to ``s1``."""
    for k, m in enumerate(op.matrices):
        if numeric_rank(m, tol) < m.shape[0]:
            raise SingularMatrix(f"matrix {k} of the local operation is singular")
    a1, a2 = _state_array(s1), _state_array(s2)
    if a1.shape != a2.shape:
        return False
    return approx_proportional(apply_local(a2, op).amplitudes, a1, tol) is not None
