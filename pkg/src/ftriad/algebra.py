"""Commutative Frobenius algebras over small Hilbert spaces.

Tensor layouts (output indices first, like matrices):

* ``mu[c, a, b]``    multiplication ``a (x) b -> c``
* ``eta[c]``         unit
* ``delta[b, c, a]`` comultiplication ``a -> b (x) c``
* ``epsilon[a]``     counit

The ISCFA test used here is a stand-in: the defining diagrammatic equations
of an intermediate special algebra are not available as formulas, so the
classifier combines the bubble-rank criterion (rank strictly between 1 and
``d``) with the identity ``bubble**3 == bubble**2``, which the canonical
qutrit algebra ``I`` satisfies. It is not a literal transcription of those
equations.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NotStronglyMaximal, ShapeMismatch, UnverifiedAlgebra
from .ket import PureState
from .tensor_core import DEFAULT_TOL, ToleranceConfig, as_tensor, numeric_rank

__all__ = [
    "CFA",
    "AxiomReport",
    "DerivedMaps",
    "AlgebraClass",
    "SPECIAL",
    "ANTI_SPECIAL",
    "INTERMEDIATE_SPECIAL",
    "OTHER",
    "LAWS",
    "check_axioms",
    "verify",
    "derived_maps",
    "classify_algebra",
    "induce_state",
    "induce_algebra",
    "builtin",
    "BUILTIN_NAMES",
    "cfa_from_terms",
]

SPECIAL = "Special"
ANTI_SPECIAL = "AntiSpecial"
INTERMEDIATE_SPECIAL = "IntermediateSpecial"
OTHER = "Other"

LAWS = (
    "coassociativity",
    "counit",
    "associativity",
    "unit",
    "frobenius",
    "commutativity",
    "cocommutativity",
)


@dataclass(frozen=True, eq=False)
class CFA:
    name: str
    d: int
    mu: np.ndarray
    eta: np.ndarray
    delta: np.ndarray
    epsilon: np.ndarray
    verified: bool = field(default=False, compare=False)

    def __post_init__(self):
        d = self.d
        want = {"mu": (d, d, d), "eta": (d,), "delta": (d, d, d), "epsilon": (d,)}
        for attr, shape in want.items():
            t = as_tensor(getattr(self, attr))
            if t.shape != shape:
                raise ShapeMismatch(f"{self.name}.{attr} has shape {t.shape}, expected {shape}")
            t.setflags(write=False)
            object.__setattr__(self, attr, t)

    def renamed(self, name: str) -> "CFA":
        return dataclasses.replace(self, name=name)

    def __repr__(self):
        flag = ", verified" if self.verified else ""
        return f"CFA({self.name!r}, d={self.d}{flag})"


def cfa_from_terms(name, d, mu, eta, delta, epsilon) -> CFA:
    """Build a CFA from sparse ``{(out..., in...): coeff}`` style listings.

    ``mu`` maps ``(c, a, b)`` for ``|c><ab|``; ``delta`` maps ``(b, c, a)``
    for ``|bc><a|``; ``eta`` and ``epsilon`` are plain vectors.
    """
    m = np.zeros((d, d, d), dtype=np.complex128)
    for idx, v in mu.items():
        m[idx] = v
    dl = np.zeros((d, d, d), dtype=np.complex128)
    for idx, v in delta.items():
        dl[idx] = v
    return CFA(name, d, m, np.asarray(eta, dtype=complex), dl, np.asarray(epsilon, dtype=complex))


def _builtin_table():
    ones = lambda d: [1] * d  # noqa: E731
    return {
        "GHZ2": lambda: cfa_from_terms(
            "GHZ2", 2,
            {(0, 0, 0): 1, (1, 1, 1): 1}, ones(2),
            {(0, 0, 0): 1, (1, 1, 1): 1}, ones(2)),
        "W2": lambda: cfa_from_terms(
            "W2", 2,
            {(0, 0, 1): 1, (0, 1, 0): 1, (1, 1, 1): 1}, [0, 1],
            {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1}, [1, 0]),
        "G": lambda: cfa_from_terms(
            "G", 3,
            {(i, i, i): 1 for i in range(3)}, ones(3),
            {(i, i, i): 1 for i in range(3)}, ones(3)),
        "W": lambda: cfa_from_terms(
            "W", 3,
            {(0, 0, 2): 1, (0, 1, 1): 1, (0, 2, 0): 1, (1, 1, 2): 1, (1, 2, 1): 1, (2, 2, 2): 1},
            [0, 0, 1],
            {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (0, 2, 2): 1, (1, 1, 2): 1, (2, 0, 2): 1},
            [1, 0, 0]),
        "I": lambda: cfa_from_terms(
            "I", 3,
            {(0, 0, 1): 1, (0, 1, 0): 1, (1, 1, 1): 1, (2, 2, 2): 1}, [0, 1, 1],
            {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (2, 2, 2): 1}, [1, 0, 1]),
    }


BUILTIN_NAMES = ("GHZ2", "W2", "G", "W", "I")


@lru_cache(maxsize=None)
def builtin(name: str, verified: bool = True) -> CFA:
    """One of the algebras ``GHZ2``, ``W2`` (qubits) or ``G``, ``W``, ``I`` (qutrits)."""
    table = _builtin_table()
    if name not in table:
        from .errors import UnknownName
        raise UnknownName(f"unknown algebra {name!r}; built-ins are {', '.join(BUILTIN_NAMES)}")
    F = table[name]()
    return verify(F) if verified else F


# -- axioms -----------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    algebra: str
    passed: dict
    residuals: dict

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self):
        return {
            "algebra": self.algebra,
            "ok": self.ok,
            "laws": {k: {"passed": self.passed[k], "residual": self.residuals[k]} for k in LAWS},
        }


def _residual(pairs, tol):
    worst, ok = 0.0, True
    for lhs, rhs in pairs:
        r = float(np.max(np.abs(lhs - rhs)))
        scale = float(max(np.max(np.abs(lhs)), np.max(np.abs(rhs))))
        worst = max(worst, r)
        ok = ok and tol.close(r, scale)
    return worst, ok


def check_axioms(F: CFA, tol: ToleranceConfig = DEFAULT_TOL) -> AxiomReport:
    """Check the seven CFA law groups by direct contraction."""
    mu, eta, de, ep = F.mu, F.eta, F.delta, F.epsilon
    I = np.eye(F.d)
    e = np.einsum
    laws = {
        # (delta x 1) delta == (1 x delta) delta : a -> x y z
        "coassociativity": [(e("xyb,bza->xyza", de, de), e("xba,yzb->xyza", de, de))],
        "counit": [(e("b,bca->ca", ep, de), I), (e("c,bca->ba", ep, de), I)],
        "associativity": [(e("cxz,xab->cabz", mu, mu), e("caw,wbz->cabz", mu, mu))],
        "unit": [(e("cab,a->cb", mu, eta), I), (e("cab,b->ca", mu, eta), I)],
        # (1 x mu)(delta x 1) == delta mu == (mu x 1)(1 x delta) : a b -> x y
        "frobenius": [
            (e("xwa,ywb->xyab", de, mu), e("xyc,cab->xyab", de, mu)),
            (e("xyc,cab->xyab", de, mu), e("xaw,wyb->xyab", mu, de)),
        ],
        "commutativity": [(mu, mu.transpose(0, 2, 1))],
        "cocommutativity": [(de, de.transpose(1, 0, 2))],
    }
    passed, residuals = {}, {}
    for name in LAWS:
        residuals[name], passed[name] = _residual(laws[name], tol)
    return AxiomReport(F.name, passed, residuals)


def verify(F: CFA, tol: ToleranceConfig = DEFAULT_TOL) -> CFA:
    """Return ``F`` flagged as verified, or raise if a law fails."""
    report = check_axioms(F, tol)
    if not report.ok:
        failed = [k for k, v in report.passed.items() if not v]
        raise UnverifiedAlgebra(f"{F.name} fails: {', '.join(failed)}")
    return dataclasses.replace(F, verified=True)


# -- derived maps and classification ---------------------------------------


@dataclass(frozen=True)
class DerivedMaps:
    bubble: np.ndarray       # mu . delta, (out, in)
    loop_unit: np.ndarray    # mu . delta . eta
    loop_counit: np.ndarray  # eps . mu . delta
    circle: complex          # eps . mu . delta . eta
    cap: np.ndarray          # eps . mu, indices (in, in)
    cup: np.ndarray          # delta . eta, indices (out, out)


def derived_maps(F: CFA) -> DerivedMaps:
    bubble = np.einsum("cab,abx->cx", F.mu, F.delta)
    loop_unit = bubble @ F.eta
    loop_counit = F.epsilon @ bubble
    return DerivedMaps(
        bubble=bubble,
        loop_unit=loop_unit,
        loop_counit=loop_counit,
        circle=complex(F.epsilon @ loop_unit),
        cap=np.einsum("c,cab->ab", F.epsilon, F.mu),
        cup=np.einsum("abx,x->ab", F.delta, F.eta),
    )


@dataclass(frozen=True)
class AlgebraClass:
    label: str
    bubble_rank: int
    evidence: dict

    def to_dict(self):
        return {"label": self.label, "bubble_rank": self.bubble_rank, "residuals": self.evidence}


def anti_special_residual(maps: DerivedMaps) -> float:
    """Max entry of ``circle * bubble - loop_unit (x) loop_counit``."""
    lhs = maps.circle * maps.bubble
    rhs = np.outer(maps.loop_unit, maps.loop_counit)
    return float(np.max(np.abs(lhs - rhs)))


def classify_algebra(F: CFA, tol: ToleranceConfig = DEFAULT_TOL) -> AlgebraClass:
    """Special / AntiSpecial / IntermediateSpecial / Other, by the bubble."""
    if not F.verified:
        raise UnverifiedAlgebra(f"{F.name} has not passed check_axioms; call verify() first")
    m = derived_maps(F)
    B = m.bubble
    rank = numeric_rank(B, tol)
    scale = float(np.max(np.abs(B))) if B.size else 0.0
    special_res = float(np.max(np.abs(B - np.eye(F.d))))
    anti_res = anti_special_residual(m)
    anti_scale = float(max(np.max(np.abs(m.circle * B)),
                           np.max(np.abs(np.outer(m.loop_unit, m.loop_counit)))))
    B2 = B @ B
    B3 = B2 @ B
    inter_res = float(np.max(np.abs(B3 - B2)))
    inter_scale = float(max(np.max(np.abs(B3)), np.max(np.abs(B2))))
    evidence = {"special": special_res, "anti_special": anti_res, "intermediate": inter_res}
    if tol.close(special_res, max(1.0, scale)):
        label = SPECIAL
    elif rank == 1 and tol.close(anti_res, anti_scale):
        label = ANTI_SPECIAL
    elif 1 < rank < F.d and tol.close(inter_res, inter_scale):
        label = INTERMEDIATE_SPECIAL
    else:
        label = OTHER
    return AlgebraClass(label, rank, evidence)


# -- state <-> algebra ------------------------------------------------------


def induce_state(F: CFA) -> tuple[PureState, np.ndarray, np.ndarray]:
    """The three-legged spider state with its witness ``(Phi, xi) = (cap, counit)``."""
    psi = np.einsum("ayx,bcy,x->abc", F.delta, F.delta, F.eta)
    cap = np.einsum("c,cab->ab", F.epsilon, F.mu)
    return PureState(psi), cap, np.array(F.epsilon)


def middle_contraction(psi: np.ndarray, xi) -> np.ndarray:
    """``K[x, y] = sum_b xi[b] psi[x, b, y]``."""
    return np.einsum("b,xby->xy", np.asarray(xi, dtype=np.complex128), psi)


def induce_algebra(state, xi, tol: ToleranceConfig = DEFAULT_TOL,
                   name: str = "induced") -> tuple[CFA, np.ndarray]:
    """Algebra induced by a tripartite state and an effect ``xi`` on the middle party.

    The returned algebra is not verified; run :func:`check_axioms` on it.
    """
    psi = state.amplitudes if isinstance(state, PureState) else as_tensor(state)
    xi = as_tensor(xi)
    if psi.ndim != 3 or len(set(psi.shape)) != 1:
        raise ShapeMismatch(f"need a tripartite state with equal local dimensions, got {psi.shape}")
    d = psi.shape[0]
    if xi.shape != (d,):
        raise ShapeMismatch(f"xi must have shape ({d},), got {xi.shape}")
    K = middle_contraction(psi, xi)
    if abs(np.linalg.det(K)) <= tol.atol or numeric_rank(K, tol) < d:
        raise NotStronglyMaximal("the contraction of the state with xi is singular")
    phi = np.linalg.inv(K)
    mu = np.einsum("ap,bq,pqc->cab", phi, phi, psi)
    delta = np.einsum("ap,pbc->bca", phi, psi)
    eta = np.einsum("a,b,abc->c", xi, xi, psi)
    return CFA(name, d, mu, eta, delta, xi), phi
