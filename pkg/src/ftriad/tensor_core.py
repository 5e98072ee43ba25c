"""Dense complex tensors over small qudit wires.

Tensors are plain ``numpy`` arrays of dtype ``complex128``; every public
function here accepts anything ``np.asarray`` understands and returns fresh
arrays, so values can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ShapeMismatch, SingularMatrix

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "LduFactors",
    "as_tensor",
    "contract",
    "numeric_rank",
    "approx_proportional",
    "ldu_decompose",
    "perm_matrix",
    "basis",
]


@dataclass(frozen=True)
class ToleranceConfig:
    atol: float = 1e-9
    rtol: float = 1e-9
    rank_cutoff: float = 1e-8

    def __post_init__(self):
        for name in ("atol", "rtol", "rank_cutoff"):
            v = getattr(self, name)
            if not (v >= 0 and np.isfinite(v)):
                raise ValueError(f"{name} must be a finite non-negative number, got {v!r}")

    def close(self, residual: float, scale: float = 0.0) -> bool:
        return residual <= self.atol + self.rtol * scale


DEFAULT_TOL = ToleranceConfig()


def as_tensor(x) -> np.ndarray:
    """Convert to a complex128 array, rejecting NaN and Inf entries."""
    a = np.array(x, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        raise ValueError("tensor entries must be finite")
    return a


def basis(i: int, d: int = 3) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1
    return v


def contract(a, b, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Sum over paired indices of ``a`` and ``b``.

    The result carries the unpaired indices of ``a`` (in order) followed by
    the unpaired indices of ``b``. An empty ``pairs`` gives the outer product.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    ia = [p[0] for p in pairs]
    ib = [p[1] for p in pairs]
    if len(set(ia)) != len(ia) or len(set(ib)) != len(ib):
        raise ShapeMismatch("contraction pairs must be disjoint")
    for i, j in pairs:
        if not (0 <= i < a.ndim) or not (0 <= j < b.ndim):
            raise ShapeMismatch(f"index pair ({i}, {j}) out of range for ranks {a.ndim}, {b.ndim}")
        if a.shape[i] != b.shape[j]:
            raise ShapeMismatch(
                f"dimension mismatch on pair ({i}, {j}): {a.shape[i]} != {b.shape[j]}"
            )
    return np.tensordot(a, b, axes=(ia, ib))


def numeric_rank(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Count singular values above ``rank_cutoff`` times the largest one."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatch(f"numeric_rank needs a matrix, got rank-{m.ndim} tensor")
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_cutoff * s[0]))


def approx_proportional(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> complex | None:
    """Return ``c`` with ``a ~= c * b``, or ``None`` when no such scalar exists.

    Two zero tensors are proportional with ``c = 1``. A zero tensor and a
    nonzero one are not: ``c = 0`` is never reported, since states are
    compared up to a nonzero scalar.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    na = np.max(np.abs(a)) if a.size else 0.0
    nb = np.max(np.abs(b)) if b.size else 0.0
    a_zero = na <= tol.atol
    b_zero = nb <= tol.atol
    if a_zero and b_zero:
        return 1 + 0j
    if a_zero or b_zero:
        return None
    c = np.vdot(b, a) / np.vdot(b, b)
    resid = np.max(np.abs(a - c * b))
    if tol.close(resid, na):
        return complex(c)
    return None


def perm_matrix(p: Sequence[int]) -> np.ndarray:
    """Matrix sending basis vector ``i`` to basis vector ``p[i]``."""
    n = len(p)
    m = np.zeros((n, n), dtype=np.complex128)
    for i, pi in enumerate(p):
        m[pi, i] = 1
    return m


@dataclass(frozen=True)
class LduFactors:
    """``F = P @ L @ D @ U @ P2`` with unit-diagonal triangular ``L`` and ``U``.

    ``P`` and ``P2`` are permutations stored as tuples (see :func:`perm_matrix`).
    Following the usual labelling, ``l = (L[2,1], L[2,0], L[1,0])``,
    ``u = (U[0,1], U[0,2], U[1,2])`` and ``d`` is the diagonal of ``D``.
    """

    P: tuple[int, ...]
    L: np.ndarray
    D: np.ndarray
    U: np.ndarray
    P2: tuple[int, ...]

    @property
    def P_matrix(self) -> np.ndarray:
        return perm_matrix(self.P)

    @property
    def P2_matrix(self) -> np.ndarray:
        return perm_matrix(self.P2)

    @property
    def d(self) -> np.ndarray:
        return np.diag(self.D).copy()

    @property
    def l(self) -> tuple[complex, complex, complex]:
        return (complex(self.L[2, 1]), complex(self.L[2, 0]), complex(self.L[1, 0]))

    @property
    def u(self) -> tuple[complex, complex, complex]:
        return (complex(self.U[0, 1]), complex(self.U[0, 2]), complex(self.U[1, 2]))

    def reconstruct(self) -> np.ndarray:
        return self.P_matrix @ self.L @ self.D @ self.U @ self.P2_matrix


PIVOT_THRESHOLD = 0.5


def _ldexp(a: np.ndarray, e: int) -> np.ndarray:
    return np.ldexp(a.real, e) + 1j * np.ldexp(a.imag, e)


def _ldu_pivoted(F: np.ndarray) -> LduFactors:
    # Threshold complete pivoting: the diagonal entry is kept when it is at
    # least PIVOT_THRESHOLD times the largest remaining entry, so well-scaled
    # matrices need no permutations; otherwise np.argmax picks the pivot.
    # Working on F / max|F| keeps subnormal inputs from overflowing 1/pivot;
    # the scale goes back into D at the end.
    n = F.shape[0]
    # Scaling by a power of two is exact and cannot overflow.
    e = int(np.frexp(np.max(np.abs(F)))[1]) if F.size else 0
    A = _ldexp(F.astype(np.complex128), -e)
    rows = list(range(n))
    cols = list(range(n))
    L = np.eye(n, dtype=np.complex128)
    for k in range(n):
        sub = np.abs(A[k:, k:])
        if sub.size == 0 or sub.max() <= n * np.finfo(float).eps:
            A[k:, k:] = 0
            break
        if sub[0, 0] >= PIVOT_THRESHOLD * sub.max():
            i = j = k
        else:
            i, j = divmod(int(np.argmax(sub)), n - k)
            i += k
            j += k
        if i != k:
            A[[k, i], :] = A[[i, k], :]
            L[[k, i], :k] = L[[i, k], :k]
            rows[k], rows[i] = rows[i], rows[k]
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            cols[k], cols[j] = cols[j], cols[k]
        piv = A[k, k]
        for r in range(k + 1, n):
            f = A[r, k] / piv
            L[r, k] = f
            A[r, k:] -= f * A[k, k:]
            A[r, k] = 0
    d = np.diag(A).copy()
    U = np.eye(n, dtype=np.complex128)
    for k in range(n):
        if d[k] != 0:
            U[k, k + 1:] = A[k, k + 1:] / d[k]
    d = _ldexp(d, e)
    # Pr @ F @ Pc = L D U with (Pr)[k, rows[k]] = 1 and (Pc)[cols[k], k] = 1.
    P = [0] * n
    for k, r in enumerate(rows):
        P[k] = r  # P = Pr^T sends e_k to e_rows[k]
    P2 = [0] * n
    for k, c in enumerate(cols):
        P2[c] = k  # P2 = Pc^T sends e_cols[k] to e_k
    return LduFactors(tuple(P), L, np.diag(d), U, tuple(P2))


def ldu_decompose(F, tol: ToleranceConfig = DEFAULT_TOL) -> LduFactors:
    """Pivoted LDU factorisation of an invertible square matrix."""
    F = as_tensor(F)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ShapeMismatch(f"ldu_decompose needs a square matrix, got shape {F.shape}")
    if abs(np.linalg.det(F)) <= tol.atol:
        raise SingularMatrix("matrix is singular within tolerance")
    return _ldu_pivoted(F)


def ldu_decompose_any(F) -> LduFactors:
    """Like :func:`ldu_decompose` but also accepts singular input (zeros in ``D``)."""
    F = as_tensor(F)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ShapeMismatch(f"ldu_decompose needs a square matrix, got shape {F.shape}")
    return _ldu_pivoted(F)
