"""Pure states and the ket-sum expression language.

Grammar (whitespace-insensitive)::

    expr  := ["+"|"-"] term (("+"|"-") term)*
    term  := [coeff ["*"]] ket
    coeff := real | "(" a "+" b "i" ")" | "(" a "-" b "i" ")"
    ket   := "|" digits ">"

Normalisation is never applied; states are compared up to a global scalar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ShapeMismatch
from .tensor_core import DEFAULT_TOL, ToleranceConfig, approx_proportional, as_tensor

__all__ = ["PureState", "parse_ket", "format_ket", "format_complex"]


@dataclass(frozen=True, eq=False)
class PureState:
    """N-party pure state stored as a ``d**N`` amplitude tensor."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = as_tensor(self.amplitudes)
        if a.ndim < 1:
            raise ShapeMismatch("a state needs at least one party")
        if len(set(a.shape)) != 1:
            raise ShapeMismatch(f"all parties must share one local dimension, got {a.shape}")
        if not np.any(a):
            raise ValueError("the zero vector is not a state")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def parties(self) -> int:
        return self.amplitudes.ndim

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def proportional_to(self, other: "PureState", tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        if self.amplitudes.shape != other.amplitudes.shape:
            return False
        return approx_proportional(self.amplitudes, other.amplitudes, tol) is not None

    def to_ket(self, atol: float = 0.0) -> str:
        return format_ket(self.amplitudes, atol=atol)

    def __repr__(self):
        return f"PureState({self.to_ket(1e-12)!r}, d={self.dim})"


_TOKEN = re.compile(
    r"""
    (?P<ket>\|[0-9]+>)
  | (?P<cplx>\([^()|]*\))
  | (?P<real>[0-9]+\.?[0-9]*(?:[eE][-+]?[0-9]+)?|\.[0-9]+(?:[eE][-+]?[0-9]+)?)
  | (?P<sign>[-+])
  | (?P<star>\*)
  | (?P<ws>\s+)
    """,
    re.VERBOSE,
)


def _parse_complex(text: str, pos: int) -> complex:
    body = text.strip()[1:-1].replace(" ", "").replace("i", "j")
    try:
        return complex(body)
    except ValueError:
        raise ParseError(f"malformed coefficient {text!r}", pos) from None


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            yield m.lastgroup, m.group(), pos
        pos = m.end()


def parse_ket(text: str, dim: int = 3) -> PureState:
    """Parse a ket sum such as ``"2|01> - (0+1i)|10>"``."""
    terms: list[tuple[complex, str]] = []
    sign = 1
    coeff = None
    expect_term = True
    for kind, tok, pos in _tokens(text):
        if kind == "sign":
            if coeff is not None:
                raise ParseError("sign after coefficient", pos)
            if not expect_term:
                expect_term = True
                sign = 1
            sign *= -1 if tok == "-" else 1
        elif kind in ("real", "cplx"):
            if coeff is not None or not expect_term:
                raise ParseError(f"unexpected coefficient {tok!r}", pos)
            coeff = float(tok) if kind == "real" else _parse_complex(tok, pos)
        elif kind == "star":
            if coeff is None:
                raise ParseError("'*' must follow a coefficient", pos)
        else:
            if not expect_term:
                raise ParseError("missing '+' or '-' between terms", pos)
            digits = tok[1:-1]
            for off, ch in enumerate(digits):
                if int(ch) >= dim:
                    raise ParseError(f"digit {ch} out of range for dimension {dim}", pos + 1 + off)
            c = 1 if coeff is None else coeff
            terms.append((sign * c, digits))
            sign, coeff, expect_term = 1, None, False
    if coeff is not None or (expect_term and terms):
        raise ParseError("expression ends without a ket", len(text))
    if not terms:
        raise ParseError("empty ket expression", 0)
    n = len(terms[0][1])
    for _, digits in terms:
        if len(digits) != n:
            raise ParseError(f"inconsistent party counts: {n} vs {len(digits)}", None)
    amp = np.zeros((dim,) * n, dtype=np.complex128)
    for c, digits in terms:
        amp[tuple(int(ch) for ch in digits)] += c
    if not np.any(amp):
        raise ValueError("ket expression sums to the zero vector")
    return PureState(amp)


def format_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(float(c.real))
    sign = "-" if c.imag < 0 else "+"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def format_ket(amplitudes, atol: float = 0.0) -> str:
    """Render an amplitude tensor as a parseable ket sum (round-trips exactly)."""
    a = np.asarray(amplitudes)
    parts = []
    for idx in zip(*np.nonzero(np.abs(a) > atol)):
        c = complex(a[idx])
        label = "|" + "".join(str(int(i)) for i in idx) + ">"
        if c == 1:
            parts.append(("+", label))
        elif c == -1:
            parts.append(("-", label))
        elif c.imag == 0 and c.real < 0:
            parts.append(("-", format_complex(-c) + label))
        else:
            parts.append(("+", format_complex(c) + label))
    if not parts:
        return "0"
    out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for s, p in parts[1:]:
        out += s + p
    return out
