"""Text syntax for diagrams.

::

    term := seq
    seq  := par (";" par)*          # a ; b  means  a, then b
    par  := atom ("*" atom)*        # side by side
    atom := "mu[A]" | "eta[A]" | "delta[A]" | "eps[A]"
          | "id(d)" | "swap(d,d)" | "ket(expr)" | "bra(expr)" | "box(name)"
          | "(" term ")"

Whitespace is ignored and blank input is the empty diagram. ``ket``/``bra``
take a single-party ket expression; ``bra`` coefficients are used as
written (no conjugation).
"""

from __future__ import annotations

import re
from typing import Mapping

from ..errors import ParseError, PortMismatch, ShapeMismatch, UnknownAlgebra
from ..ket import parse_ket
from .core import Diagram, Generator

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[0-9]+")


class _Parser:
    def __init__(self, text, algebras, boxes, dim):
        self.text = text
        self.pos = 0
        self.algebras = algebras
        self.boxes = boxes
        self.dim = dim

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def name(self):
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a name", self.pos)
        self.pos = m.end()
        return m.group()

    def integer(self):
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a positive integer", self.pos)
        self.pos = m.end()
        v = int(m.group())
        if v < 1:
            raise ParseError("wire dimension must be at least 1", m.start())
        return v

    def balanced(self):
        """Raw text up to the ')' matching an already consumed '('."""
        depth, start = 1, self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    body = self.text[start:self.pos]
                    self.pos += 1
                    return body, start
            self.pos += 1
        raise ParseError("unbalanced '('", start - 1)

    def term(self):
        d = self.par()
        while self.peek() == ";":
            self.pos += 1
            at = self.pos
            nxt = self.par()
            if d.out_dims != nxt.in_dims:
                raise PortMismatch(
                    f"cannot compose {len(d.outputs)} output(s) {d.out_dims} with "
                    f"{len(nxt.inputs)} input(s) {nxt.in_dims} (at position {at})")
            d = d >> nxt
        return d

    def par(self):
        d = self.atom()
        while self.peek() == "*":
            self.pos += 1
            d = d @ self.atom()
        return d

    def atom(self):
        if self.peek() == "(":
            self.pos += 1
            d = self.term()
            self.expect(")")
            return d
        at = self.pos
        word = self.name()
        if word in ("mu", "eta", "delta", "eps"):
            self.expect("[")
            name_at = self.pos
            alg = self.name()
            self.expect("]")
            if alg not in self.algebras:
                raise UnknownAlgebra(f"unknown algebra {alg!r}", name_at)
            F = self.algebras[alg]
            gen = {"mu": Generator.mul, "eta": Generator.unit,
                   "delta": Generator.comul, "eps": Generator.counit}[word](F)
            return Diagram.from_generator(gen)
        if word == "id":
            self.expect("(")
            d = self.integer()
            self.expect(")")
            return Diagram.id(d)
        if word == "swap":
            self.expect("(")
            d1 = self.integer()
            self.expect(",")
            d2 = self.integer()
            self.expect(")")
            return Diagram.swap(d1, d2)
        if word in ("ket", "bra"):
            self.expect("(")
            body, body_at = self.balanced()
            try:
                st = parse_ket(body, self.dim)
            except ParseError as exc:
                off = exc.position if exc.position is not None else 0
                raise ParseError(str(exc).split(" (at position")[0], body_at + off) from None
            if st.parties != 1:
                raise ParseError(f"{word}(...) takes a single-party expression", body_at)
            g = Generator.state if word == "ket" else Generator.effect
            return Diagram.from_generator(g(st.amplitudes, label=body.strip()))
        if word == "box":
            self.expect("(")
            label = self.name()
            self.expect(")")
            if label not in self.boxes:
                raise ParseError(f"unknown box {label!r}", at)
            return Diagram.from_generator(Generator.box(label, self.boxes[label]))
        raise ParseError(f"unknown generator {word!r}", at)


def parse_diagram(text: str, algebras: Mapping, boxes: Mapping | None = None,
                  dim: int = 3) -> Diagram:
    """Parse the diagram language; ``algebras`` maps names to CFAs.

    ``boxes`` maps names to ``(out, in)`` matrices; ``dim`` is the local
    dimension used for ``ket``/``bra`` literals.
    """
    p = _Parser(text, algebras, boxes or {}, dim)
    if not p.peek():
        return Diagram.empty()
    try:
        d = p.term()
    except ShapeMismatch as exc:
        raise PortMismatch(str(exc)) from None
    if p.peek():
        raise ParseError(f"unexpected {p.peek()!r}", p.pos)
    return d
