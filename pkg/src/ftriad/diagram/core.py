"""String diagrams as open directed acyclic graphs.

Every wire has a single integer id. A wire has exactly one source (a
boundary input or a node output port) and exactly one sink (a node input
port or a boundary output). Coherence maps never appear; identity and swap
are ordinarily pure wiring, though explicit ``id``/``swap`` nodes are
accepted everywhere and elided where topology matters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from ..errors import PortMismatch, ShapeMismatch
from ..tensor_core import as_tensor

MUL, UNIT, COMUL, COUNIT = "mu", "eta", "delta", "eps"
IDENTITY, SWAP, STATE, EFFECT, BOX = "id", "swap", "ket", "bra", "box"
ALGEBRA_KINDS = (MUL, UNIT, COMUL, COUNIT)
WIRING_KINDS = (IDENTITY, SWAP)


@dataclass(frozen=True, eq=False)
class Generator:
    """One box of a diagram.

    ``algebra`` is any object with ``name``, ``d``, ``mu``, ``eta``,
    ``delta`` and ``epsilon`` attributes (a :class:`ftriad.algebra.CFA`).
    """

    kind: str
    algebra: Any = None
    dims: tuple[int, ...] = ()
    tensor: np.ndarray | None = None
    label: str = ""

    @classmethod
    def mul(cls, algebra):
        return cls(MUL, algebra=algebra)

    @classmethod
    def unit(cls, algebra):
        return cls(UNIT, algebra=algebra)

    @classmethod
    def comul(cls, algebra):
        return cls(COMUL, algebra=algebra)

    @classmethod
    def counit(cls, algebra):
        return cls(COUNIT, algebra=algebra)

    @classmethod
    def identity(cls, d: int):
        return cls(IDENTITY, dims=(d,))

    @classmethod
    def swap(cls, d1: int, d2: int):
        return cls(SWAP, dims=(d1, d2))

    @classmethod
    def state(cls, vector, label: str = ""):
        v = as_tensor(vector)
        if v.ndim != 1:
            raise ShapeMismatch("state nodes carry a single-index tensor")
        return cls(STATE, tensor=v, label=label)

    @classmethod
    def effect(cls, vector, label: str = ""):
        v = as_tensor(vector)
        if v.ndim != 1:
            raise ShapeMismatch("effect nodes carry a single-index tensor")
        return cls(EFFECT, tensor=v, label=label)

    @classmethod
    def box(cls, label: str, matrix):
        m = as_tensor(matrix)
        if m.ndim != 2:
            raise ShapeMismatch("matrix boxes carry a two-index tensor (out, in)")
        return cls(BOX, tensor=m, label=label)

    @property
    def in_dims(self) -> tuple[int, ...]:
        k = self.kind
        if k == MUL:
            return (self.algebra.d,) * 2
        if k in (COMUL, COUNIT):
            return (self.algebra.d,)
        if k == UNIT or k == STATE:
            return ()
        if k == IDENTITY:
            return self.dims
        if k == SWAP:
            return self.dims
        if k == EFFECT:
            return (self.tensor.shape[0],)
        return (self.tensor.shape[1],)

    @property
    def out_dims(self) -> tuple[int, ...]:
        k = self.kind
        if k == COMUL:
            return (self.algebra.d,) * 2
        if k in (MUL, UNIT):
            return (self.algebra.d,)
        if k == COUNIT or k == EFFECT:
            return ()
        if k == IDENTITY:
            return self.dims
        if k == SWAP:
            return self.dims[::-1]
        if k == STATE:
            return (self.tensor.shape[0],)
        return (self.tensor.shape[0],)

    def io_tensor(self) -> np.ndarray:
        """The generator's tensor with input indices first, then outputs."""
        k = self.kind
        if k == MUL:
            return np.asarray(self.algebra.mu).transpose(1, 2, 0)
        if k == COMUL:
            return np.asarray(self.algebra.delta).transpose(2, 0, 1)
        if k == UNIT:
            return np.asarray(self.algebra.eta)
        if k == COUNIT:
            return np.asarray(self.algebra.epsilon)
        if k == IDENTITY:
            return np.eye(self.dims[0], dtype=np.complex128)
        if k == SWAP:
            d1, d2 = self.dims
            t = np.einsum("ac,bd->abdc", np.eye(d1), np.eye(d2))
            return t.astype(np.complex128)
        if k in (STATE, EFFECT):
            return self.tensor
        return self.tensor.T

    @property
    def algebra_name(self) -> str | None:
        return None if self.algebra is None else self.algebra.name

    def __repr__(self):
        if self.kind in ALGEBRA_KINDS:
            return f"{self.kind}[{self.algebra.name}]"
        if self.kind in WIRING_KINDS:
            return f"{self.kind}{self.dims}"
        if self.kind == BOX:
            return f"box({self.label})"
        return f"{self.kind}({self.label or self.tensor.tolist()})"


@dataclass(frozen=True)
class Node:
    gen: Generator
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Diagram:
    nodes: tuple[Node, ...]
    dims: tuple[int, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    _order: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        nw = len(self.dims)
        src = [0] * nw
        snk = [0] * nw
        for w in self.inputs:
            src[w] += 1
        for w in self.outputs:
            snk[w] += 1
        for node in self.nodes:
            g = node.gen
            if len(node.inputs) != len(g.in_dims) or len(node.outputs) != len(g.out_dims):
                raise PortMismatch(f"{g!r}: wrong number of connected ports")
            for w, d in zip(node.inputs, g.in_dims):
                if self.dims[w] != d:
                    raise ShapeMismatch(f"{g!r}: input wire of dimension {self.dims[w]}, expected {d}")
                snk[w] += 1
            for w, d in zip(node.outputs, g.out_dims):
                if self.dims[w] != d:
                    raise ShapeMismatch(f"{g!r}: output wire of dimension {self.dims[w]}, expected {d}")
                src[w] += 1
        for w in range(nw):
            if src[w] != 1 or snk[w] != 1:
                raise PortMismatch(f"wire {w} has {src[w]} sources and {snk[w]} sinks")
        object.__setattr__(self, "_order", self._topological_order())

    def _topological_order(self) -> tuple[int, ...]:
        producer = {}
        for i, node in enumerate(self.nodes):
            for w in node.outputs:
                producer[w] = i
        indeg = [0] * len(self.nodes)
        succ: list[list[int]] = [[] for _ in self.nodes]
        for i, node in enumerate(self.nodes):
            for w in node.inputs:
                if w in producer:
                    indeg[i] += 1
                    succ[producer[w]].append(i)
        ready = deque(i for i, k in enumerate(indeg) if k == 0)
        order = []
        while ready:
            i = ready.popleft()
            order.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if len(order) != len(self.nodes):
            raise PortMismatch("diagram contains a directed cycle")
        return tuple(order)

    # -- basic properties --------------------------------------------------

    @property
    def in_dims(self) -> tuple[int, ...]:
        return tuple(self.dims[w] for w in self.inputs)

    @property
    def out_dims(self) -> tuple[int, ...]:
        return tuple(self.dims[w] for w in self.outputs)

    @property
    def topological_order(self) -> tuple[int, ...]:
        return self._order

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return (f"<Diagram {len(self.inputs)}->{len(self.outputs)}, "
                f"{len(self.nodes)} nodes, {len(self.dims)} wires>")

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls) -> "Diagram":
        return cls((), (), (), ())

    @classmethod
    def id(cls, *dims: int) -> "Diagram":
        return cls((), tuple(dims), tuple(range(len(dims))), tuple(range(len(dims))))

    @classmethod
    def swap(cls, d1: int, d2: int) -> "Diagram":
        return cls.permutation((d1, d2), (1, 0))

    @classmethod
    def permutation(cls, dims: Sequence[int], perm: Sequence[int]) -> "Diagram":
        """Pure wiring; output ``k`` is input ``perm[k]``."""
        if sorted(perm) != list(range(len(dims))):
            raise ValueError(f"{perm} is not a permutation")
        return cls((), tuple(dims), tuple(range(len(dims))), tuple(perm))

    @classmethod
    def from_generator(cls, gen: Generator) -> "Diagram":
        b = Builder()
        ins = [b.wire(d) for d in gen.in_dims]
        return b.build(ins, b.add(gen, *ins))

    # -- composition -------------------------------------------------------

    def then(self, *others: "Diagram") -> "Diagram":
        b = Builder()
        ins = [b.wire(d) for d in self.in_dims]
        outs = b.embed(self, ins)
        for other in others:
            outs = b.embed(other, outs)
        return b.build(ins, outs)

    def tensor(self, *others: "Diagram") -> "Diagram":
        b = Builder()
        ins, outs = [], []
        for dgm in (self,) + others:
            w = [b.wire(d) for d in dgm.in_dims]
            ins += w
            outs += b.embed(dgm, w)
        return b.build(ins, outs)

    __rshift__ = then
    __matmul__ = tensor


class Builder:
    """Wire-level construction of diagrams.

    >>> b = Builder()
    >>> x = b.wire(3)
    >>> (y,) = b.add(Generator.identity(3), x)
    >>> b.build([x], [y])
    <Diagram 1->1, 1 nodes, 2 wires>
    """

    def __init__(self):
        self.dims: list[int] = []
        self.nodes: list[Node] = []

    def wire(self, d: int) -> int:
        if d < 1:
            raise ShapeMismatch("wire dimension must be at least 1")
        self.dims.append(int(d))
        return len(self.dims) - 1

    def add(self, gen: Generator, *inputs: int) -> tuple[int, ...]:
        if len(inputs) != len(gen.in_dims):
            raise PortMismatch(f"{gen!r} takes {len(gen.in_dims)} inputs, got {len(inputs)}")
        for w, d in zip(inputs, gen.in_dims):
            if self.dims[w] != d:
                raise ShapeMismatch(f"{gen!r}: wire of dimension {self.dims[w]} where {d} expected")
        outs = tuple(self.wire(d) for d in gen.out_dims)
        self.nodes.append(Node(gen, tuple(inputs), outs))
        return outs

    def embed(self, dgm: Diagram, inputs: Iterable[int]) -> list[int]:
        inputs = list(inputs)
        if len(inputs) != len(dgm.inputs):
            raise PortMismatch(f"cannot plug {len(inputs)} wires into a diagram with "
                               f"{len(dgm.inputs)} inputs")
        m: dict[int, int] = {}
        for w_new, w_old in zip(inputs, dgm.inputs):
            if self.dims[w_new] != dgm.dims[w_old]:
                raise ShapeMismatch(f"wire of dimension {self.dims[w_new]} plugged into "
                                    f"input of dimension {dgm.dims[w_old]}")
            m[w_old] = w_new
        for w_old, d in enumerate(dgm.dims):
            if w_old not in m:
                m[w_old] = self.wire(d)
        for node in dgm.nodes:
            self.nodes.append(Node(node.gen, tuple(m[w] for w in node.inputs),
                                   tuple(m[w] for w in node.outputs)))
        return [m[w] for w in dgm.outputs]

    def build(self, inputs: Sequence[int], outputs: Sequence[int]) -> Diagram:
        return Diagram(tuple(self.nodes), tuple(self.dims), tuple(inputs), tuple(outputs))
