"""Loop counting and spider normal forms for F-graphs.

An F-graph is a diagram made only of one algebra's generators plus
identities and swaps. Connected F-graphs with the same number of inputs,
outputs and loops evaluate to the same tensor, so each connected component
can be replaced by a canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ForeignNode
from .core import (ALGEBRA_KINDS, COMUL, COUNIT, IDENTITY, MUL, SWAP, UNIT,
                   Builder, Diagram, Generator)


@dataclass(frozen=True)
class Component:
    """One connected piece: boundary positions it touches and its loop count."""

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    loops: int
    nodes: int

    @property
    def signature(self) -> tuple[int, int, int]:
        return (len(self.inputs), len(self.outputs), self.loops)


@dataclass(frozen=True)
class SpiderSignature:
    m: int
    n: int
    loops: int
    components: tuple[Component, ...] = field(default=())

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.loops)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _components(d: Diagram) -> list[Component]:
    nw = len(d.dims)
    # Fuse wires through identity and swap nodes.
    wires = _UnionFind(nw)
    real = []
    for node in d.nodes:
        if node.gen.kind == IDENTITY:
            wires.union(node.inputs[0], node.outputs[0])
        elif node.gen.kind == SWAP:
            wires.union(node.inputs[0], node.outputs[1])
            wires.union(node.inputs[1], node.outputs[0])
        else:
            real.append(node)

    # Entities: fused wire classes (ids 0..nw-1) and real nodes (nw + k).
    ent = _UnionFind(nw + len(real))
    for k, node in enumerate(real):
        for w in node.inputs + node.outputs:
            ent.union(nw + k, wires.find(w))

    classes = {wires.find(w) for w in range(nw)}
    ends: dict[int, int] = {c: 0 for c in classes}
    for node in real:
        for w in node.inputs + node.outputs:
            ends[wires.find(w)] += 1

    groups: dict[int, dict] = {}

    def group(root):
        return groups.setdefault(root, {"in": [], "out": [], "V": 0, "E": 0})

    for c in classes:
        g = group(ent.find(c))
        if ends[c] == 2:
            g["E"] += 1
    for k in range(len(real)):
        group(ent.find(nw + k))["V"] += 1
    for pos, w in enumerate(d.inputs):
        group(ent.find(wires.find(w)))["in"].append(pos)
    for pos, w in enumerate(d.outputs):
        group(ent.find(wires.find(w)))["out"].append(pos)

    comps = []
    for g in groups.values():
        loops = g["E"] - g["V"] + 1 if g["V"] else 0
        comps.append(Component(tuple(g["in"]), tuple(g["out"]), loops, g["V"]))

    def key(c):
        first = min(list(c.inputs) + [len(d.inputs) + o for o in c.outputs], default=None)
        return (first is None, first if first is not None else 0)

    # Stable order: by first boundary position; closed components last.
    comps.sort(key=key)
    return comps


def spider_signature(d: Diagram) -> SpiderSignature:
    """Inputs, outputs and loops of ``d``, in total and per connected component.

    Identity and swap nodes are treated as plain wiring. A bare wire is a
    component with no nodes and no loops.
    """
    comps = _components(d)
    return SpiderSignature(len(d.inputs), len(d.outputs),
                           sum(c.loops for c in comps), tuple(comps))


def spider_normal_form(m: int, n: int, loops: int, algebra) -> Diagram:
    """Left-combed multiplication tree, ``loops`` bubbles, left-combed comultiplication tree."""
    if min(m, n, loops) < 0:
        raise ValueError("m, n and loops must be non-negative")
    b = Builder()
    ins = [b.wire(algebra.d) for _ in range(m)]
    if m == 0:
        (x,) = b.add(Generator.unit(algebra))
    else:
        x = ins[0]
        for w in ins[1:]:
            (x,) = b.add(Generator.mul(algebra), x, w)
    for _ in range(loops):
        l, r = b.add(Generator.comul(algebra), x)
        (x,) = b.add(Generator.mul(algebra), l, r)
    if n == 0:
        b.add(Generator.counit(algebra), x)
        return b.build(ins, [])
    rights: list[int] = []
    for _ in range(n - 1):
        x, r = b.add(Generator.comul(algebra), x)
        rights.insert(0, r)
    return b.build(ins, [x] + rights)


def _same_algebra(a, b) -> bool:
    return a is b or (a.name == b.name and a.d == b.d
                      and np.array_equal(a.mu, b.mu) and np.array_equal(a.delta, b.delta)
                      and np.array_equal(a.eta, b.eta) and np.array_equal(a.epsilon, b.epsilon))


def normalize_fgraph(d: Diagram, algebra) -> Diagram:
    """Replace every connected component of ``d`` by its spider normal form."""
    for node in d.nodes:
        g = node.gen
        if g.kind in (IDENTITY, SWAP):
            continue
        if g.kind not in ALGEBRA_KINDS:
            raise ForeignNode(f"{g!r} is not a generator of {algebra.name}")
        if not _same_algebra(g.algebra, algebra):
            raise ForeignNode(f"{g!r} belongs to another algebra than {algebra.name}")
    b = Builder()
    ins = [b.wire(dim) for dim in d.in_dims]
    outs: list[int | None] = [None] * len(d.outputs)
    for comp in _components(d):
        if comp.nodes == 0:
            # A bare wire: connect straight through.
            (i,), (o,) = comp.inputs, comp.outputs
            outs[o] = ins[i]
            continue
        nf = spider_normal_form(len(comp.inputs), len(comp.outputs), comp.loops, algebra)
        produced = b.embed(nf, [ins[i] for i in comp.inputs])
        for pos, w in zip(comp.outputs, produced):
            outs[pos] = w
    return b.build(ins, outs)


def random_fgraph(algebra, rng: np.random.Generator, max_nodes: int = 8,
                  max_tries: int = 1000) -> Diagram:
    """A random connected F-graph with between 1 and ``max_nodes`` nodes,
    at least one of them an algebra generator.

    Inputs are consumed in random order, so crossings arise naturally; an
    occasional explicit swap or identity node is inserted as well and counts
    toward ``max_nodes``.
    """
    for _ in range(max_tries):
        b = Builder()
        ins = [b.wire(algebra.d) for _ in range(int(rng.integers(0, 4)))]
        open_ = list(ins)
        target = int(rng.integers(1, max_nodes + 1))
        placed = 0
        while placed < target:
            choices = [UNIT]
            if len(open_) >= 1:
                choices += [COMUL, COUNIT, MUL if len(open_) >= 2 else COMUL]
            if len(open_) >= 2:
                choices += [MUL, MUL, SWAP]
            if len(open_) >= 1:
                choices.append(IDENTITY)
            kind = choices[int(rng.integers(len(choices)))]
            arity = {UNIT: 0, COUNIT: 1, COMUL: 1, MUL: 2, IDENTITY: 1, SWAP: 2}[kind]
            picked = [open_.pop(int(rng.integers(len(open_)))) for _ in range(arity)]
            gen = {UNIT: Generator.unit, COUNIT: Generator.counit, COMUL: Generator.comul,
                   MUL: Generator.mul}.get(kind)
            if gen is not None:
                gen = gen(algebra)
            elif kind == IDENTITY:
                gen = Generator.identity(algebra.d)
            else:
                gen = Generator.swap(algebra.d, algebra.d)
            open_ += list(b.add(gen, *picked))
            placed += 1
        rng.shuffle(open_)
        d = b.build(ins, open_)
        if len(_components(d)) == 1 and any(n.gen.kind in ALGEBRA_KINDS for n in d.nodes):
            return d
    raise RuntimeError("could not sample a connected F-graph")
