"""Rendering diagrams as DSL text and Graphviz dot."""

from __future__ import annotations

import numpy as np

from ..ket import format_ket
from .core import (ALGEBRA_KINDS, BOX, EFFECT, IDENTITY, STATE, SWAP, Diagram)


def _gen_text(gen, box_names) -> str:
    if gen.kind in ALGEBRA_KINDS:
        return f"{gen.kind}[{gen.algebra.name}]"
    if gen.kind == IDENTITY:
        return f"id({gen.dims[0]})"
    if gen.kind == SWAP:
        return f"swap({gen.dims[0]},{gen.dims[1]})"
    if gen.kind in (STATE, EFFECT):
        v = np.asarray(gen.tensor)
        body = format_ket(v) if np.any(v) else "0.0|0>"
        return f"{gen.kind}({body})"
    return f"box({box_names[id(gen)]})"


def _layer(parts: list[str]) -> str:
    return " * ".join(parts)


def _permute(current: list[int], target: list[int], dims) -> tuple[list[str], list[int]]:
    """Adjacent-swap layers turning ``current`` into ``target`` (bubble sort)."""
    cur = list(current)
    pos = {w: i for i, w in enumerate(target)}
    layers = []
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if pos[cur[i]] > pos[cur[i + 1]]:
                parts = [f"id({dims[w]})" for w in cur[:i]]
                parts.append(f"swap({dims[cur[i]]},{dims[cur[i + 1]]})")
                parts += [f"id({dims[w]})" for w in cur[i + 2:]]
                layers.append(_layer(parts))
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                changed = True
    return layers, cur


def to_dsl(d: Diagram) -> tuple[str, dict[str, np.ndarray]]:
    """Serialize ``d`` as DSL text plus the box matrices it refers to.

    The text re-parses (with the same algebra registry and the returned
    boxes) to a diagram with the same evaluation. Identity and swap nodes
    are kept as explicit layers.
    """
    boxes: dict[str, np.ndarray] = {}
    box_names: dict[int, str] = {}
    for node in d.nodes:
        g = node.gen
        if g.kind == BOX and id(g) not in box_names:
            base = g.label if g.label and g.label.isidentifier() else "B"
            name, k = base, 1
            while name in boxes and not np.array_equal(boxes[name], g.tensor):
                name, k = f"{base}_{k}", k + 1
            boxes[name] = np.asarray(g.tensor)
            box_names[id(g)] = name

    dims = d.dims
    layers: list[str] = []
    current = list(d.inputs)
    for i in d.topological_order:
        node = d.nodes[i]
        k = len(node.inputs)
        want = list(node.inputs) + [w for w in current if w not in node.inputs]
        sw, current = _permute(current, want, dims)
        layers += sw
        rest = current[k:]
        layers.append(_layer([_gen_text(node.gen, box_names)] + [f"id({dims[w]})" for w in rest]))
        current = list(node.outputs) + rest
    sw, current = _permute(current, list(d.outputs), dims)
    layers += sw
    if not layers and current:
        layers.append(_layer([f"id({dims[w]})" for w in current]))
    return " ;\n".join(layers), boxes


def to_dot(d: Diagram, name: str = "diagram") -> str:
    """Graphviz source; nodes are ranked top to bottom by depth."""
    depth: dict[int, int] = {}
    producer = {}
    for i, node in enumerate(d.nodes):
        for w in node.outputs:
            producer[w] = i
    for i in d.topological_order:
        node = d.nodes[i]
        depth[i] = 1 + max((depth[producer[w]] for w in node.inputs if w in producer), default=0)
    last = 1 + max(depth.values(), default=0)

    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [fontname=Helvetica];"]
    for k, _ in enumerate(d.inputs):
        lines.append(f'  in{k} [shape=point, xlabel="in{k}"];')
    for k, _ in enumerate(d.outputs):
        lines.append(f'  out{k} [shape=point, xlabel="out{k}"];')
    for i, node in enumerate(d.nodes):
        label = repr(node.gen).replace('"', "'")
        shape = {STATE: "invtriangle", EFFECT: "triangle", BOX: "box"}.get(node.gen.kind, "ellipse")
        lines.append(f'  n{i} [label="{label}", shape={shape}];')

    ranks: dict[int, list[str]] = {0: [f"in{k}" for k in range(len(d.inputs))],
                                   last: [f"out{k}" for k in range(len(d.outputs))]}
    for i, r in depth.items():
        ranks.setdefault(r, []).append(f"n{i}")
    for r in sorted(ranks):
        if ranks[r]:
            lines.append("  { rank=same; " + " ".join(ranks[r]) + "; }")

    source = {w: f"in{k}" for k, w in enumerate(d.inputs)}
    sink = {w: f"out{k}" for k, w in enumerate(d.outputs)}
    for i, node in enumerate(d.nodes):
        for w in node.outputs:
            source[w] = f"n{i}"
        for w in node.inputs:
            sink[w] = f"n{i}"
    for w, dim in enumerate(d.dims):
        lines.append(f'  {source[w]} -> {sink[w]} [label="{dim}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
