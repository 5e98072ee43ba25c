"""Brute-force tensor semantics of diagrams."""

from __future__ import annotations

import heapq
from math import prod

import numpy as np

from .core import Diagram


def _pair_cost(la, lb, dims):
    shared = set(la) & set(lb)
    out = prod(dims[w] for w in la if w not in shared) * prod(dims[w] for w in lb if w not in shared)
    return out - prod(dims[w] for w in la) - prod(dims[w] for w in lb)


def evaluate(d: Diagram) -> np.ndarray:
    """Contract every node tensor along the wires of ``d``.

    The result has one index per boundary input followed by one per boundary
    output. Pairs are contracted greedily, cheapest intermediate first.
    """
    dims = list(d.dims)
    tensors: dict[int, tuple[np.ndarray, list[int]]] = {}
    for i, node in enumerate(d.nodes):
        tensors[i] = (node.gen.io_tensor(), list(node.inputs) + list(node.outputs))

    in_labels = list(d.inputs)
    out_labels = list(d.outputs)
    # A wire running straight from the input boundary to the output boundary
    # needs a second label for its output end.
    passthrough = set(d.inputs) & set(d.outputs)
    nid = len(d.nodes)
    for w in passthrough:
        fresh = len(dims)
        dims.append(dims[w])
        tensors[nid] = (np.eye(dims[w], dtype=np.complex128), [w, fresh])
        out_labels[out_labels.index(w)] = fresh
        nid += 1

    holders: dict[int, list[int]] = {}
    for t, (_, labels) in tensors.items():
        for w in labels:
            holders.setdefault(w, []).append(t)

    heap = []

    def push_neighbours(t):
        la = tensors[t][1]
        seen = set()
        for w in la:
            for u in holders.get(w, ()):
                if u != t and u not in seen:
                    seen.add(u)
                    cost = _pair_cost(la, tensors[u][1], dims)
                    heapq.heappush(heap, (cost, min(t, u), max(t, u)))

    for t in list(tensors):
        push_neighbours(t)

    while heap:
        _, a, b = heapq.heappop(heap)
        if a not in tensors or b not in tensors:
            continue
        ta, la = tensors.pop(a)
        tb, lb = tensors.pop(b)
        shared = [w for w in la if w in lb]
        ax_a = [la.index(w) for w in shared]
        ax_b = [lb.index(w) for w in shared]
        tc = np.tensordot(ta, tb, axes=(ax_a, ax_b))
        lc = [w for w in la if w not in shared] + [w for w in lb if w not in shared]
        for w in shared:
            del holders[w]
        for w in lc:
            h = holders[w]
            h[:] = [nid if x in (a, b) else x for x in h]
        tensors[nid] = (tc, lc)
        push_neighbours(nid)
        nid += 1

    result = np.ones((), dtype=np.complex128)
    labels: list[int] = []
    for t in sorted(tensors):
        arr, lab = tensors[t]
        result = np.multiply.outer(result, arr)
        labels += lab
    want = in_labels + out_labels
    if sorted(want) != sorted(labels):
        raise AssertionError("dangling wires after contraction")
    return np.transpose(result, [labels.index(w) for w in want]) if want else result


def as_matrix(d: Diagram) -> np.ndarray:
    """Evaluate a 1-input, 1-output diagram as an ``(out, in)`` matrix."""
    if len(d.inputs) != 1 or len(d.outputs) != 1:
        raise ValueError(f"as_matrix needs a 1->1 diagram, got {len(d.inputs)}->{len(d.outputs)}")
    return evaluate(d).T


def as_state(d: Diagram) -> np.ndarray:
    """Evaluate a diagram without inputs as an amplitude tensor."""
    if d.inputs:
        raise ValueError("as_state needs a diagram without inputs")
    return evaluate(d)
