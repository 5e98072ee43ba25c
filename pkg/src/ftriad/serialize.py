"""JSON encoding shared by the CLI: complex numbers as ``[re, im]`` pairs."""

from __future__ import annotations

import json

import numpy as np

SCHEMA = 1


def complex_json(c) -> list[float]:
    c = complex(c)
    return [float(c.real), float(c.imag)]


def tensor_json(t) -> dict:
    """``{"shape": [...], "data": [re0, im0, re1, im1, ...]}`` in row-major order."""
    a = np.asarray(t, dtype=np.complex128)
    flat = a.reshape(-1)
    data = np.empty(2 * flat.size)
    data[0::2] = flat.real
    data[1::2] = flat.imag
    return {"shape": list(a.shape), "data": [float(x) for x in data]}


def tensor_from_json(obj) -> np.ndarray:
    data = np.asarray(obj["data"], dtype=float)
    if data.size % 2:
        raise ValueError("tensor data must hold interleaved real and imaginary parts")
    a = data[0::2] + 1j * data[1::2]
    return a.reshape(obj["shape"])


def dumps(payload: dict) -> str:
    """Deterministic JSON text carrying the schema version."""
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2, allow_nan=False)
