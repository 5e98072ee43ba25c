"""Named representative states: the tripartite qutrit classes plus a few reference states.

Parameterized families take single-qutrit vectors; ``pi`` takes four
(``phi``, ``varphi``, ``chi``, ``psi``), the ``phi_2``/``varphi_2``/``phi_3``
families take two (``phi``, ``varphi``) that fill the ``|2 phi varphi>``
term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownName
from .ket import PureState, parse_ket
from .tensor_core import as_tensor, basis

__all__ = ["CatalogEntry", "ENTRIES", "ALIASES", "names", "entry", "catalog"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    ket: str
    params: tuple[str, ...] = ()
    # Each extra term is (leading basis digit, parameter slot names).
    extra: tuple[tuple[int, tuple[str, ...]], ...] = ()
    dim: int = 3
    group: str = "table"

    @property
    def display(self) -> str:
        text = self.ket
        for lead, slots in self.extra:
            text += f"+|{lead} {' '.join(slots)}>"
        return text

    def instantiate(self, *params) -> PureState:
        if len(params) != len(self.params):
            raise ValueError(f"{self.name} takes {len(self.params)} parameter vector(s) "
                             f"{self.params}, got {len(params)}")
        vals = {}
        for slot, v in zip(self.params, params):
            v = as_tensor(v)
            if v.shape != (self.dim,) or not np.any(v):
                raise ValueError(f"parameter {slot} must be a nonzero vector of length {self.dim}")
            vals[slot] = v
        a = np.array(parse_ket(self.ket, self.dim).amplitudes)
        for lead, slots in self.extra:
            term = basis(lead, self.dim)
            for s in slots:
                term = np.multiply.outer(term, vals[s])
            a = a + term
        return PureState(a)


def _table(rows, **kw):
    return [CatalogEntry(name, ket, **kw) for name, ket in rows]


_NON_MAXIMAL = [
    ("psi_0", "|000>"),
    ("psi_1", "|000>+|011>"),
    ("psi_2", "|000>+|011>+|022>"),
    ("psi_3", "|000>+|101>"),
    ("psi_4", "|000>+|110>"),
    ("psi_5", "|000>+|111>"),
    ("psi_6", "|000>+|011>+|101>"),
    ("psi_7", "|000>+|011>+|112>"),
    ("psi_8", "|000>+|011>+|120>"),
    ("psi_9", "|000>+|101>+|202>"),
    ("psi_10", "|000>+|111>+|202>"),
    ("psi_11", "|000>+|111>+|201>"),
    ("psi_12", "|000>+|011>+|101>+|112>"),
    ("psi_13", "|000>+|011>+|112>+|120>"),
    ("psi_14", "|000>+|011>+|120>+|101>"),
    ("psi_15", "|000>+|011>+|120>+|102>"),
    ("psi_16", "|000>+|011>+|022>+|101>"),
    ("psi_17", "|000>+|011>+|022>+|101>+|112>"),
    ("psi_18", "|000>+|011>+|022>+|112>+|120>"),
    ("psi_19", "|000>+|011>+|022>+|120>+|101>"),
    ("psi_20", "|000>+|011>+|122>"),
    ("psi_21", "|000>+|110>+|220>"),
    ("psi_22", "|000>+|111>+|220>"),
    ("psi_23", "|000>+|011>+|101>+|112>+|210>+|202>"),
    ("psi_24", "|000>+|011>+|120>+|101>+|221>+|210>"),
]

_OTHERS = [
    ("G", "|000>+|111>+|222>"),
    ("phi_0", "|000>+|011>+|022>+|101>+|202>"),
    ("phi_1", "|000>+|011>+|022>+|110>+|220>"),
    ("varphi_1", "|000>+|011>+|022>+|101>+|212>"),
    ("phi_4", "|000>+|011>+|101>+|112>+|202>+|221>"),
    ("phi_5", "|000>+|011>+|101>+|112>+|221>+|210>"),
    ("s_0", "|000>+|011>+|112>+|120>+|202>+|221>"),
    ("phi_6", "|000>+|011>+|112>+|120>+|221>+|210>"),
    ("phi_7", "|000>+|011>+|022>+|101>+|112>+|202>+|221>"),
    ("phi_8", "|000>+|011>+|022>+|101>+|112>+|210>+|202>"),
    ("s_1", "|000>+|011>+|022>+|101>+|112>+|221>+|210>"),
    ("w_0", "|000>+|011>+|022>+|101>+|112>+|202>"),
    ("varphi_3", "|000>+|011>+|022>+|101>+|112>+|220>"),
    ("phi_9", "|000>+|011>+|022>+|101>+|112>+|221>"),
]

_FAMILIES = [
    CatalogEntry("pi", "|000>+|011>", ("phi", "varphi", "chi", "psi"),
                 ((1, ("phi", "varphi")), (2, ("chi", "psi")))),
    CatalogEntry("phi_2", "|000>+|011>+|101>+|112>", ("phi", "varphi"), ((2, ("phi", "varphi")),)),
    CatalogEntry("varphi_2", "|000>+|011>+|112>+|120>", ("phi", "varphi"), ((2, ("phi", "varphi")),)),
    CatalogEntry("phi_3", "|000>+|011>+|120>+|101>", ("phi", "varphi"), ((2, ("phi", "varphi")),)),
]

_SYMMETRIC = [
    ("W", "|002>+|011>+|020>+|101>+|110>+|200>"),
    ("I", "|001>+|010>+|100>+|222>"),
    ("s_2", "|000>+|012>+|021>+|102>+|120>+|201>+|210>"),
    ("s_3", "|012>+|021>+|102>+|120>+|201>+|210>"),
]

_QUBIT = [
    ("GHZ2", "|000>+|111>"),
    ("W2", "|001>+|010>+|100>"),
]

ENTRIES: dict[str, CatalogEntry] = {
    e.name: e
    for e in (_table(_NON_MAXIMAL) + _table(_OTHERS) + _FAMILIES
              + _table(_SYMMETRIC, group="symmetric") + _table(_QUBIT, dim=2, group="qubit"))
}

ALIASES = {"s2": "s_2", "s3": "s_3", "s0": "s_0", "s1": "s_1", "w0": "w_0",
           "GHZ": "GHZ2", "W_2": "W2"}


def names() -> list[str]:
    return list(ENTRIES)


def entry(name: str) -> CatalogEntry:
    key = ALIASES.get(name, name)
    if key not in ENTRIES:
        raise UnknownName(f"unknown catalog state {name!r}")
    return ENTRIES[key]


def catalog(name: str, *params) -> PureState:
    """The named state; parameterized families need their vectors."""
    return entry(name).instantiate(*params)
