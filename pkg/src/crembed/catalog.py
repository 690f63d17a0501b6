"""Built-in fixtures: abelian, nilpotent, solvable and semisimple algebras plus two CR structures."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .cr_frame import GroupCRStructure, validate_cr_structure
from .formats import algebra_from_json, structure_from_json
from .lie_core import LieAlgebra


def _alg(dim, brackets, labels=None):
    data = {"dim": dim, "brackets": [{"i": i, "j": j, "coeffs": {str(g): [v, 0] for g, v in c.items()}}
                                     for (i, j), c in brackets.items()]}
    if labels:
        data["labels"] = labels
    return data


ALGEBRAS = {
    "abelian3": (_alg(3, {}), "R^3 with zero bracket"),
    "abelian4": (_alg(4, {}), "R^4 with zero bracket"),
    "heisenberg3": (_alg(3, {(1, 2): {3: 1}}, ["x", "y", "z"]), "[x, y] = z; nilpotent, step 2"),
    "n4": (_alg(4, {(1, 2): {3: 1}, (1, 3): {4: 1}}),
           "filiform: [e1, e2] = e3, [e1, e3] = e4; step 3"),
    "n5": (_alg(5, {(1, 2): {3: 1}, (1, 3): {4: 1}, (1, 4): {5: 1}}),
           "filiform: [e1, ei] = e(i+1) for i = 2..4; step 4"),
    "axb": (_alg(2, {(1, 2): {2: 1}}, ["a", "b"]), "affine line group: [a, b] = b; solvable, not nilpotent"),
    "sl2": (_alg(3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}, ["h", "e", "f"]),
            "[h, e] = 2e, [h, f] = -2f, [e, f] = h; simple"),
    "su2": (_alg(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}}),
            "[e1, e2] = e3 and cyclic; compact simple"),
}

STRUCTURES = {
    "heisenberg3-cr": ({"algebra": ALGEBRAS["heisenberg3"][0], "n": 1, "k": 1,
                        "h_basis": [[[1, 0], [0, 1], [0, 0]]]},
                       "h = span{x + i y}; type (1,1), the standard CR structure on H^3"),
    "abelian4-cr": ({"algebra": ALGEBRAS["abelian4"][0], "n": 1, "k": 2,
                     "h_basis": [[[1, 0], [0, 1], [0, 0], [0, 0]]]},
                    "h = span{e1 + i e2}; type (1,2)"),
}


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    structure: GroupCRStructure | None = None
    notes: str = ""


@functools.lru_cache(maxsize=None)
def load_catalog() -> dict[str, CatalogEntry]:
    """Every entry is parsed, Jacobi-checked and (for structures) validated here."""
    out = {}
    for name, (data, notes) in ALGEBRAS.items():
        out[name] = CatalogEntry(name, algebra_from_json(data, name), None, notes)
    for name, (data, notes) in STRUCTURES.items():
        st = structure_from_json(data, name)
        validate_cr_structure(st)
        out[name] = CatalogEntry(name, st.algebra, st, notes)
    return out


def get(name: str) -> CatalogEntry:
    cat = load_catalog()
    if name not in cat:
        raise KeyError(f"no catalog entry {name!r}; known: {', '.join(cat)}")
    return cat[name]


def nilpotent_names() -> list[str]:
    return ["abelian3", "abelian4", "heisenberg3", "n4", "n5"]
