"""JSON file formats for algebras and CR structures (1-based indices on disk).

Algebra::

    {"dim": 3, "labels": ["x", "y", "z"],
     "brackets": [{"i": 1, "j": 2, "coeffs": {"3": [1, 0]}}]}

Only ``i < j`` brackets may appear.  Coefficients are ``[re, im]`` pairs of
numbers or ``"p/q"`` strings; decimal literals are read as exact rationals.

CR structure::

    {"algebra": {...}, "n": 1, "k": 1, "h_basis": [[[1, 0], [0, 1], [0, 0]]]}

``h_basis`` lists columns, each a length-s list of ``[re, im]``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cr_frame import GroupCRStructure
from .errors import CrembedError, ParseError
from .gaussian import GaussianRational
from .lie_core import LieAlgebra, StructureConstants, build_algebra


def loads(text: str):
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _coeff(value, where: str) -> GaussianRational:
    try:
        if isinstance(value, (int, Fraction, str)) and not isinstance(value, bool):
            return GaussianRational.coerce(value)
        return GaussianRational.coerce(list(value))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: bad coefficient {value!r} ({exc})") from exc


def constants_from_json(data: dict) -> tuple[StructureConstants, list | None]:
    if not isinstance(data, dict):
        raise ParseError("algebra must be a JSON object")
    try:
        dim = int(data["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("algebra needs an integer 'dim'") from exc
    if dim < 1:
        raise ParseError("'dim' must be positive")
    brackets: dict = {}
    for n, item in enumerate(data.get("brackets", [])):
        where = f"brackets[{n}]"
        try:
            i, j, coeffs = int(item["i"]), int(item["j"]), item["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{where}: needs integer 'i', 'j' and a 'coeffs' object") from exc
        if not (1 <= i < j <= dim):
            raise ParseError(f"{where}: need 1 <= i < j <= {dim}, got i={i}, j={j}")
        if (i - 1, j - 1) in brackets:
            raise ParseError(f"{where}: bracket ({i},{j}) given twice")
        if not isinstance(coeffs, dict):
            raise ParseError(f"{where}: 'coeffs' must map basis index to [re, im]")
        row = {}
        for key, value in coeffs.items():
            try:
                g = int(key)
            except ValueError as exc:
                raise ParseError(f"{where}: coefficient key {key!r} is not an index") from exc
            if not 1 <= g <= dim:
                raise ParseError(f"{where}: coefficient index {g} outside 1..{dim}")
            row[g - 1] = _coeff(value, where)
        brackets[(i - 1, j - 1)] = row
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
        raise ParseError(f"'labels' must be a list of {dim} names")
    return StructureConstants.from_brackets(dim, brackets), labels


def algebra_from_json(data: dict, name: str | None = None) -> LieAlgebra:
    """Parse and validate; JacobiViolation propagates unchanged."""
    constants, labels = constants_from_json(data)
    return build_algebra(constants, labels, name=name or data.get("name"))


def algebra_to_json(algebra: LieAlgebra) -> dict:
    s = algebra.dim
    out = []
    for i in range(s):
        for j in range(i + 1, s):
            coeffs = {}
            for g in range(s):
                if algebra.exact is not None:
                    v = algebra.exact.get((i, j, g))
                    if v is not None:
                        coeffs[str(g + 1)] = v.to_json()
                elif algebra.c[i, j, g] != 0:
                    z = complex(algebra.c[i, j, g])
                    coeffs[str(g + 1)] = [z.real, z.imag]
            if coeffs:
                out.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    data = {"dim": s, "brackets": out}
    if algebra.labels:
        data["labels"] = list(algebra.labels)
    return data


def structure_from_json(data: dict, name: str | None = None) -> GroupCRStructure:
    if not isinstance(data, dict) or "algebra" not in data:
        raise ParseError("CR structure needs an 'algebra' object")
    algebra = algebra_from_json(data["algebra"])
    try:
        n, k = int(data["n"]), int(data["k"])
        cols = data["h_basis"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("CR structure needs integer 'n', 'k' and an 'h_basis' list") from exc
    if not isinstance(cols, list) or len(cols) != n:
        raise ParseError(f"'h_basis' must list n={n} columns")
    h = np.zeros((algebra.dim, n), dtype=complex)
    for c, col in enumerate(cols):
        if not isinstance(col, list) or len(col) != algebra.dim:
            raise ParseError(f"h_basis column {c + 1} must have {algebra.dim} entries")
        for r, v in enumerate(col):
            h[r, c] = complex(_coeff(v, f"h_basis[{c}][{r}]"))
    try:
        return GroupCRStructure(algebra, h, n, k, name or data.get("name"))
    except CrembedError as exc:
        raise ParseError(str(exc)) from exc


def structure_to_json(structure: GroupCRStructure) -> dict:
    return {"algebra": algebra_to_json(structure.algebra), "n": structure.n, "k": structure.k,
            "h_basis": [[[float(z.real), float(z.imag)] for z in col] for col in structure.h_basis.T]}
