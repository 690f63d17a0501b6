import json
from fractions import Fraction

import numpy as np
import pytest

from crembed.catalog import ALGEBRAS, STRUCTURES
from crembed.errors import JacobiViolation, ParseError
from crembed.formats import (algebra_from_json, algebra_to_json, loads, structure_from_json,
                             structure_to_json)


def test_round_trip_catalog_algebras():
    for name, (data, _) in ALGEBRAS.items():
        alg = algebra_from_json(data)
        again = algebra_from_json(json.loads(json.dumps(algebra_to_json(alg))))
        np.testing.assert_array_equal(again.c, alg.c)
        assert again.exact == alg.exact


def test_round_trip_structure():
    st_ = structure_from_json(STRUCTURES["heisenberg3-cr"][0])
    again = structure_from_json(json.loads(json.dumps(structure_to_json(st_))))
    np.testing.assert_array_equal(again.h_basis, st_.h_basis)


def test_decimals_are_exact():
    data = loads('{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"2": [0.5, 0]}}]}')
    alg = algebra_from_json(data)
    assert alg.exact[(0, 1, 1)].re == Fraction(1, 2)


@pytest.mark.parametrize("text", [
    "{not json",
    '{"brackets": []}',
    '{"dim": 2, "brackets": [{"i": 2, "j": 1, "coeffs": {}}]}',
    '{"dim": 2, "brackets": [{"i": 1, "j": 3, "coeffs": {}}]}',
    '{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": [1, 0]}}]}',
    '{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {}}, {"i": 1, "j": 2, "coeffs": {}}]}',
    '{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "x"}}]}',
    '{"dim": 2, "labels": ["a"]}',
])
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        algebra_from_json(loads(text))


def test_jacobi_violation_propagates():
    data = {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": [1, 0]}},
                                   {"i": 1, "j": 3, "coeffs": {"1": [1, 0]}}]}
    with pytest.raises(JacobiViolation):
        algebra_from_json(data)


def test_structure_errors():
    alg = ALGEBRAS["heisenberg3"][0]
    with pytest.raises(ParseError):
        structure_from_json({"algebra": alg, "n": 1, "k": 1, "h_basis": []})
    with pytest.raises(ParseError):
        structure_from_json({"algebra": alg, "n": 1, "k": 2, "h_basis": [[[1, 0], [0, 1], [0, 0]]]})
