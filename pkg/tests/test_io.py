import json
from fractions import Fraction as F

import pytest

from _fixtures import blowup_pair
from adjointkit import io
from adjointkit.geometry import convex_hull


def test_rationals_round_trip_and_floats_are_rejected():
    assert io.rat_from("3/6") == F(1, 2) and io.rat_from(4) == 4
    assert io.rat_str(F(-1, 2)) == "-1/2"
    for bad in (0.5, True, "x", "1/0", None):
        with pytest.raises(io.InputError):
            io.rat_from(bad)


def test_polytope_and_surface_round_trip():
    P = convex_hull([(0, 0), (F(1, 2), 0), (0, 1)])
    assert io.polytope_from(io.polytope_json(P)) == P
    S = blowup_pair()
    assert io.surface_from(json.loads(io.dumps(io.surface_json(S)))) == S


def test_surface_errors():
    with pytest.raises(io.InputError):
        io.surface_from({"curves": ["A"]})
    with pytest.raises(io.InputError):
        io.surface_from({"curves": ["A"], "Q": [["1", "0"]], "K": ["0"], "effective_cone": [["1"]],
                         "mori_curves": []})


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_generators_round_trip():
    from adjointkit.monoid import GeneratorSet
    G = GeneratorSet(((1, 0), (1, 1)), ("x", "y"))
    assert io.generators_from(io.generators_json(G)) == G
