import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _fixtures import DP6_RAYS, F1_RAYS, F2_RAYS, P1xP1_RAYS
from adjointkit.geometry import lattice_points
from adjointkit.toric import AdjointMonoid, ToricModel, toric_surface


def test_incomplete_fan_is_rejected():
    with pytest.raises(ValueError):
        ToricModel(((1, 0), (0, 1)), ("a", "b"))


@pytest.mark.parametrize("rays,selfs", [
    (F1_RAYS, [0, -1, 0, 1]),
    (F2_RAYS, [0, -2, 0, 2]),
    (P1xP1_RAYS, [0, 0, 0, 0]),
    (DP6_RAYS, [-1] * 6),
])
def test_self_intersections(rays, selfs):
    S, _ = toric_surface(rays, [0] * len(rays))
    assert [S.Q[i][i] for i in range(S.r)] == selfs


def test_principal_divisors_are_numerically_trivial():
    for rays in (F1_RAYS, F2_RAYS, DP6_RAYS):
        S, T = toric_surface(rays, [0] * len(rays))
        for u in ((1, 0), (0, 1)):
            p = T.principal(u)
            assert all(sum(p[i] * S.Q[i][j] for i in range(S.r)) == 0 for j in range(S.r))


def test_curve_model_has_no_nef_conditions():
    S, T = toric_surface([(1,), (-1,)], (0, 1))
    assert S.Q == ((0, 0), (0, 0)) and S.mori_curves == ()
    assert T.sections((0, 2)) == [(0,), (1,), (2,)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=4, max_denominator=3), min_size=4, max_size=4))
def test_sections_match_polygon_lattice_points(D):
    _, T = toric_surface(F1_RAYS, [0] * 4)
    assert sorted(T.sections(D)) == lattice_points(T.polygon(D))


def test_adjoint_monoid_slices():
    _, T = toric_surface([(1,), (-1,)], (0, 0))
    R = AdjointMonoid.adjoint(T, (0, 0), [(0, 1), (1, 0)])
    assert R.slice((1, 0)) == {(0,), (1,)}
    assert R.slice((1, 1)) == {(-1,), (0,), (1,)}
    assert R.contains((2, 0, 2)) and not R.contains((2, 0, 3))
    elems = R.elements_up_to(2)
    assert all(R.contains(x) for x in elems)
    assert len([x for x in elems if x[:2] == (0, 2)]) == 3


def test_adjoint_monoid_is_closed_under_addition():
    S, T = toric_surface(F1_RAYS, (0, 0, 0, 1))
    R = AdjointMonoid.adjoint(T, S.K, [(0, 1, 0, 0), (1, 0, 0, 0)])
    elems = sorted(R.elements_up_to(2))
    for x, y in itertools.product(elems, repeat=2):
        z = tuple(a + b for a, b in zip(x, y))
        assert R.contains(z)
