import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _fixtures import blowup_pair, chain, curve_surface, minus_one_curve, region_cases, toric, F1_RAYS
from adjointkit.geometry import convex_hull
from adjointkit.linalg import add, is_negative_definite
from adjointkit.surface import (AffineDivisorMap, NumericalSurface, apply, contract, discrepancy, intersect,
                                is_nef, is_pseff, is_weak_lc_model, pseff_region, pullback, run_mmp,
                                wlc_decomposition, zariski)


def zariski_ok(D, S, Z):
    idx = [S.index(c) if isinstance(c, str) else c for c in Z.support]
    gram = [[S.Q[i][j] for j in idx] for i in idx]
    return (add(Z.P, Z.N) == tuple(F(x) for x in D) and all(c >= 0 for c in Z.N) and is_nef(Z.P, S)
            and all(intersect(Z.P, S.basis(i), S) == 0 for i in idx)
            and (not idx or is_negative_definite(gram)))


def test_surface_validation():
    with pytest.raises(ValueError):
        NumericalSurface(["A", "B"], [[0, 1], [2, 0]], [0, 0], [(1, 0), (0, 1)], [])
    with pytest.raises(ValueError):
        NumericalSurface(["A"], [[-1]], [0], [], [])


def test_intersection_and_nef():
    S = minus_one_curve()
    assert intersect((0,), (1,), S) == 0
    assert not is_nef((1,), S) and is_nef((0,), S)
    T = curve_surface([[1]], [0])
    assert is_nef((1,), T)


def test_pseff():
    S = curve_surface([[-1, 0], [0, -1]], [0, 0])
    assert is_pseff((1, 2), S) and is_pseff((0, 0), S)
    assert not is_pseff((-1, 0), S)


def test_zariski_examples():
    S = minus_one_curve()
    Z = zariski((1,), S)
    assert Z.P == (0,) and Z.N == (1,)
    S = chain([-2, -2])
    Z = zariski((1, 0), S)
    assert Z.P == (0, 0) and Z.N == (1, 0)
    assert intersect(Z.P, S.basis(1), S) == 0
    T = curve_surface([[1]], [0])
    assert zariski((2,), T).N == (0,)


def test_zariski_rejects_non_pseff():
    with pytest.raises(ValueError):
        zariski((-1,), minus_one_curve())


def test_zariski_mixed_support():
    S = blowup_pair()
    # D = 2E + C: D.E = -1, so E enters the support with coefficient 1
    Z = zariski((2, 1), S)
    assert Z.N == (1, 0) and Z.P == (1, 1)
    assert zariski_ok((2, 1), S, Z)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=3, max_size=3), st.permutations([0, 1, 2]))
def test_zariski_invariants_and_order_independence(coeffs, order):
    S = chain([-2, -3, -2])
    D = tuple(F(c, 2) for c in coeffs)
    Z = zariski(D, S)
    assert zariski_ok(D, S, Z)
    assert zariski(D, S, order=order) == Z


def test_contract_example():
    S = blowup_pair()
    S2, Fm = contract(S, 0)
    assert S2.curves == ("C",) and S2.Q == ((1,),)
    assert apply(Fm, (3, 5)) == (5,)


def test_contract_isolated_curve_removes_block():
    S = curve_surface([[-1, 0], [0, -2]], [0, 0])
    S2, _ = contract(S, 0)
    assert S2.Q == ((-2,),)


def test_contract_projection_formula():
    S = chain([-1, -2, -1])
    S2, Fm = contract(S, 0)
    # pushed-forward intersection equals the pullback pairing on the surface
    for a, b in itertools.product(range(2), repeat=2):
        Da = tuple(int(i == a) for i in range(2))
        Db = tuple(int(i == b) for i in range(2))
        up = lambda D: (-sum(S.Q[0][j + 1] * D[j] for j in range(2)) / S.Q[0][0],) + tuple(D)
        assert intersect(Da, Db, S2) == intersect(up(Da), up(Db), S)
    assert apply(Fm, (7, 1, 2)) == (1, 2)


def test_mmp_examples():
    S = minus_one_curve()
    T = run_mmp(S, (0,))
    assert T.contracted == ("E",) and T.outcome == "minimal-model"
    S = curve_surface([[1]], [1])
    T = run_mmp(S, (0,))
    assert T.steps == () and T.outcome == "minimal-model"


def test_mmp_steps_are_negative_and_terminate():
    S, _ = toric(F1_RAYS)
    for B in [(0, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1)]:
        T = run_mmp(S, B)
        assert len(T.steps) <= S.r
        cur, D = S, add(S.K, B)
        for step in T.steps:
            i = cur.index(step.curve)
            assert cur.Q[i][i] < 0 and intersect(D, cur.basis(i), cur) < 0
            cur, Fm = contract(cur, i)
            D = apply(Fm, D)


def test_pullback_and_weak_lc_model():
    S = minus_one_curve()
    T = run_mmp(S, (0,))
    assert pullback(S, T, ()) == (0,)
    D = add(S.K, (0,))
    assert discrepancy(S, T, D) == (1,)
    assert is_weak_lc_model(S, T, D)


def test_pseff_region_example():
    S = curve_surface([[-1, 0], [0, -1]], [-1, -1])
    f = AffineDivisorMap((0, 0), [(2, 2)])
    E = pseff_region(S, convex_hull([(0,), (1,)]), f)
    assert E.vertices == ((F(1, 2),), (1,))


def test_pseff_region_trivial_cases():
    S = curve_surface([[-1, 0], [0, -1]], [0, 0])
    C = convex_hull([(0,), (1,)])
    assert pseff_region(S, C, AffineDivisorMap((0, 0), [(1, 1)])) == C
    T = curve_surface([[-1, 0], [0, -1]], [-2, -2])
    assert pseff_region(T, C, AffineDivisorMap((0, 0), [(1, 1)])).is_empty


def test_wall_example():
    S = blowup_pair()
    # K + f(t) = t E + C meets E in 1 - t: nef up to the wall t = 1, then E is contracted
    f = AffineDivisorMap((1, 2), [(1, 0)])
    C = convex_hull([(0,), (4,)])
    regions = wlc_decomposition(S, C, f)
    keys = {W.key: W.region.vertices for W in regions}
    assert len(regions) == 2
    assert keys[("E", "minimal-model")] == ((1,), (4,))
    assert keys[("minimal-model",)] == ((0,), (1,))


def test_single_region_cases():
    S = curve_surface([[1, 0], [0, 1]], [0, 0])
    C = convex_hull([(0,), (1,)])
    (W,) = wlc_decomposition(S, C, AffineDivisorMap((0, 0), [(1, 1)]))
    assert W.model.steps == () and W.region == C
    T = minus_one_curve()
    (W,) = wlc_decomposition(T, C, AffineDivisorMap((0,), [(0,)]))
    assert W.region == C


@pytest.mark.parametrize("case", region_cases(), ids=lambda c: c[0])
def test_regions_pass_vertex_checks_and_tile(case):
    from adjointkit.geometry import uncovered_point
    _, S, Cv, f = case
    C = convex_hull(Cv)
    E = pseff_region(S, C, f)
    regions = wlc_decomposition(S, C, f)
    for W in regions:
        for v in W.region.vertices:
            D = add(S.K, f(v))
            assert is_pseff(D, S) and is_weak_lc_model(S, W.model, D)
        b = W.region.barycenter()
        assert run_mmp(S, f(b)).contracted == W.model.contracted
    assert uncovered_point(E, [W.region for W in regions]) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_region_models_agree_at_random_points(seed):
    rng = random.Random(seed)
    name, S, Cv, f = region_cases()[rng.randrange(6)]
    C = convex_hull(Cv)
    regions = wlc_decomposition(S, C, f)
    w = [F(rng.randint(0, 5)) for _ in C.vertices]
    if not any(w):
        w[0] = F(1)
    t = tuple(sum(c * v[i] for c, v in zip(w, C.vertices)) / sum(w) for i in range(C.ambient))
    D = add(S.K, f(t))
    hits = [W for W in regions if W.region.contains(t)]
    assert bool(hits) == is_pseff(D, S)
    for W in hits:
        assert is_weak_lc_model(S, W.model, D)
