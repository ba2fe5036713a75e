"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` to see the lines
inline; without ``-s`` they are still written to the terminal directly.
"""
import itertools
import random
import time
from fractions import Fraction as F

import pytest

from _fixtures import chain, curve_surface, minus_one_curve, region_cases
from adjointkit import corpus, lp
from adjointkit.cover import common_point, cover_respecting, verify_cover
from adjointkit.geometry import convex_hull
from adjointkit.linalg import add, is_negative_definite
from adjointkit.monoid import (GradedMonoid, augment, fg_equivalence_check, is_generated_up_to, lift_generators,
                               minimal_elements)
from adjointkit.pipeline import run_pipeline
from adjointkit.randgen import random_cover_instance, random_monoid_generators, random_polytope
from adjointkit.surface import intersect, is_nef, is_weak_lc_model, pseff_region, wlc_decomposition, zariski

BOUND = 8


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


# -- 1: common point -----------------------------------------------------------

def test_criterion_1_common_point(report):
    rng = random.Random(1)
    start = time.perf_counter()
    failures = 0
    for k in range(100):
        n = 2 + k % 2
        C = random_polytope(rng, n, rng.randint(n + 2, n + 5))
        p = common_point(C).point
        vs = C.vertices
        if not all(lp.convex_coefficients(vs[:i] + vs[i + 1:], p) is not None for i in range(len(vs))):
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10
    report(1, ok, f"100 polytopes, {failures} failures, {elapsed:.2f}s (limit 10s)")
    assert ok


# -- 2: covers -----------------------------------------------------------------

def test_criterion_2_cover(report):
    rng = random.Random(2)
    start = time.perf_counter()
    bad = []
    for k in range(50):
        C, parts = random_cover_instance(rng)
        r = verify_cover(C, parts, cover_respecting(C, parts))
        if not (r["union_exact"] and r["faces"] and r["aligned"] and r["ok"]):
            bad.append((k, r))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    report(2, ok, f"50 instances, {len(bad)} failures, {elapsed:.2f}s (limit 30s)")
    assert ok, bad[:3]


# -- 3: lifting through the augmented monoid -------------------------------------

def _face_generators(M, support, N):
    R = augment(M, support)
    elems = R.elements_up_to(N)
    return [minimal_elements([x for x in elems if x[j] == 0], R.degree) for j in support]


def test_criterion_3_lift(report):
    XY = GradedMonoid(2, 0, [(1, 0), (0, 1)])
    worked = lift_generators([[(0, 1, 0), (0, 0, 1)], [(1, 0, 0), (0, 0, 1)]], [0, 1], XY, bound=BOUND)
    results = [set(worked.elements) == {(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)}
               and is_generated_up_to(augment(XY, [0, 1]), worked, BOUND)]
    rng = random.Random(3)
    for _ in range(20):
        M = GradedMonoid(2, 1, random_monoid_generators(rng))
        G = lift_generators(_face_generators(M, [0, 1], BOUND), [0, 1], M, bound=BOUND)
        results.append(is_generated_up_to(augment(M, [0, 1]), G, BOUND))
    ok = all(results)
    report(3, ok, f"worked example + 20 random, {results.count(False)} failures at N={BOUND}")
    assert ok


# -- 4: truncation equivalence -----------------------------------------------------

def test_criterion_4_truncation(report):
    rng = random.Random(4)
    bad = []
    for k in range(20):
        M = GradedMonoid(2, 1, random_monoid_generators(rng))
        for d in itertools.product((2, 3), repeat=2):
            if not fg_equivalence_check(M, d, BOUND)["consistent"]:
                bad.append((k, d))
    ok = not bad
    report(4, ok, f"20 monoids x 4 weights, {len(bad)} inconsistent at N={BOUND}")
    assert ok, bad


# -- 5: Zariski decomposition --------------------------------------------------------

def _with_positive_curve(Q):
    """Append a curve H with H^2 = 1 meeting the first curve once."""
    r = len(Q)
    rows = [list(row) + [int(i == 0)] for i, row in enumerate(Q)]
    rows.append([int(j == 0) for j in range(r)] + [1])
    return rows


def zariski_configurations():
    d4 = [[-2, 1, 1, 1], [1, -2, 0, 0], [1, 0, -2, 0], [1, 0, 0, -2]]
    blocks = [
        minus_one_curve().Q, chain([-2, -2]).Q, chain([-2, -2, -2]).Q, chain([-2, -3, -2]).Q,
        chain([-1, -2]).Q, chain([-4, -1]).Q, [[-3]], [[-1, 0], [0, -2]], d4, chain([-2, -2, -2, -2]).Q,
    ]
    out = []
    for Q in blocks:
        assert is_negative_definite(Q)
        out.append(curve_surface(Q, [0] * len(Q)))
        out.append(curve_surface(_with_positive_curve(Q), [0] * (len(Q) + 1)))
    return out


def _orders(rng, r):
    """Every ordering of up to four curves; otherwise the reversal plus 24 random ones."""
    if r <= 4:
        return list(itertools.permutations(range(r)))
    return [tuple(reversed(range(r)))] + [tuple(rng.sample(range(r), r)) for _ in range(24)]


def test_criterion_5_zariski(report):
    rng = random.Random(5)
    start = time.perf_counter()
    surfaces = zariski_configurations()
    checked = failures = 0
    for S in surfaces:
        for _ in range(3):
            D = tuple(F(rng.randint(0, 6), rng.choice((1, 2, 3))) for _ in range(S.r))
            Z = zariski(D, S)
            idx = list(Z.support)
            gram = [[S.Q[i][j] for j in idx] for i in idx]
            invariants = (
                add(Z.P, Z.N) == D,
                is_nef(Z.P, S),
                all(c >= 0 for c in Z.N) and all(Z.N[i] == 0 for i in range(S.r) if i not in idx),
                all(intersect(Z.P, S.basis(i), S) == 0 for i in idx),
                not idx or is_negative_definite(gram),
            )
            unique = all(zariski(D, S, order=p) == Z for p in _orders(rng, S.r))
            checked += 1
            failures += not (all(invariants) and unique)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 1
    report(5, ok, f"{len(surfaces)} configurations, {checked} divisors, {failures} failures, "
                  f"{elapsed:.2f}s (limit 1s)")
    assert ok


# -- 6: chamber decomposition ----------------------------------------------------------

def _grid(C, steps=50):
    lo = [min(v[i] for v in C.vertices) for i in range(2)]
    hi = [max(v[i] for v in C.vertices) for i in range(2)]
    axis = [[lo[i] + (hi[i] - lo[i]) * F(k, steps - 1) for k in range(steps)] for i in range(2)]
    return itertools.product(*axis)


def test_criterion_6_regions(report):
    cases = region_cases()
    mismatches = vertex_failures = 0
    for name, S, Cv, f in cases:
        C = convex_hull(Cv)
        E = pseff_region(S, C, f)
        for t in _grid(C):
            # independent oracle: a direct cone-membership LP per grid point
            expected = C.contains(t) and lp.cone_coefficients(S.effective_cone, add(S.K, f(t))) is not None
            mismatches += E.contains(t) != expected
        for W in wlc_decomposition(S, C, f):
            for v in W.region.vertices:
                D = add(S.K, f(v))
                vertex_failures += not (lp.cone_coefficients(S.effective_cone, D) is not None
                                        and is_weak_lc_model(S, W.model, D))
    ok = mismatches == 0 and vertex_failures == 0
    report(6, ok, f"{len(cases)} surfaces, 50x50 grid, {mismatches} membership mismatches, "
                  f"{vertex_failures} vertex-check failures")
    assert ok


# -- 7 and 8: the pipeline ----------------------------------------------------------------

@pytest.fixture(scope="module")
def pipeline_runs():
    runs = {}
    start = time.perf_counter()
    for name, make in corpus.ALL.items():
        runs[name] = run_pipeline(make(), BOUND)
    return runs, time.perf_counter() - start


def test_criterion_7_pipeline(report, pipeline_runs):
    runs, elapsed = pipeline_runs
    start = time.perf_counter()
    ok_names = [name for name, T in runs.items()
                if T.verified and is_generated_up_to(corpus.ALL[name]().monoid(), T.generators, BOUND)]
    elapsed += time.perf_counter() - start
    steps = {r["step"] for T in runs.values() for r in T.records if r["kind"] == "reduce"}
    vanishing = any(len(r["pseff_vertices"]) < len(r["boundaries"])
                    for r in runs["non-pseff-vertex"].records if r["kind"] == "vertex_ring")
    exercised = {"duplicate", "split"} <= steps and vanishing
    ok = len(ok_names) == len(runs) >= 5 and exercised and elapsed < 60
    report(7, ok, f"{len(ok_names)}/{len(runs)} instances generate at N={BOUND}, steps {sorted(steps)}, "
                  f"vanishing rule {'hit' if vanishing else 'missed'}, {elapsed:.2f}s (limit 60s)")
    assert ok


def test_criterion_8_transfer_identity(report, pipeline_runs):
    runs, _ = pipeline_runs
    checked = violations = 0
    for T in runs.values():
        for rec in T.records:
            if rec["kind"] != "transfer":
                continue
            for m in rec["matrices"]:
                a, b, pq = m["a"], m["b"], m["p"] * m["q"]
                n = len(a)
                prod = [[sum(F(a[i][j]) * F(b[j][k]) for j in range(n)) / pq for k in range(n)] for i in range(n)]
                checked += 1
                violations += prod != [[int(i == k) for k in range(n)] for i in range(n)]
    ok = checked > 0 and violations == 0
    report(8, ok, f"{checked} transfer matrix pairs, {violations} violations")
    assert ok
