"""Seeded random instances for tests, the acceptance suite and ``--seed`` runs.

All data is exact. Points in convex position come from rational
parametrizations of the unit circle and sphere, so every sampled point is a
vertex of the hull.
"""
from __future__ import annotations

import random
from fractions import Fraction as F
from typing import Sequence

from .geometry import Polytope, convex_hull, halfspace, intersect_halfspace
from .linalg import QVec, combine


def _param(rng: random.Random, used: set, lo: int = -12, hi: int = 12, den: int = 4) -> F:
    while True:
        t = F(rng.randint(lo, hi), rng.randint(1, den))
        if t not in used:
            used.add(t)
            return t


def circle_point(t: F) -> QVec:
    s = 1 + t * t
    return ((1 - t * t) / s, 2 * t / s)


def sphere_point(u: F, v: F) -> QVec:
    s = 1 + u * u + v * v
    return (2 * u / s, 2 * v / s, (u * u + v * v - 1) / s)


def convex_position(rng: random.Random, n: int, m: int) -> list[QVec]:
    """m distinct rational points in convex position in dimension n (2 or 3)."""
    if n == 2:
        used: set = set()
        return [circle_point(_param(rng, used)) for _ in range(m)]
    if n == 3:
        seen: set = set()
        pts = []
        while len(pts) < m:
            uv = (F(rng.randint(-8, 8), rng.randint(1, 3)), F(rng.randint(-8, 8), rng.randint(1, 3)))
            if uv not in seen:
                seen.add(uv)
                pts.append(sphere_point(*uv))
        return pts
    raise ValueError("only dimensions 2 and 3")


def random_polytope(rng: random.Random, n: int, m: int) -> Polytope:
    """Full-dimensional polytope in R^n with exactly m vertices."""
    while True:
        P = convex_hull(convex_position(rng, n, m))
        if P.dim == n and len(P.vertices) == m:
            return P


def interior_points(rng: random.Random, C: Polytope, k: int) -> list[QVec]:
    """Random convex combinations of the vertices of C."""
    out = []
    for _ in range(k):
        w = [F(rng.randint(0, 6)) for _ in C.vertices]
        if not any(w):
            w[0] = F(1)
        tot = sum(w)
        out.append(combine([x / tot for x in w], C.vertices))
    return out


def random_cover_instance(rng: random.Random) -> tuple[Polytope, list[Polytope]]:
    """A polygon C and parts of a convex D inside it, possibly split by a line."""
    C = random_polytope(rng, 2, rng.randint(3, 6))
    kind = rng.choice(["empty", "whole", "inner", "split", "split", "face"])
    if kind == "empty":
        return C, []
    if kind == "whole":
        return C, [C]
    if kind == "face":
        a, b = C.vertices[0], C.vertices[1]
        return C, [convex_hull([a, b])]
    D = convex_hull(interior_points(rng, C, rng.randint(1, 4)))
    if kind == "inner" or D.dim < 2:
        return C, [D]
    c = D.barycenter()
    normal = (F(rng.randint(-3, 3)), F(rng.choice([-2, -1, 1, 2])))
    h = halfspace(normal, -(normal[0] * c[0] + normal[1] * c[1]))
    return C, [intersect_halfspace(D, h), intersect_halfspace(D, h.flipped())]


def random_monoid_generators(rng: random.Random, n: int = 2, k: int = 1, count: int | None = None,
                             top: int = 2) -> list[tuple[int, ...]]:
    """Generators of a pointed monoid: every multidegree nonzero, payloads in [-top, top]."""
    count = count if count is not None else rng.randint(2, 4)
    gens = set()
    for i in range(n):
        gens.add(tuple(int(j == i) for j in range(n)) + tuple(rng.randint(-top, top) for _ in range(k)))
    while len(gens) < count:
        m = tuple(rng.randint(0, 2) for _ in range(n))
        if any(m):
            gens.add(m + tuple(rng.randint(-top, top) for _ in range(k)))
    return sorted(gens)


def random_boundaries(rng: random.Random, r: int, n: int, den: int = 2) -> list[Sequence[F]]:
    return [tuple(F(rng.randint(0, den), den) for _ in range(r)) for _ in range(n)]
