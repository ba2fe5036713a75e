"""Exact rational polytopes with synchronized vertex and half-space data.

Polytopes here are small (a handful of dimensions, a few dozen vertices), so
the H-representation is recomputed eagerly on every construction and facets
are found by brute force over affinely independent subsets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import lp
from .linalg import (ZERO, QVec, add, dot, nullspace, primitive, rank, rat, rref,
                     scale, solve, sub, vec)


class DimensionError(ValueError):
    """Inputs live in different ambient spaces."""


@dataclass(frozen=True)
class HalfSpace:
    """The closed set {x : normal . x + offset >= 0}."""

    normal: QVec
    offset: Fraction

    def __post_init__(self):
        if all(c == 0 for c in self.normal):
            raise ValueError("half-space normal must be nonzero")

    def value(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) + self.offset

    def flipped(self) -> "HalfSpace":
        return HalfSpace(tuple(-c for c in self.normal), -self.offset)

    def canonical(self) -> "HalfSpace":
        v = primitive(self.normal + (self.offset,))
        return HalfSpace(v[:-1], v[-1])


def halfspace(normal, offset) -> HalfSpace:
    return HalfSpace(vec(normal), rat(offset)).canonical()


class AffineChart:
    """Coordinates on the affine hull of a point set.

    Local coordinates are the pivot entries of ``x - origin`` after bringing
    the direction space to reduced echelon form, so the map is exact and
    bijective on the hull.
    """

    def __init__(self, points: Sequence[QVec]):
        self.origin = min(points)
        self.ambient = len(self.origin)
        dirs = [sub(p, self.origin) for p in points if p != self.origin]
        if dirs:
            self.basis, self.pivots = rref(dirs, self.ambient)
            self.basis = [tuple(r) for r in self.basis]
        else:
            self.basis, self.pivots = [], []
        self.dim = len(self.pivots)

    def to_local(self, x: Sequence) -> QVec:
        d = sub(x, self.origin)
        return tuple(d[p] for p in self.pivots)

    def to_global(self, y: Sequence) -> QVec:
        out = list(self.origin)
        for c, row in zip(y, self.basis):
            if c:
                for i, r in enumerate(row):
                    out[i] += c * r
        return tuple(out)

    def contains(self, x: Sequence) -> bool:
        return self.to_global(self.to_local(x)) == tuple(x)

    def lift(self, h: HalfSpace) -> HalfSpace:
        normal = [ZERO] * self.ambient
        for a, p in zip(h.normal, self.pivots):
            normal[p] = a
        offset = h.offset - sum((a * self.origin[p] for a, p in zip(h.normal, self.pivots)), ZERO)
        return HalfSpace(tuple(normal), offset).canonical()

    def local_halfspace(self, h: HalfSpace) -> HalfSpace | None:
        """Restriction of an ambient half-space to local coordinates.

        Returns None when the restriction is constant on the hull (the caller
        decides whether that constant is feasible via ``constant_value``).
        """
        normal = tuple(dot(h.normal, row) for row in self.basis)
        if all(c == 0 for c in normal):
            return None
        return HalfSpace(normal, h.value(self.origin)).canonical()

    def equalities(self) -> list[HalfSpace]:
        out = []
        for w in nullspace(self.basis, self.ambient) if self.basis else nullspace([], self.ambient):
            w = primitive(w)
            h = HalfSpace(w, -dot(w, self.origin))
            out.append(h)
            out.append(h.flipped())
        return out


@dataclass(frozen=True, eq=False)
class Polytope:
    """Exact rational polytope; ``dim`` is the affine dimension, -1 if empty."""

    vertices: tuple
    halfspaces: tuple
    dim: int
    ambient: int

    @staticmethod
    def empty(ambient: int) -> "Polytope":
        return Polytope((), (), -1, ambient)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.ambient == other.ambient and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.ambient, self.vertices))

    def __repr__(self):
        vs = ", ".join("(" + ",".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"Polytope(dim={self.dim}, vertices=[{vs}])"

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient:
            raise DimensionError(f"point of dimension {len(x)} vs polytope in R^{self.ambient}")
        if self.is_empty:
            return False
        x = vec(x)
        return all(h.value(x) >= 0 for h in self.halfspaces)

    def barycenter(self) -> QVec:
        k = len(self.vertices)
        s = self.vertices[0]
        for v in self.vertices[1:]:
            s = add(s, v)
        return scale(Fraction(1, k), s)

    @cached_property
    def facets(self) -> tuple:
        """Half-spaces not tight on the whole polytope (true facets)."""
        return tuple(h for h in self.halfspaces if any(h.value(v) != 0 for v in self.vertices))

    @cached_property
    def chart(self) -> AffineChart:
        return AffineChart(self.vertices)


def _facets_2d(pts: list[QVec]) -> list[HalfSpace]:
    return _hull_2d(pts)[1]


def _hull_2d(pts: list[QVec]) -> tuple[list[QVec], list[HalfSpace]]:
    """Monotone chain on sorted distinct points: strict vertices and edge half-planes."""
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]  # counter-clockwise
    out = []
    for a, b in zip(ring, ring[1:] + ring[:1]):
        # inside is to the left of a->b
        normal = (-(b[1] - a[1]), b[0] - a[0])
        out.append(HalfSpace(normal, -dot(normal, a)).canonical())
    return ring, out


def _facets_full(pts: list[QVec], d: int) -> list[HalfSpace]:
    """Facets of a full-dimensional point configuration in R^d."""
    if d == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        return [HalfSpace((Fraction(1),), -lo).canonical(), HalfSpace((Fraction(-1),), hi).canonical()]
    if d == 2:
        return _facets_2d(sorted(set(pts)))
    found = {}
    for combo in itertools.combinations(range(len(pts)), d):
        p0 = pts[combo[0]]
        diffs = [sub(pts[i], p0) for i in combo[1:]]
        ns = nullspace(diffs, d)
        if len(ns) != 1:
            continue
        w = ns[0]
        vals = [dot(w, sub(q, p0)) for q in pts]
        if all(v >= 0 for v in vals):
            h = HalfSpace(w, -dot(w, p0)).canonical()
        elif all(v <= 0 for v in vals):
            h = HalfSpace(tuple(-c for c in w), dot(w, p0)).canonical()
        else:
            continue
        found[(h.normal, h.offset)] = h
    return list(found.values())


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """Polytope spanned by rational points, redundant points dropped."""
    pts = sorted(set(vec(p) for p in points))
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    ambient = len(pts[0])
    if any(len(p) != ambient for p in pts):
        raise DimensionError("points of different dimensions")
    if ambient == 2 and len(pts) >= 3:
        ring, hs = _hull_2d(pts)
        if len(ring) >= 3:
            return Polytope(tuple(sorted(ring)), tuple(hs), 2, 2)
    chart = AffineChart(pts)
    d = chart.dim
    if d == 0:
        return Polytope((pts[0],), tuple(chart.equalities()), 0, ambient)
    local = [chart.to_local(p) for p in pts]
    local_facets = _facets_full(local, d)
    verts = []
    for p, y in zip(pts, local):
        tight = [h.normal for h in local_facets if h.value(y) == 0]
        if len(tight) >= d and rank(tight) == d:
            verts.append(p)
    hs = [chart.lift(h) for h in local_facets] + chart.equalities()
    return Polytope(tuple(sorted(verts)), tuple(hs), d, ambient)


def contains(P: Polytope, x: Sequence) -> bool:
    return P.contains(x)


def faces(P: Polytope, k: int) -> list[Polytope]:
    """All k-dimensional faces of P (P itself when k = dim P)."""
    if P.is_empty:
        raise ValueError("the empty polytope has no faces of dimension >= 0")
    if not 0 <= k <= P.dim:
        raise ValueError(f"face dimension {k} outside 0..{P.dim}")
    if k == P.dim:
        return [P]
    verts = P.vertices
    fsets = []
    for h in P.facets:
        s = frozenset(i for i, v in enumerate(verts) if h.value(v) == 0)
        if s:
            fsets.append(s)
    lattice = set(fsets)
    frontier = set(fsets)
    while frontier:
        new = set()
        for a in frontier:
            for b in fsets:
                c = a & b
                if c and c not in lattice:
                    new.add(c)
        lattice |= new
        frontier = new
    out = {}
    for s in lattice:
        F = convex_hull([verts[i] for i in s])
        if F.dim == k:
            out[F.vertices] = F
    return [out[key] for key in sorted(out)]


def intersect_halfspace(P: Polytope, H: HalfSpace) -> Polytope:
    """P cut by H; new vertices come from segments crossing the boundary."""
    if len(H.normal) != P.ambient:
        raise DimensionError("half-space and polytope dimensions differ")
    if P.is_empty:
        return P
    vals = [H.value(v) for v in P.vertices]
    if all(v >= 0 for v in vals):
        return P
    keep = [v for v, h in zip(P.vertices, vals) if h >= 0]
    pos = [(v, h) for v, h in zip(P.vertices, vals) if h > 0]
    neg = [(v, h) for v, h in zip(P.vertices, vals) if h < 0]
    for (u, hu), (w, hw) in itertools.product(pos, neg):
        t = hu / (hu - hw)
        keep.append(add(u, scale(t, sub(w, u))))
    if not keep:
        return Polytope.empty(P.ambient)
    return convex_hull(keep)


def intersect(P: Polytope, Q: Polytope) -> Polytope:
    if P.ambient != Q.ambient:
        raise DimensionError("polytopes in different ambient spaces")
    if Q.is_empty:
        return Q
    R = P
    for h in Q.halfspaces:
        R = intersect_halfspace(R, h)
        if R.is_empty:
            break
    return R


def is_subset(F: Polytope, P: Polytope) -> bool:
    return all(P.contains(v) for v in F.vertices)


def is_face_of(F: Polytope, P: Polytope) -> bool:
    """Face test: F equals the contact set of some supporting half-space of P."""
    if F.is_empty:
        return True
    if not is_subset(F, P):
        raise ValueError("F is not contained in P")
    if F == P:
        return True
    tight = [h for h in P.facets if all(h.value(v) == 0 for v in F.vertices)]
    if not tight:
        return False
    contact = [v for v in P.vertices if all(h.value(v) == 0 for h in tight)]
    return convex_hull(contact) == F


def supporting_halfspace(F: Polytope, P: Polytope) -> HalfSpace | None:
    """A half-space valid on P whose contact set is exactly F (None if F = P or not a face)."""
    if F == P or not is_face_of(F, P):
        return None
    tight = [h for h in P.facets if all(h.value(v) == 0 for v in F.vertices)]
    normal = tight[0].normal
    offset = tight[0].offset
    for h in tight[1:]:
        normal = add(normal, h.normal)
        offset += h.offset
    return HalfSpace(normal, offset).canonical()


def polytope_from_halfspaces(halfspaces: Sequence[HalfSpace], ambient: int,
                             assume_bounded: bool = False) -> Polytope:
    """Vertex enumeration for a bounded H-polytope (brute force over d-subsets).

    ``assume_bounded`` skips the boundedness test when the normals are
    already known to span positively.
    """
    hs = list(halfspaces)
    if any(len(h.normal) != ambient for h in hs):
        raise DimensionError("half-space dimensions differ")
    if ambient == 0:
        return convex_hull([()]) if all(h.offset >= 0 for h in hs) else Polytope.empty(0)
    if not assume_bounded and not _positively_spanning([h.normal for h in hs], ambient):
        raise ValueError("half-spaces do not cut out a bounded region")
    cands = set()
    for combo in itertools.combinations(hs, ambient):
        A = [h.normal for h in combo]
        if rank(A) < ambient:
            continue
        x = solve(A, [-h.offset for h in combo])
        if all(h.value(x) >= 0 for h in hs):
            cands.add(x)
    if not cands:
        return Polytope.empty(ambient)
    return convex_hull(cands)


def _positively_spanning(normals: Sequence[QVec], d: int) -> bool:
    for i in range(d):
        for s in (1, -1):
            e = tuple(Fraction(s) if j == i else ZERO for j in range(d))
            if lp.cone_coefficients(list(normals), e) is None:
                return False
    return True


def minkowski_sum(polys: Sequence[Polytope], weights: Sequence | None = None) -> Polytope:
    """sum_i w_i P_i for non-negative rational weights."""
    if weights is None:
        weights = [1] * len(polys)
    ambient = polys[0].ambient
    pts = [tuple([ZERO] * ambient)]
    for P, w in zip(polys, weights):
        w = rat(w)
        if w == 0:
            continue
        if P.is_empty:
            return Polytope.empty(ambient)
        pts = list({add(a, scale(w, v)) for a in pts for v in P.vertices})
        if len(pts) > 64:
            pts = list(convex_hull(pts).vertices)
    return convex_hull(pts)


def lattice_points(P: Polytope) -> list[tuple[int, ...]]:
    """Integer points of P, sorted."""
    if P.is_empty:
        return []
    if P.ambient == 0:
        return [()]
    lo = [math.ceil(min(v[i] for v in P.vertices)) for i in range(P.ambient)]
    hi = [math.floor(max(v[i] for v in P.vertices)) for i in range(P.ambient)]
    if any(a > b for a, b in zip(lo, hi)):
        return []
    hs = [_integer_halfspace(h) for h in P.halfspaces]
    out = []
    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(sum(c * xi for c, xi in zip(n, x)) + o >= 0 for n, o in hs):
            out.append(x)
    return out


def _integer_halfspace(h: HalfSpace):
    v = primitive(h.normal + (h.offset,))
    return tuple(int(c) for c in v[:-1]), int(v[-1])


@dataclass(frozen=True)
class Simplex:
    """k+1 affinely independent rational points."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(vec(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            raise ValueError("a simplex needs at least one vertex")
        diffs = [sub(v, vs[0]) for v in vs[1:]]
        if diffs and rank(diffs) != len(diffs):
            raise ValueError("simplex vertices are affinely dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @cached_property
    def polytope(self) -> Polytope:
        return convex_hull(self.vertices)

    def key(self) -> tuple:
        return tuple(sorted(self.vertices))


def triangulate(P: Polytope) -> list[Simplex]:
    """Pulling triangulation from the lexicographically least vertex."""
    if P.is_empty:
        return []
    if P.dim == 0:
        return [Simplex(P.vertices)]
    apex = P.vertices[0]
    out = []
    for F in faces(P, P.dim - 1):
        if apex in F.vertices:
            continue
        for s in triangulate(F):
            out.append(Simplex(s.vertices + (apex,)))
    return out


def to_local_polytope(chart: AffineChart, P: Polytope) -> Polytope:
    if P.is_empty:
        return Polytope.empty(chart.dim)
    return convex_hull([chart.to_local(v) for v in P.vertices])


def uncovered_point(R: Polytope, pieces: Sequence[Polytope]) -> QVec | None:
    """A point of R outside every piece, found by exact region subtraction.

    Works in the affine chart of R; pieces meeting R in lower dimension are
    ignored, which is sound because R minus a finite union of closed sets is
    relatively open in R. Returns None when R is covered.
    """
    if R.is_empty:
        return None
    chart = R.chart
    d = chart.dim
    if d == 0:
        return None if any(not P.is_empty and P.contains(R.vertices[0]) for P in pieces) else R.vertices[0]
    full = d == R.ambient
    Rl = R if full else to_local_polytope(chart, R)
    local = []
    for P in pieces:
        if P.is_empty or P.dim < d or _separated(R, P):
            continue
        if full:
            local.append(P)
            continue
        Q = intersect(R, P)
        if Q.is_empty or Q.dim < d:
            continue
        local.append(to_local_polytope(chart, Q))
    w = _uncovered(Rl, local, d)
    return None if w is None else chart.to_global(w)


def _separated(R: Polytope, S: Polytope) -> bool:
    """True when some half-space of S meets R only in a proper face of R."""
    for h in S.halfspaces:
        vals = [h.value(v) for v in R.vertices]
        if all(x <= 0 for x in vals) and any(x < 0 for x in vals):
            return True
    return False


def _uncovered(R: Polytope, pieces: list[Polytope], d: int) -> QVec | None:
    for idx, S in enumerate(pieces):
        if S.dim < d or _separated(R, S):
            continue
        if all(S.contains(v) for v in R.vertices):
            return None
        rest = R
        for h in S.halfspaces:
            outside = intersect_halfspace(rest, h.flipped())
            if not outside.is_empty and outside.dim == d:
                w = _uncovered(outside, pieces[idx + 1:], d)
                if w is not None:
                    return w
            rest = intersect_halfspace(rest, h)
            if rest.is_empty or rest.dim < d:
                break
        return None
    return R.barycenter()
