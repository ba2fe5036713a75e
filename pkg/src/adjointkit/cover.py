"""Common rational points of facet-deleted hulls and face-aligned simplex covers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import lp
from .geometry import (AffineChart, Polytope, Simplex, convex_hull, faces, intersect,
                       intersect_halfspace, is_face_of, is_subset, to_local_polytope,
                       triangulate, uncovered_point)
from .linalg import ZERO, QVec, combine, dot, rank, solve, sub, transpose, vec


@dataclass(frozen=True)
class CommonPointCertificate:
    """A point p with, for every i, convex weights expressing p over the vertices other than the i-th."""

    point: QVec
    memberships: tuple  # ((i, weights over vertices with index != i), ...)

    def verify(self, vertices: Sequence[QVec]) -> bool:
        for i, weights in self.memberships:
            others = [v for j, v in enumerate(vertices) if j != i]
            if len(weights) != len(others) or any(w < 0 for w in weights) or sum(weights) != 1:
                return False
            if combine(weights, others) != self.point:
                return False
        return {i for i, _ in self.memberships} == set(range(len(vertices)))


def common_point(C: Polytope, n: int | None = None) -> CommonPointCertificate:
    """Rational point lying in every hull obtained by deleting one vertex of C.

    Needs more than dim(C) + 1 vertices. Polytopes that are not
    full-dimensional are handled in their own affine chart.
    """
    if C.is_empty:
        raise ValueError("common_point of the empty polytope")
    if n is not None and C.dim != n:
        raise ValueError(f"polytope has dimension {C.dim}, expected {n}")
    verts = list(C.vertices)
    d = C.dim
    if len(verts) <= d + 1:
        raise ValueError(f"need more than {d + 1} vertices, got {len(verts)}")
    chart = C.chart
    p = chart.to_global(_common_point_local([chart.to_local(v) for v in verts], d))
    memberships = []
    for i in range(len(verts)):
        others = verts[:i] + verts[i + 1:]
        w = lp.convex_coefficients(others, p)
        if w is None:
            raise AssertionError(f"constructed point misses hull {i}")
        memberships.append((i, w))
    return CommonPointCertificate(p, tuple(memberships))


def _common_point_local(points: list[QVec], d: int) -> QVec:
    m = len(points)
    if m > d + 2:
        # drop the first vertex whose removal keeps full dimension
        for j in range(m):
            rest = points[:j] + points[j + 1:]
            if AffineChart(rest).dim == d:
                return _common_point_local(rest, d)
        raise AssertionError("no full-dimensional sub-hull")  # impossible for m > d + 1
    # m == d + 2: normalise d vertices to the unit vectors and one to the origin
    for combo in itertools.combinations(range(m), d + 1):
        base = [points[i] for i in combo]
        if rank([sub(v, base[d]) for v in base[:d]]) == d:
            break
    (extra,) = [i for i in range(m) if i not in combo]
    origin = base[d]
    cols = [sub(v, origin) for v in base[:d]]
    M = transpose(cols)
    a = solve(M, sub(points[extra], origin))
    p = _normalized_common_point(a)
    return tuple(o + dot(row, p) for o, row in zip(origin, M))


def _normalized_common_point(a: QVec) -> QVec:
    """Common point when the first d vertices are unit vectors, the next is 0 and the last is a."""
    if all(x >= 0 for x in a):
        total = sum(a, ZERO)
        if total <= 1:
            raise ValueError("extra point lies in the simplex; inputs are not all vertices")
        return tuple(x / total for x in a)
    neg = -sum((x for x in a if x < 0), ZERO)
    pos = sum((x for x in a if x >= 0), ZERO)
    denom = pos if 1 + neg <= pos else 1 + neg
    return tuple(x / denom if x >= 0 else ZERO for x in a)


@dataclass(frozen=True)
class Alignment:
    """D ∩ Σ for one simplex Σ, and the index of a part containing it (None if empty)."""

    face: Polytope
    part: int | None


@dataclass(frozen=True)
class SimplexCover:
    simplices: tuple
    alignment: tuple

    def __len__(self):
        return len(self.simplices)


def fan_triangulate(p: Sequence, face_cover: SimplexCover) -> SimplexCover:
    """Cone every simplex of a cover of a face to the apex p."""
    p = vec(p)
    pts = [v for s in face_cover.simplices for v in s.vertices]
    if not pts:
        raise ValueError("empty face cover")
    if AffineChart(pts).contains(p):
        raise ValueError("apex lies in the affine span of the face")
    simplices = tuple(Simplex(s.vertices + (p,)) for s in face_cover.simplices)
    return SimplexCover(simplices, face_cover.alignment)


def cover_respecting(C: Polytope, D_parts: Sequence[Polytope], n: int | None = None) -> SimplexCover:
    """Simplex cover of C such that D ∩ Σ is a face of each Σ lying in some part.

    D is the union of ``D_parts`` and must be convex. Simplices may overlap.
    """
    if C.is_empty:
        raise ValueError("cannot cover the empty polytope")
    if n is not None and C.dim != n:
        raise ValueError(f"polytope has dimension {C.dim}, expected {n}")
    parts = [P for P in D_parts if not P.is_empty]
    for P in parts:
        if P.ambient != C.ambient or not is_subset(P, C):
            raise ValueError("D is not contained in C")
    D = union_hull(parts, C.ambient)
    if parts and uncovered_point(D, parts) is not None:
        raise ValueError("the union of the parts is not convex")
    chart = C.chart
    local = _cover(to_local_polytope(chart, C), [to_local_polytope(chart, P) for P in parts])
    seen = {}
    for verts in local:
        s = Simplex(tuple(chart.to_global(v) for v in verts))
        seen.setdefault(s.key(), s)
    simplices = tuple(seen[k] for k in sorted(seen))
    return SimplexCover(simplices, tuple(align(s, D, parts) for s in simplices))


def union_hull(parts: Sequence[Polytope], ambient: int) -> Polytope:
    if not parts:
        return Polytope.empty(ambient)
    return convex_hull([v for P in parts for v in P.vertices])


def align(s: Simplex, D: Polytope, parts: Sequence[Polytope]) -> Alignment:
    if D.is_empty:
        return Alignment(Polytope.empty(len(s.vertices[0])), None)
    face = intersect(s.polytope, D)
    if face.is_empty:
        return Alignment(face, None)
    idx = next((i for i, P in enumerate(parts) if is_subset(face, P)), None)
    return Alignment(face, idx)


def _cover(C: Polytope, parts: list[Polytope]) -> list[tuple]:
    """Recursive construction in a chart where C is full-dimensional."""
    d = C.ambient
    if d == 0:
        return [C.vertices]
    parts = [P for P in parts if not P.is_empty]
    out = []
    if not parts:
        p = C.barycenter()
        for F in faces(C, d - 1):
            out.extend(s + (p,) for s in _cover_face(F, []))
        return out
    D = union_hull(parts, d)
    for H in D.halfspaces:
        piece = intersect_halfspace(C, H.flipped())
        if piece.is_empty or piece.dim < d:
            continue  # a proper face of C; covered by the other pieces
        p = piece.barycenter()
        for F in faces(piece, d - 1):
            sub_parts = [intersect(F, P) for P in parts]
            out.extend(s + (p,) for s in _cover_face(F, sub_parts))
    for P in parts:
        if P.dim == d:
            out.extend(s.vertices for s in triangulate(P))
    return out


def _cover_face(F: Polytope, parts: list[Polytope]) -> list[tuple]:
    chart = F.chart
    local = _cover(to_local_polytope(chart, F), [to_local_polytope(chart, P) for P in parts if not P.is_empty])
    return [tuple(chart.to_global(v) for v in s) for s in local]


def verify_cover(C: Polytope, D_parts: Sequence[Polytope], cover: SimplexCover) -> dict:
    """Independent re-check of a cover; one boolean per invariant."""
    parts = [P for P in D_parts if not P.is_empty]
    D = union_hull(parts, C.ambient)
    polys = [s.polytope for s in cover.simplices]
    report = {
        "simplices": len(cover.simplices),
        "full_dimensional": all(P.dim == C.dim for P in polys),
        "inside": all(is_subset(P, C) for P in polys),
        "union_exact": uncovered_point(C, polys) is None,
    }
    face_ok = aligned_ok = True
    for s, P, a in zip(cover.simplices, polys, cover.alignment):
        actual = intersect(P, D) if not D.is_empty else Polytope.empty(C.ambient)
        if actual != a.face or not is_face_of(actual, P):
            face_ok = False
        if not actual.is_empty and (a.part is None or not is_subset(actual, parts[a.part])):
            aligned_ok = False
    report["faces"] = face_ok
    report["aligned"] = aligned_ok
    report["ok"] = all(v for k, v in report.items() if k != "simplices")
    return report
