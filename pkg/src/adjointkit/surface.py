"""Numerical surfaces: intersection form, Zariski decomposition, contractions, MMP.

A surface is an ordered basis of curve classes with a rational intersection
matrix, a canonical class and finitely many generators for the effective
cone and for the curves used in nef tests. Nef divisors are treated as
semi-ample, and a curve with negative self-intersection may be contracted.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import lp
from .errors import VerificationError
from .geometry import (HalfSpace, Polytope, convex_hull, halfspace, intersect_halfspace,
                       uncovered_point)
from .linalg import (ZERO, QVec, add, dot, is_negative_definite, matmul, nullspace, primitive,
                     rank, rat, scale, solve, sub, vec)


def _unit(i: int, r: int) -> QVec:
    return tuple(rat(1) if j == i else ZERO for j in range(r))


@dataclass(frozen=True)
class NumericalSurface:
    curves: tuple
    Q: tuple
    K: QVec
    effective_cone: tuple
    mori_curves: tuple

    def __post_init__(self):
        r = len(self.curves)
        Q = tuple(vec(row) for row in self.Q)
        object.__setattr__(self, "curves", tuple(str(c) for c in self.curves))
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "K", vec(self.K))
        object.__setattr__(self, "effective_cone", tuple(vec(g) for g in self.effective_cone))
        object.__setattr__(self, "mori_curves", tuple(vec(c) for c in self.mori_curves))
        if len(set(self.curves)) != r:
            raise ValueError("curve names must be distinct")
        if len(Q) != r or any(len(row) != r for row in Q):
            raise ValueError(f"intersection matrix must be {r}x{r}")
        if any(Q[i][j] != Q[j][i] for i in range(r) for j in range(r)):
            raise ValueError("intersection matrix is not symmetric")
        if len(self.K) != r:
            raise ValueError("canonical class has the wrong length")
        for g in self.effective_cone + self.mori_curves:
            if len(g) != r:
                raise ValueError("cone generator has the wrong length")
        for i in range(r):
            if lp.cone_coefficients(self.effective_cone, _unit(i, r)) is None:
                raise ValueError(f"basis curve {self.curves[i]} is not effective")

    @property
    def r(self) -> int:
        return len(self.curves)

    def basis(self, i: int) -> QVec:
        return _unit(i, self.r)

    def index(self, name: str) -> int:
        return self.curves.index(name)

    def self_intersection(self, i: int):
        return self.Q[i][i]


def _check(D: Sequence, S: NumericalSurface) -> QVec:
    D = vec(D)
    if len(D) != S.r:
        raise ValueError(f"divisor has {len(D)} coefficients, surface has {S.r} curves")
    return D


def intersect(D: Sequence, C: Sequence, S: NumericalSurface):
    """D . C through the intersection matrix."""
    D, C = _check(D, S), _check(C, S)
    return sum((D[i] * S.Q[i][j] * C[j] for i in range(S.r) for j in range(S.r) if D[i] and C[j]), ZERO)


def is_nef(D: Sequence, S: NumericalSurface) -> bool:
    return all(intersect(D, c, S) >= 0 for c in S.mori_curves)


def is_pseff(D: Sequence, S: NumericalSurface) -> bool:
    D = _check(D, S)
    # every basis curve is effective (checked on construction), so D >= 0 needs no LP
    if all(c >= 0 for c in D):
        return True
    return lp.cone_coefficients(S.effective_cone, D) is not None


def _meet(D: QVec, i: int, S: NumericalSurface):
    """D . (i-th basis curve)."""
    return sum((D[k] * S.Q[k][i] for k in range(S.r) if D[k]), ZERO)


# -- Zariski decomposition ---------------------------------------------------

@dataclass(frozen=True)
class ZariskiDecomp:
    P: QVec
    N: QVec
    support: tuple


def zariski(D: Sequence, S: NumericalSurface, order: Sequence[int] | None = None) -> ZariskiDecomp:
    """Positive and negative parts of a pseudo-effective divisor.

    The support grows from the curves meeting D negatively; on each round
    the negative part is the unique combination of support curves making
    the positive part orthogonal to them. With ``order`` the support grows
    one curve at a time in that order (the result does not depend on it).
    """
    D = _check(D, S)
    if not is_pseff(D, S):
        raise ValueError("divisor is not pseudo-effective")
    one_at_a_time = order is not None
    order = list(order) if order is not None else list(range(S.r))
    support: list[int] = []
    N = tuple(ZERO for _ in D)
    while True:
        P = sub(D, N)
        bad = [i for i in order if i not in support and _meet(P, i, S) < 0]
        if not bad:
            break
        support.extend(bad[:1] if one_at_a_time else bad)
        G = [[S.Q[a][b] for b in support] for a in support]
        if not is_negative_definite(G):
            raise ValueError(f"curves {[S.curves[i] for i in support]} do not have a negative definite intersection matrix")
        nu = solve(G, [_meet(D, i, S) for i in support])
        N = [ZERO] * S.r
        for i, c in zip(support, nu):
            N[i] = c
        N = tuple(N)
    P = sub(D, N)
    if any(c < 0 for c in N):
        raise VerificationError("negative part has a negative coefficient")
    if not is_nef(P, S):
        raise VerificationError("positive part is not nef")
    return ZariskiDecomp(P, N, tuple(sorted(i for i in range(S.r) if N[i] > 0)))


# -- contraction and MMP -----------------------------------------------------

def contract(S: NumericalSurface, j: int):
    """Contract the j-th basis curve; returns the new surface and the push-forward matrix.

    The push-forward drops the j-th coordinate; the new form is the old one
    restricted to the orthogonal complement of C_j.
    """
    Qjj = S.Q[j][j]
    if Qjj >= 0:
        raise ValueError(f"curve {S.curves[j]} has self-intersection {Qjj} >= 0")
    keep = [a for a in range(S.r) if a != j]
    Q = [[S.Q[a][b] - S.Q[a][j] * S.Q[b][j] / Qjj for b in keep] for a in keep]
    drop = lambda v: tuple(v[a] for a in keep)

    def gens(vs):
        out = []
        for v in vs:
            w = drop(v)
            if any(w) and w not in out:
                out.append(w)
        return out

    F = tuple(tuple(rat(1) if b == a else ZERO for b in range(S.r)) for a in keep)
    T = NumericalSurface(tuple(S.curves[a] for a in keep), Q, drop(S.K), gens(S.effective_cone), gens(S.mori_curves))
    return T, F


def apply(F: Sequence[Sequence], v: Sequence) -> QVec:
    return tuple(dot(row, v) for row in F)


@dataclass(frozen=True)
class MMPStep:
    curve: str
    index: int
    pushforward: tuple


@dataclass(frozen=True)
class MMPTrace:
    steps: tuple
    final_surface: NumericalSurface
    final_boundary: QVec
    outcome: str  # "minimal-model" or "fiber-type"
    pushforward: tuple = field(default=())  # composite matrix from the start surface

    @property
    def contracted(self) -> tuple:
        return tuple(s.curve for s in self.steps)

    def push(self, D: Sequence) -> QVec:
        return apply(self.pushforward, D)


def run_mmp(S: NumericalSurface, delta: Sequence) -> MMPTrace:
    """Contract negative curves meeting K + delta negatively, lowest index first."""
    B = _check(delta, S)
    cur = S
    total = tuple(S.basis(i) for i in range(S.r))
    steps = []
    while True:
        D = add(cur.K, B)
        if is_nef(D, cur):
            outcome = "minimal-model"
            break
        neg = [i for i in range(cur.r) if intersect(D, cur.basis(i), cur) < 0]
        j = next((i for i in neg if cur.Q[i][i] < 0), None)
        if j is None:
            outcome = "fiber-type"
            break
        name = cur.curves[j]
        cur, F = contract(cur, j)
        steps.append(MMPStep(name, j, F))
        B = apply(F, B)
        total = tuple(tuple(r) for r in matmul(F, total))
    return MMPTrace(tuple(steps), cur, B, outcome, total)


def pullback(S: NumericalSurface, trace: MMPTrace, Dy: Sequence) -> QVec:
    """The divisor on S pushing forward to Dy and orthogonal to every contracted curve."""
    kept = [S.index(c) for c in trace.final_surface.curves]
    gone = [S.index(c) for c in trace.contracted]
    E = [ZERO] * S.r
    for i, c in zip(kept, vec(Dy)):
        E[i] = c
    if not gone:
        return tuple(E)
    G = [[S.Q[a][b] for b in gone] for a in gone]
    rhs = [-intersect(E, S.basis(a), S) for a in gone]
    x = solve(G, rhs)
    for a, c in zip(gone, x):
        E[a] = c
    return tuple(E)


def discrepancy(S: NumericalSurface, trace: MMPTrace, D: Sequence) -> QVec:
    """D - f^* f_* D for the contraction f recorded in ``trace``."""
    return sub(_check(D, S), pullback(S, trace, trace.push(D)))


def is_weak_lc_model(S: NumericalSurface, trace: MMPTrace, D: Sequence) -> bool:
    """Pushed-forward D nef and D - f^* f_* D effective."""
    return is_nef(trace.push(D), trace.final_surface) and all(c >= 0 for c in discrepancy(S, trace, D))


# -- boundary families -------------------------------------------------------

@dataclass(frozen=True)
class AffineDivisorMap:
    """t -> base + sum_k t_k linear[k], a boundary depending affinely on parameters."""

    base: QVec
    linear: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", vec(self.base))
        object.__setattr__(self, "linear", tuple(vec(v) for v in self.linear))
        if any(len(v) != len(self.base) for v in self.linear):
            raise ValueError("inconsistent divisor lengths")

    @property
    def params(self) -> int:
        return len(self.linear)

    def __call__(self, t: Sequence) -> QVec:
        out = self.base
        for c, v in zip(vec(t), self.linear):
            if c:
                out = add(out, scale(c, v))
        return out

    def push(self, F) -> "AffineDivisorMap":
        return AffineDivisorMap(apply(F, self.base), tuple(apply(F, v) for v in self.linear))

    def shift(self, D: Sequence) -> "AffineDivisorMap":
        return AffineDivisorMap(add(self.base, D), self.linear)


def _pairing_halfspace(w: Sequence, f: AffineDivisorMap) -> HalfSpace | bool:
    """{t : w . f(t) >= 0}, or a boolean when the form is constant in t."""
    normal = tuple(dot(w, v) for v in f.linear)
    offset = dot(w, f.base)
    if not any(normal):
        return offset >= 0
    return halfspace(normal, offset)


def cone_normals(gens: Sequence[QVec], r: int) -> list[QVec]:
    """Normals w with the cone equal to {x : w . x >= 0 for all w}."""
    gens = [g for g in gens if any(g)]
    eq = nullspace([list(g) for g in gens], r) if gens else [_unit(i, r) for i in range(r)]
    out = []
    for w in eq:
        out += [primitive(w), primitive(scale(-1, w))]
    s = rank([list(g) for g in gens]) if gens else 0
    if s == 0:
        return out
    seen = set()
    for sub_ in itertools.combinations(gens, s - 1):
        if sub_ and rank([list(g) for g in sub_]) != s - 1:
            continue
        ns = nullspace([list(g) for g in sub_] + [list(e) for e in eq], r)
        if len(ns) != 1:
            continue
        w = ns[0]
        vals = [dot(w, g) for g in gens]
        if all(v >= 0 for v in vals):
            w = primitive(w)
        elif all(v <= 0 for v in vals):
            w = primitive(scale(-1, w))
        else:
            continue
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def pseff_region(S: NumericalSurface, C: Polytope, delta_map: AffineDivisorMap) -> Polytope:
    """Parameters t in C with K + delta(t) pseudo-effective."""
    if delta_map.params != C.ambient:
        raise ValueError(f"boundary map has {delta_map.params} parameters, region lives in dimension {C.ambient}")
    if len(delta_map.base) != S.r:
        raise ValueError("boundary map has the wrong divisor length")
    f = delta_map.shift(S.K)
    R = C
    for w in cone_normals(S.effective_cone, S.r):
        h = _pairing_halfspace(w, f)
        if h is False:
            return Polytope.empty(C.ambient)
        if h is not True:
            R = intersect_halfspace(R, h)
        if R.is_empty:
            return R
    return R


@dataclass(frozen=True)
class WLCRegion:
    region: Polytope
    model: MMPTrace

    @property
    def key(self) -> tuple:
        return self.model.contracted + (self.model.outcome,)


def _walls(S: NumericalSurface, f: AffineDivisorMap, trace: MMPTrace) -> set:
    """Hyperplanes in parameter space where the MMP or the model check can change."""
    walls = set()
    cur, g = S, f.shift(S.K)
    stages = [(S, g)]
    for step in trace.steps:
        cur, _ = contract(cur, step.index)
        g = g.push(step.pushforward)
        stages.append((cur, g))
    for surf, h in stages:
        for c in surf.mori_curves + tuple(surf.basis(i) for i in range(surf.r)):
            w = [dot(row, c) for row in surf.Q]
            hs = _pairing_halfspace(w, h)
            if isinstance(hs, HalfSpace):
                walls.add(hs.canonical())
    # coefficients of D - f^* f_* D, which is linear in D
    base = discrepancy(S, trace, add(S.K, f.base))
    cols = [discrepancy(S, trace, v) for v in f.linear]
    for i in range(S.r):
        normal = tuple(col[i] for col in cols)
        if any(normal):
            walls.add(halfspace(normal, base[i]))
    return walls


def _split(cells: list[Polytope], wall: HalfSpace, dim: int) -> list[Polytope]:
    out = []
    for cell in cells:
        vals = [wall.value(v) for v in cell.vertices]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            out.append(cell)
            continue
        for h in (wall, wall.flipped()):
            piece = intersect_halfspace(cell, h)
            if piece.dim == dim:
                out.append(piece)
    return out


def wlc_decomposition(S: NumericalSurface, C: Polytope, delta_map: AffineDivisorMap) -> list[WLCRegion]:
    """Cover the pseudo-effective part of C by polytopes sharing one weak lc model each.

    Cells of the wall arrangement collected from MMP runs at cell barycenters
    are refined until no new wall appears, then cells with equal contraction
    sequences are merged while their union stays convex. Every region is
    checked at its vertices.
    """
    R0 = pseff_region(S, C, delta_map)
    if R0.is_empty:
        raise ValueError("no pseudo-effective boundary in the region")
    dim = R0.dim
    cells = [R0]
    walls: set = set()
    while True:
        new = set()
        traces = []
        for cell in cells:
            t = cell.barycenter()
            tr = run_mmp(S, delta_map(t))
            traces.append(tr)
            new |= _walls(S, delta_map, tr) - walls
        if not new:
            break
        for w in sorted(new, key=lambda h: (h.normal, h.offset)):
            cells = _split(cells, w, dim)
        walls |= new
    regions = [WLCRegion(c, tr) for c, tr in zip(cells, traces)]
    regions = _merge(regions)
    for reg in regions:
        for v in reg.region.vertices:
            if not is_weak_lc_model(S, reg.model, add(S.K, delta_map(v))):
                raise VerificationError(f"model {reg.key} fails at vertex {v}")
    return sorted(regions, key=lambda g: (g.key, g.region.vertices))


def _merge(regions: list[WLCRegion]) -> list[WLCRegion]:
    regions = list(regions)
    merged = True
    while merged:
        merged = False
        for a, b in itertools.combinations(range(len(regions)), 2):
            A, B = regions[a], regions[b]
            if A.key != B.key:
                continue
            hull = convex_hull(A.region.vertices + B.region.vertices)
            if uncovered_point(hull, [A.region, B.region]) is None:
                regions[a] = WLCRegion(hull, A.model)
                del regions[b]
                merged = True
                break
    return regions
