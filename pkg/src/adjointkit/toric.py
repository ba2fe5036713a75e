"""Toric section model: divisors as support data on a fan, sections as lattice points.

For a divisor D = sum D_rho [rho] on a complete fan with primitive rays
v_rho, the sections of the round-down of D are the lattice points of
{u : <u, v_rho> + D_rho >= 0 for every rho}. Curves of the numerical
surface correspond to rays; contracting a curve removes its ray.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .geometry import Polytope, halfspace, polytope_from_halfspaces
from .linalg import ZERO, QVec, add, det, dot, scale, solve, vec
from .monoid import Monoid
from .surface import NumericalSurface


@dataclass(frozen=True)
class ToricModel:
    rays: tuple
    names: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(c) for c in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))
        if len(self.names) != len(rays):
            raise ValueError("one name per ray")
        if not rays or len({len(r) for r in rays}) != 1:
            raise ValueError("rays must be nonempty and of equal length")
        dim = len(rays[0])
        for i in range(dim):
            for s in (1, -1):
                e = tuple(s if j == i else 0 for j in range(dim))
                if lp.cone_coefficients(rays, e) is None:
                    raise ValueError("rays do not span a complete fan")

    @property
    def dim(self) -> int:
        return len(self.rays[0])

    def restrict(self, names: Sequence[str]) -> "ToricModel":
        """The model after contracting every curve not listed."""
        idx = [self.names.index(n) for n in names]
        return ToricModel(tuple(self.rays[i] for i in idx), tuple(names))

    def polygon(self, D: Sequence) -> Polytope:
        D = vec(D)
        if len(D) != len(self.rays):
            raise ValueError(f"divisor has {len(D)} coefficients, model has {len(self.rays)} rays")
        hs = [halfspace(r, c) for r, c in zip(self.rays, D)]
        return polytope_from_halfspaces(hs, self.dim, assume_bounded=True)

    def sections(self, D: Sequence) -> list[tuple[int, ...]]:
        D = vec(D)
        if len(D) != len(self.rays):
            raise ValueError(f"divisor has {len(D)} coefficients, model has {len(self.rays)} rays")
        return list(_sections(self.rays, tuple(math.floor(c) for c in D)))

    def principal(self, u: Sequence[int]) -> QVec:
        """The divisor of the character u."""
        return tuple(Fraction(sum(a * b for a, b in zip(u, r))) for r in self.rays)


@functools.lru_cache(maxsize=None)
def _sections(rays: tuple, floors: tuple) -> tuple:
    """Integer u with <u, v> + floor(D_v) >= 0 for every ray v."""
    k = len(rays[0])
    corners = []
    for combo in itertools.combinations(range(len(rays)), k):
        A = [rays[i] for i in combo]
        if det(A) == 0:
            continue
        x = solve(A, [-floors[i] for i in combo])
        if all(dot(r, x) + f >= 0 for r, f in zip(rays, floors)):
            corners.append(x)
    if not corners:
        return ()
    lo = [math.ceil(min(c[i] for c in corners)) for i in range(k)]
    hi = [math.floor(max(c[i] for c in corners)) for i in range(k)]
    out = []
    for u in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(sum(a * b for a, b in zip(r, u)) + f >= 0 for r, f in zip(rays, floors)):
            out.append(u)
    return tuple(out)


def _ccw_order(rays: Sequence[tuple]) -> list[int]:
    def key(i):
        x, y = rays[i]
        upper = y > 0 or (y == 0 and x > 0)
        return 0 if upper else 1

    order = list(range(len(rays)))
    # insertion sort with the exact angular comparison
    out: list[int] = []
    for i in order:
        pos = len(out)
        for j, o in enumerate(out):
            if _before(rays[i], rays[o], key(i), key(o)):
                pos = j
                break
        out.insert(pos, i)
    return out


def _before(a, b, ha, hb) -> bool:
    if ha != hb:
        return ha < hb
    return a[0] * b[1] - a[1] * b[0] > 0


def toric_surface(rays: Sequence[Sequence[int]], K: Sequence, names: Sequence[str] | None = None):
    """A numerical surface and its section model from a complete fan.

    In dimension two the intersection matrix comes from the fan; in
    dimension one (a curve) it is zero and no nef conditions are imposed.
    ``K`` is taken as given so that twisted canonical classes can be used.
    """
    names = tuple(names) if names is not None else tuple(f"D{i + 1}" for i in range(len(rays)))
    model = ToricModel(tuple(tuple(r) for r in rays), names)
    r = len(model.rays)
    Q = [[ZERO] * r for _ in range(r)]
    if model.dim == 2:
        order = _ccw_order(model.rays)
        for pos, i in enumerate(order):
            prev, nxt = order[pos - 1], order[(pos + 1) % r]
            v0, v1, v2 = model.rays[prev], model.rays[i], model.rays[nxt]
            d01, d12 = det([v0, v1]), det([v1, v2])
            if d01 <= 0 or d12 <= 0:
                raise ValueError("consecutive rays must span strictly convex cones")
            Q[i][i] = -det([v0, v2]) / (d01 * d12)
            Q[i][nxt] = Q[nxt][i] = 1 / d12
    elif model.dim != 1:
        raise ValueError("only curves and surfaces are supported")
    units = [tuple(Fraction(int(a == b)) for b in range(r)) for a in range(r)]
    eff = list(units)
    for i in range(model.dim):
        u = tuple(int(j == i) for j in range(model.dim))
        p = model.principal(u)
        eff += [p, scale(-1, p)]
    mori = units if model.dim == 2 else []
    S = NumericalSurface(names, Q, K, eff, mori)
    return S, model


class AdjointMonoid(Monoid):
    """Pairs (m; u) with u a section of sum m_i D_i, i.e. a lattice point of its polygon."""

    def __init__(self, model: ToricModel, divisors: Sequence[Sequence], weights: Sequence[int] | None = None):
        self.model = model
        self.divisors = tuple(vec(D) for D in divisors)
        if any(len(D) != len(model.rays) for D in self.divisors):
            raise ValueError("divisor length does not match the model")
        self.n, self.k = len(self.divisors), model.dim
        self.weights = tuple(weights) if weights is not None else (1,) * self.n
        self._cache: dict = {}

    @classmethod
    def adjoint(cls, model: ToricModel, K: Sequence, deltas: Sequence[Sequence]) -> "AdjointMonoid":
        K = vec(K)
        return cls(model, [add(K, vec(d)) for d in deltas])

    def divisor(self, m: Sequence[int]) -> QVec:
        out = tuple(ZERO for _ in self.model.rays)
        for c, D in zip(m, self.divisors):
            if c:
                out = add(out, scale(c, D))
        return out

    def slice(self, m: Sequence[int]) -> frozenset:
        m = tuple(m)
        pts = self._cache.get(m)
        if pts is None:
            pts = frozenset(self.model.sections(self.divisor(m))) if any(m) else frozenset([(0,) * self.k])
            self._cache[m] = pts
        return pts

    def contains(self, x) -> bool:
        x = self._coerce(x)
        if not self._nonneg(x):
            return False
        return x[self.n:] in self.slice(x[: self.n])

    def elements_up_to(self, N: int) -> frozenset:
        out = set()
        for m in itertools.product(*(range(N // w + 1) for w in self.weights)):
            if self.degree(m) <= N:
                out.update(m + u for u in self.slice(m))
        return frozenset(out)
