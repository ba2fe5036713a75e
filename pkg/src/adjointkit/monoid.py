"""Multigraded lattice-point monoids and generator bookkeeping between them.

An element is a flat integer tuple: ``n`` multidegree entries followed by
``k`` payload entries. Each monoid carries positive integer ``weights`` on
the multidegree coordinates; "degree" always means the weighted total
degree. Re-indexing operations (reweighting, adding a diagonal coordinate)
adjust the weights so that an element keeps its degree, which lets
"verified up to degree N" statements compose across the constructions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .errors import VerificationError
from .geometry import Polytope, convex_hull, lattice_points, minkowski_sum
from .linalg import denominator_lcm, primitive, rank

Element = tuple  # tuple[int, ...]


class NotPointedError(ValueError):
    """The cone contains a line, so its lattice points have no finite basis."""


def as_element(x: Iterable, size: int) -> Element:
    out = []
    for c in x:
        c = Fraction(c) if not isinstance(c, (int, Fraction)) else c
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError(f"non-integer entry {c}")
            c = c.numerator
        out.append(int(c))
    if len(out) != size:
        raise ValueError(f"element has {len(out)} entries, expected {size}")
    return tuple(out)


def _add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


class Monoid:
    """Common interface: membership, bounded enumeration, bounded generators."""

    n: int
    k: int
    weights: tuple

    @property
    def size(self) -> int:
        return self.n + self.k

    @property
    def zero(self) -> Element:
        return (0,) * self.size

    def degree(self, x: Sequence[int]) -> int:
        return sum(w * m for w, m in zip(self.weights, x[: self.n]))

    def contains(self, x: Sequence) -> bool:
        raise NotImplementedError

    def elements_up_to(self, N: int) -> frozenset:
        raise NotImplementedError

    def generator_bound(self) -> int | None:
        """A degree that every minimal generator is known not to exceed, if any."""
        return None

    def irreducibles_up_to(self, N: int) -> list[Element]:
        return minimal_elements(self.elements_up_to(N), self.degree)

    def _coerce(self, x) -> Element:
        return as_element(x, self.size)

    def _nonneg(self, x: Element) -> bool:
        return all(m >= 0 for m in x[: self.n])


def minimal_elements(E: Iterable[Element], degree) -> list[Element]:
    """Irreducible elements of a degree-bounded, downward-closed piece of a monoid.

    ``E`` must contain every monoid element of degree at most the largest
    degree present; an element is reducible exactly when subtracting some
    smaller irreducible stays inside ``E``.
    """
    E = set(E)
    nonzero = sorted((x for x in E if any(x)), key=lambda x: (degree(x), x))
    irr: list[Element] = []
    for x in nonzero:
        if not any(_sub(x, g) in E for g in irr):
            irr.append(x)
    return sorted(irr)


class Span:
    """All elements of degree <= N generated by a growing list of generators."""

    def __init__(self, n: int, weights: Sequence[int], N: int, generators: Iterable = (), *, size: int):
        self.n = n
        self.weights = tuple(weights)
        self.N = N
        self.generators: list[Element] = []
        self.elements: set = {(0,) * size}
        for g in generators:
            self.add(g)

    def degree(self, x) -> int:
        return sum(w * m for w, m in zip(self.weights, x[: self.n]))

    def add(self, g: Element) -> None:
        g = tuple(g)
        if not any(g):
            return
        self.generators.append(g)
        dg = self.degree(g)
        if dg <= 0:
            raise ValueError(f"generator {g} has non-positive degree")
        old = set(self.elements)
        for s in old:
            ds = self.degree(s) + dg
            t = _add(s, g)
            while ds <= self.N and t not in old:
                self.elements.add(t)
                t = _add(t, g)
                ds += dg

    def __contains__(self, x) -> bool:
        return tuple(x) in self.elements


class GradedMonoid(Monoid):
    """The monoid generated by explicit elements.

    Zero-multidegree generators must have zero payload (the degree-zero
    piece is the base field) and are dropped.
    """

    def __init__(self, n: int, k: int, generators: Iterable, weights: Sequence[int] | None = None):
        self.n, self.k = int(n), int(k)
        if self.n < 0 or self.k < 0:
            raise ValueError("n and k must be non-negative")
        self.weights = tuple(int(w) for w in weights) if weights is not None else (1,) * self.n
        if len(self.weights) != self.n or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be n positive integers")
        gens = set()
        for g in generators:
            g = self._coerce(g)
            if not self._nonneg(g):
                raise ValueError(f"generator {g} has a negative multidegree entry")
            if not any(g[: self.n]):
                if any(g):
                    raise ValueError(f"generator {g} has zero multidegree but nonzero payload")
                continue
            gens.add(g)
        self.generators: tuple = tuple(sorted(gens))
        self._span: Span | None = None
        self._memo: dict = {}

    def __repr__(self):
        return f"GradedMonoid(n={self.n}, k={self.k}, generators={list(self.generators)})"

    def generator_bound(self) -> int:
        return max((self.degree(g) for g in self.generators), default=0)

    def contains(self, x) -> bool:
        x = self._coerce(x)
        return self._member(x)

    def _member(self, x: Element) -> bool:
        if not self._nonneg(x):
            return False
        if not any(x):
            return True
        if not any(x[: self.n]):
            return False
        hit = self._memo.get(x)
        if hit is None:
            hit = any(self._member(_sub(x, g)) for g in self.generators)
            self._memo[x] = hit
        return hit

    def elements_up_to(self, N: int) -> frozenset:
        if self._span is None or self._span.N < N:
            self._span = Span(self.n, self.weights, N, self.generators, size=self.size)
            self._cached = frozenset(self._span.elements)
        if self._span.N == N:
            return self._cached
        return frozenset(x for x in self._span.elements if self.degree(x) <= N)


class ReweightedView(Monoid):
    """Elements of M whose i-th multidegree is divisible by d_i, divided through."""

    def __init__(self, M: Monoid, d: Sequence[int]):
        d = tuple(int(x) for x in d)
        if len(d) != M.n:
            raise ValueError(f"weight vector has {len(d)} entries, expected {M.n}")
        if any(x <= 0 for x in d):
            raise ValueError("reweighting factors must be positive")
        self.base, self.d = M, d
        self.n, self.k = M.n, M.k
        self.weights = tuple(w * x for w, x in zip(M.weights, d))

    def lift(self, x: Element) -> Element:
        return tuple(m * di for m, di in zip(x[: self.n], self.d)) + tuple(x[self.n:])

    def contains(self, x) -> bool:
        x = self._coerce(x)
        return self._nonneg(x) and self.base.contains(self.lift(x))

    def elements_up_to(self, N: int) -> frozenset:
        out = set()
        for x in self.base.elements_up_to(N):
            if all(m % di == 0 for m, di in zip(x[: self.n], self.d)):
                out.add(tuple(m // di for m, di in zip(x[: self.n], self.d)) + x[self.n:])
        return frozenset(out)

    def generator_bound(self) -> int | None:
        b = self.base.generator_bound()
        return None if b is None else davenport_bound(self.d) * b


class AugmentedMonoid(Monoid):
    """Adds a coordinate b; (a, b; v) stands for the element (a + b*e; v) of M.

    ``support`` lists the 0-based coordinates making up e.
    """

    def __init__(self, M: Monoid, support: Sequence[int]):
        support = tuple(sorted(set(int(i) for i in support)))
        if not support:
            raise ValueError("e must have nonempty support")
        if any(i < 0 or i >= M.n for i in support):
            raise ValueError(f"support {support} out of range for n={M.n}")
        self.base, self.support = M, support
        self.n, self.k = M.n + 1, M.k
        self.weights = M.weights + (sum(M.weights[i] for i in support),)

    def collapse(self, x: Element) -> Element:
        """The M-element represented by an element of the augmented monoid."""
        b = x[self.n - 1]
        a = list(x[: self.n - 1])
        for i in self.support:
            a[i] += b
        return tuple(a) + tuple(x[self.n:])

    def contains(self, x) -> bool:
        x = self._coerce(x)
        return self._nonneg(x) and self.base.contains(self.collapse(x))

    def elements_up_to(self, N: int) -> frozenset:
        out = set()
        m = self.base.n
        for x in self.base.elements_up_to(N):
            top = min(x[i] for i in self.support)
            for b in range(top + 1):
                a = list(x[:m])
                for i in self.support:
                    a[i] -= b
                out.add(tuple(a) + (b,) + x[m:])
        return frozenset(out)


class CayleyMonoid(Monoid):
    """Pairs (m; u) with u a lattice point of the Minkowski sum of m_i P_i."""

    def __init__(self, polygons: Sequence[Polytope], weights: Sequence[int] | None = None):
        polygons = list(polygons)
        if not polygons:
            raise ValueError("need at least one polygon")
        if any(P.is_empty for P in polygons):
            raise ValueError("empty polygon")
        if len({P.ambient for P in polygons}) != 1:
            raise ValueError("polygons live in different lattices")
        self.polygons = polygons
        self.n, self.k = len(polygons), polygons[0].ambient
        self.weights = tuple(weights) if weights is not None else (1,) * self.n
        self._slices: dict = {}

    def slice(self, m: Sequence[int]) -> Polytope:
        m = tuple(m)
        P = self._slices.get(m)
        if P is None:
            P = minkowski_sum(self.polygons, m)
            self._slices[m] = P
        return P

    def contains(self, x) -> bool:
        x = self._coerce(x)
        if not self._nonneg(x):
            return False
        m, u = x[: self.n], x[self.n:]
        if not any(m):
            return not any(u)
        return self.slice(m).contains(u)

    def elements_up_to(self, N: int) -> frozenset:
        out = {self.zero}
        for m in itertools.product(*(range(N // w + 1) for w in self.weights)):
            if any(m) and self.degree(m) <= N:
                out.update(m + u for u in lattice_points(self.slice(m)))
        return frozenset(out)

    def rays(self) -> list[tuple[int, ...]]:
        """Integer generators of the Cayley cone, scaled to clear vertex denominators."""
        out = []
        for i, P in enumerate(self.polygons):
            d = denominator_lcm(c for v in P.vertices for c in v)
            for v in P.vertices:
                e = tuple(d if j == i else 0 for j in range(self.n))
                out.append(e + tuple(int(c * d) for c in v))
        return out

    def generator_bound(self) -> int:
        degs = []
        for r in self.rays():
            g = math.gcd(*r)
            degs.append(self.degree(r) // g)
        rk = rank([list(r) for r in self.rays()])
        return max(max(degs), sum(sorted(degs, reverse=True)[:rk]))


# -- generator sets ---------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSet:
    """Distinct elements with a lineage tag for each."""

    elements: tuple
    provenance: tuple = ()

    def __post_init__(self):
        elems = tuple(tuple(int(c) for c in x) for x in self.elements)
        prov = tuple(self.provenance) or ("",) * len(elems)
        if len(prov) != len(elems):
            raise ValueError("one provenance tag per element")
        if len(set(elems)) != len(elems):
            raise ValueError("duplicate generators")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "provenance", prov)

    @classmethod
    def build(cls, pairs: Iterable[tuple]) -> "GeneratorSet":
        """From (element, tag) pairs, keeping the first tag of a repeated element."""
        seen: dict = {}
        for x, tag in pairs:
            seen.setdefault(tuple(int(c) for c in x), tag)
        return cls(tuple(seen), tuple(seen.values()))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return tuple(x) in self.elements

    def non_members(self, M: Monoid) -> list[Element]:
        return [x for x in self.elements if not M.contains(x)]


def _elements(G) -> list[Element]:
    return list(G.elements) if isinstance(G, GeneratorSet) else [tuple(x) for x in G]


def membership(M: Monoid, x: Sequence) -> bool:
    """Exact decision whether x lies in M."""
    if len(x) != M.size:
        raise ValueError(f"element has {len(x)} entries, monoid elements have {M.size}")
    return M.contains(x)


def generation_gap(M: Monoid, G, N: int) -> Element | None:
    """First witness that G fails to generate M up to degree N, or None.

    The witness is either a generator outside M or an element of M of degree
    at most N that is not a non-negative integer combination of G.
    """
    gens = _elements(G)
    for g in gens:
        if not M.contains(g):
            return g
    span = Span(M.n, M.weights, N, gens, size=M.size)
    for x in sorted(M.elements_up_to(N), key=lambda x: (M.degree(x), x)):
        if x not in span:
            return x
    return None


def is_generated_up_to(M: Monoid, G, N: int) -> bool:
    return generation_gap(M, G, N) is None


# -- truncation and reweighting ---------------------------------------------

def invariant_factors(d: Sequence[int]) -> list[int]:
    """Invariant factors n_1 | n_2 | ... of the direct sum of Z/d_i (ones dropped)."""
    exps: dict = {}
    for x in d:
        p = 2
        while x > 1:
            if p * p > x:
                exps.setdefault(x, []).append(1)
                break
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            if e:
                exps.setdefault(p, []).append(e)
            p += 1
    width = max((len(v) for v in exps.values()), default=0)
    factors = [1] * width
    for p, es in exps.items():
        for j, e in enumerate(sorted(es, reverse=True)):
            factors[j] *= p ** e
    return sorted(f for f in factors if f > 1)


def davenport_bound(d: Sequence[int]) -> int:
    """Upper bound for the Davenport constant of the direct sum of Z/d_i.

    Exact for cyclic groups, rank-two groups and p-groups; otherwise the
    classical exponent bound, capped by the group order.
    """
    f = invariant_factors(d)
    if not f:
        return 1
    if len(f) == 1:
        return f[0]
    if len(f) == 2:
        return f[0] + f[1] - 1
    order = math.prod(f)
    if _is_prime_power(order):
        return 1 + sum(x - 1 for x in f)
    ex = f[-1]
    return min(order, math.floor(ex * (1 + math.log(order / ex)) + 1e-9))


def _is_prime_power(x: int) -> bool:
    p = next(q for q in range(2, x + 1) if x % q == 0)
    while x % p == 0:
        x //= p
    return x == 1


def reweight(M: Monoid, d: Sequence[int], max_degree: int | None = None) -> GradedMonoid:
    """Generators of the sub-monoid with multidegrees in d_1 Z x ... x d_n Z, re-indexed.

    A minimal generator of the result is a sum of at most D(G) generators
    of M, where D is the Davenport constant of G = sum of Z/d_i, which
    bounds the enumeration. ``max_degree`` caps it (and is required when M
    has no known generator bound).
    """
    view = ReweightedView(M, d)
    bound = view.generator_bound()
    if max_degree is not None:
        bound = max_degree if bound is None else min(bound, max_degree)
    if bound is None:
        raise ValueError("monoid has no generator bound; pass max_degree")
    return GradedMonoid(M.n, M.k, view.irreducibles_up_to(bound), weights=view.weights)


def truncate(M: Monoid, d: int, max_degree: int | None = None) -> GradedMonoid:
    if int(d) <= 0:
        raise ValueError("truncation degree must be positive")
    return reweight(M, (int(d),) * M.n, max_degree)


@dataclass(frozen=True)
class FgWitness:
    """Bounded-degree evidence that M is generated by ambient elements plus residues."""

    generators: GeneratorSet
    residues: tuple
    lattice_covered: bool
    missing: Element | None
    N: int

    @property
    def verified(self) -> bool:
        return self.lattice_covered and self.missing is None


def truncation_implies_fg(M: Monoid, d, ambient_gens, N: int) -> FgWitness:
    """Recover generators of M from generators of a truncation, up to degree N.

    ``ambient_gens`` are M-elements whose span should contain every element
    with multidegree in the d-lattice. All residue elements (every
    m_i < d_i) are adjoined, the result is minimalized and then checked
    against direct enumeration of M.
    """
    d = (int(d),) * M.n if isinstance(d, int) else tuple(int(x) for x in d)
    if len(d) != M.n or any(x <= 0 for x in d):
        raise ValueError(f"bad truncation degree {d}")
    ambient = [g for g in _elements(ambient_gens) if any(g)]
    foreign = [g for g in ambient if not M.contains(g)]
    E = sorted(M.elements_up_to(N), key=lambda x: (M.degree(x), x))
    span = Span(M.n, M.weights, N, ambient, size=M.size)
    covered = not foreign and all(
        x in span for x in E if all(m % di == 0 for m, di in zip(x[: M.n], d)))
    residues = [x for x in E if any(x[: M.n]) and all(m < di for m, di in zip(x[: M.n], d))]
    for x in residues:
        if x not in span:
            span.add(x)
    # small residues need not suffice: M is generated by the truncation plus its module
    # generators over it, and those can sit above d. Walking up in degree, anything
    # off the lattice that is still unreached is such a module generator.
    for x in E:
        if x not in span and not all(m % di == 0 for m, di in zip(x[: M.n], d)):
            residues.append(x)
            span.add(x)
    missing = next((x for x in E if x not in span), None)
    adjoined = set(residues)
    minimal = minimal_elements(span.elements, M.degree)
    gens = GeneratorSet(tuple(minimal), tuple("residue" if g in adjoined else "ambient" for g in minimal))
    return FgWitness(gens, tuple(residues), covered, missing, N)


def fg_equivalence_check(M: Monoid, d: Sequence[int], N: int) -> dict:
    """Check that M and its reweighting determine each other's pieces up to degree N."""
    d = tuple(int(x) for x in d)
    view = ReweightedView(M, d)
    gens_M = M.irreducibles_up_to(N)
    gens_R = view.irreducibles_up_to(N)
    # M's generators determine the reweighted pieces
    span = Span(M.n, M.weights, N, gens_M, size=M.size)
    from_M = {view_x for view_x in (
        tuple(m // di for m, di in zip(x[: M.n], d)) + x[M.n:]
        for x in span.elements if all(m % di == 0 for m, di in zip(x[: M.n], d)))}
    forward = from_M == set(view.elements_up_to(N))
    # the reweighted generators, plus residues, determine M
    backward = truncation_implies_fg(M, d, [view.lift(g) for g in gens_R], N).verified
    return {
        "N": N,
        "d": list(d),
        "generators": [list(g) for g in gens_M],
        "reweighted_generators": [list(g) for g in gens_R],
        "forward": forward,
        "backward": backward,
        "consistent": forward and backward,
    }


# -- the augmented monoid ---------------------------------------------------

def augment(M: Monoid, e_support: Sequence[int]) -> AugmentedMonoid:
    return AugmentedMonoid(M, e_support)


def lift_generators(rbar_gens: Sequence, e_support: Sequence[int], M: Monoid, bound: int = 8) -> GeneratorSet:
    """Generators of the augmented monoid from generators of its coordinate faces.

    ``rbar_gens[i]`` must generate the elements of ``augment(M, e_support)``
    whose ``e_support[i]``-th multidegree vanishes. A generator (a, b; v)
    contributes the family (a + (b - s) e, s; v) for 0 <= s <= b.
    """
    Rbar = AugmentedMonoid(M, e_support)
    support = list(e_support)
    if len(rbar_gens) != len(support):
        raise ValueError("one generator set per support coordinate")
    everything = Rbar.elements_up_to(bound)
    pairs = []
    for i, (j, G) in enumerate(zip(support, rbar_gens), start=1):
        gens = _elements(G)
        face = [x for x in everything if x[j] == 0]
        for g in gens:
            if len(g) != Rbar.size or not Rbar.contains(g) or g[j] != 0:
                raise ValueError(f"{g} is not in the face with coordinate {j} zero")
        if not gens and any(any(x) for x in face):
            raise ValueError(f"empty generator set for nonzero face {i}")
        span = Span(Rbar.n, Rbar.weights, bound, gens, size=Rbar.size)
        gap = next((x for x in sorted(face, key=Rbar.degree) if x not in span), None)
        if gap is not None:
            raise ValueError(f"generator set {i} misses {gap} of its face")
        for jj, g in enumerate(gens, start=1):
            b = g[Rbar.n - 1]
            c = Rbar.collapse(g)
            for s in range(b + 1):
                deg = list(c[: M.n])
                for t in Rbar.support:
                    deg[t] -= s
                pairs.append((tuple(deg) + (s,) + c[M.n:], f"g_{{{i},{jj}}}(s={s})"))
    out = GeneratorSet.build(pairs)
    gap = generation_gap(Rbar, out, bound)
    if gap is not None:
        raise VerificationError(f"lifted generators miss {gap}")
    return out


# -- cones and section rings of nef divisors ----------------------------------

def hilbert_basis(cone_generators: Sequence[Sequence[int]]) -> list[Element]:
    """Minimal generating set of the lattice points in a pointed rational cone."""
    rays = [tuple(int(c) for c in primitive(r)) for r in cone_generators if any(r)]
    if not rays:
        return []
    ell = lp.positive_functional(rays)
    if ell is None:
        raise NotPointedError("cone is not pointed")
    ell = tuple(int(c) for c in primitive(ell))
    val = lambda x: sum(a * b for a, b in zip(ell, x))
    vals = [val(r) for r in rays]
    B = max(max(vals), sum(sorted(vals, reverse=True)[: rank([list(r) for r in rays])]))
    Q = convex_hull([(0,) * len(rays[0])] + [tuple(Fraction(B * c, v) for c in r) for r, v in zip(rays, vals)])
    pts = sorted((p for p in lattice_points(Q) if any(p)), key=lambda x: (val(x), x))
    irr: list[Element] = []
    for x in pts:
        if not any(Q.contains(_sub(x, g)) for g in irr):
            irr.append(x)
    return sorted(irr)


def semiample_generators(polygons: Sequence[Polytope], max_degree: int | None = None) -> GeneratorSet:
    """Minimal generators of the ring with pieces the lattice points of sum m_i P_i.

    The Cayley cone bound makes the set complete; ``max_degree`` keeps only
    generators up to that degree when nothing higher will be used.
    """
    C = CayleyMonoid(polygons)
    bound = C.generator_bound()
    if max_degree is not None:
        bound = min(bound, max_degree)
    gens = C.irreducibles_up_to(bound)
    return GeneratorSet(tuple(gens), ("cayley",) * len(gens))


# -- transfer across a simplex cover ----------------------------------------

@dataclass(frozen=True)
class TransferMatrices:
    """Rows of a express one vertex set in the other (scaled by p); b the reverse (scaled by q)."""

    a: tuple
    b: tuple
    p: int
    q: int

    def __post_init__(self):
        a = tuple(tuple(int(x) for x in row) for row in self.a)
        b = tuple(tuple(int(x) for x in row) for row in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        n = len(a)
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")
        if len(b) != n or any(len(r) != n for r in a + b):
            raise ValueError("a and b must be square of the same size")
        if any(x < 0 for r in b for x in r):
            raise ValueError("b must be non-negative")
        if any(sum(r) != self.p for r in a):
            raise ValueError("rows of a must sum to p")
        if any(sum(r) != self.q for r in b):
            raise ValueError("rows of b must sum to q")
        pq = self.p * self.q
        for i in range(n):
            for k in range(n):
                if sum(a[i][j] * b[j][k] for j in range(n)) != (pq if i == k else 0):
                    raise ValueError("a.b is not pq times the identity")

    @property
    def n(self) -> int:
        return len(self.a)

    def regrade(self, m: Sequence[int]) -> tuple:
        """Degree in the target ring of a q-truncated vertex-ring degree m."""
        return tuple(sum(self.b[i][j] * m[i] for i in range(self.n)) for j in range(self.n))


@dataclass(frozen=True)
class TransferResult:
    generators: GeneratorSet
    images: tuple
    witness: FgWitness


def simplex_transfer(vertex_rings: Sequence, T, M: Monoid, N: int,
                     vertex_monoids: Sequence[Monoid] | None = None,
                     max_degree: int | None = None) -> TransferResult:
    """Generators of M assembled from generators of the rings on each cover simplex.

    ``T`` is one TransferMatrices per vertex ring (or a single one shared by
    all). Each vertex ring is truncated by q, its generators are re-graded
    through b, and the images are completed to generators of M by adjoining
    residues; everything is checked up to degree N.
    """
    if isinstance(T, TransferMatrices):
        T = [T] * len(vertex_rings)
    if len(T) != len(vertex_rings):
        raise ValueError("one transfer matrix pair per vertex ring")
    pairs = []
    for lam, (G, t) in enumerate(zip(vertex_rings, T)):
        if t.n != M.n:
            raise ValueError("transfer matrices do not match the grading rank")
        if vertex_monoids is not None:
            gap = generation_gap(vertex_monoids[lam], G, N)
            if gap is not None:
                raise VerificationError(f"vertex ring {lam} not generated: {gap}")
        R = GradedMonoid(M.n, M.k, _elements(G))
        for g in truncate(R, t.q, max_degree).generators:
            image = t.regrade(g[: M.n]) + g[M.n:]
            if not M.contains(image):
                raise VerificationError(f"image {image} of {g} is not in the target ring")
            pairs.append((image, f"tau_{lam}{g}"))
    images = GeneratorSet.build(pairs)
    pq = {t.p * t.q for t in T}
    if len(pq) != 1:
        raise ValueError("all transfer matrices must share p*q")
    witness = truncation_implies_fg(M, pq.pop(), images, N)
    if not witness.verified:
        raise VerificationError(f"transferred generators fail: missing {witness.missing}")
    return TransferResult(witness.generators, tuple(images.elements), witness)
