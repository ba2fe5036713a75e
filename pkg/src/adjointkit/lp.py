"""Exact feasibility LP (phase-one simplex over the rationals).

Everything here answers questions of the form "is there x >= 0 with A x = b",
which covers hull membership, cone membership and pointedness tests.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .linalg import ONE, ZERO, rat


def feasible_point(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Return a basic x >= 0 with A x = b, or None if none exists.

    Phase one of the simplex method with Bland's rule, so it terminates and
    the answer is exact.
    """
    m = len(A)
    if m == 0:
        return ()
    n = len(A[0])
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        row = [rat(x) for x in row]
        bi = rat(bi)
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row)
        rhs.append(bi)
    # tableau columns: n originals, m artificials
    width = n + m
    T = [rows[i] + [ONE if j == i else ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # objective: minimise sum of artificials -> reduced costs
    cost = [ZERO] * (width + 1)
    for i in range(m):
        for j in range(n):
            cost[j] -= T[i][j]
        cost[width] -= T[i][width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:  # cannot happen in phase one (bounded below by 0)
            break
        _pivot(T, cost, leave, enter)
        basis[leave] = enter

    if cost[width] != 0:
        return None
    x = [ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = T[i][width]
    return tuple(x)


def _pivot(T, cost, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, T[r])]


def convex_coefficients(points: Sequence[Sequence], x: Sequence) -> tuple[Fraction, ...] | None:
    """Non-negative weights summing to one with sum(w_i p_i) = x, or None."""
    if not points:
        return None
    dim = len(x)
    A = [[p[r] for p in points] for r in range(dim)]
    A.append([ONE] * len(points))
    return feasible_point(A, list(x) + [ONE])


def cone_coefficients(generators: Sequence[Sequence], x: Sequence) -> tuple[Fraction, ...] | None:
    """Non-negative weights with sum(w_i g_i) = x, or None."""
    dim = len(x)
    if not generators:
        return () if all(v == 0 for v in x) else None
    A = [[g[r] for g in generators] for r in range(dim)]
    return feasible_point(A, list(x))


def positive_functional(generators: Sequence[Sequence]) -> tuple[Fraction, ...] | None:
    """A linear form l with l(g) >= 1 for every generator, if the cone is pointed."""
    dim = len(generators[0])
    k = len(generators)
    # l = u - w with u, w >= 0; l.g_i - s_i = 1 with s_i >= 0
    A = []
    for i, g in enumerate(generators):
        row = [rat(c) for c in g] + [-rat(c) for c in g] + [(-ONE if j == i else ZERO) for j in range(k)]
        A.append(row)
    sol = feasible_point(A, [ONE] * k)
    if sol is None:
        return None
    return tuple(sol[i] - sol[dim + i] for i in range(dim))
