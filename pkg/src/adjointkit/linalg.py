"""Exact rational linear algebra on tuples of ``Fraction``."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

QVec = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use exact rationals")
    return Fraction(x)


def vec(xs: Iterable) -> QVec:
    return tuple(rat(x) for x in xs)


def dot(u: Sequence, v: Sequence) -> Fraction:
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def add(u: Sequence, v: Sequence) -> QVec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> QVec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> QVec:
    return tuple(c * a for a in u)


def combine(coeffs: Sequence, vectors: Sequence[Sequence]) -> QVec:
    """Linear combination sum(c_i * v_i)."""
    dim = len(vectors[0])
    out = [ZERO] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                out[i] += c * x
    return tuple(out)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = [list(map(rat, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[QVec]:
    """Basis of {x : row . x = 0 for every row}."""
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(ncols)) for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for r, p in zip(red, pivots):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> QVec | None:
    """Some solution of A x = b, or None when inconsistent."""
    ncols = len(A[0]) if A else 0
    aug = [list(map(rat, row)) + [rat(bi)] for row, bi in zip(A, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for r, p in zip(red, pivots):
        x[p] = r[ncols]
    return tuple(x)


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(map(rat, row)) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(M)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), 0) for col in cols] for row in A]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*A)]


def denominator_lcm(xs: Iterable) -> int:
    out = 1
    for x in xs:
        out = lcm(out, rat(x).denominator)
    return out


def primitive(v: Sequence) -> QVec:
    """Scale a nonzero rational vector to coprime integers (sign kept)."""
    v = vec(v)
    m = denominator_lcm(v)
    ints = [int(x * m) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        return v
    return tuple(Fraction(a // g) for a in ints)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def lex_min(points: Iterable[QVec]) -> QVec:
    return min(points)


def is_negative_definite(G: Sequence[Sequence]) -> bool:
    """Sylvester's criterion applied to -G."""
    n = len(G)
    for k in range(1, n + 1):
        if _det([[-rat(G[i][j]) for j in range(k)] for i in range(k)]) <= 0:
            return False
    return True


def _det(M: list[list[Fraction]]) -> Fraction:
    M = [row[:] for row in M]
    n = len(M)
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def det(M: Sequence[Sequence]) -> Fraction:
    return _det([list(map(rat, row)) for row in M])
