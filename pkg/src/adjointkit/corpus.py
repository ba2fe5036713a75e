"""Small named toric instances used by the tests, the acceptance suite and the CLI demo."""
from __future__ import annotations

from fractions import Fraction as F

from .pipeline import AdjointInstance
from .toric import toric_surface

P1 = [(1,), (-1,)]
P1xP1 = [(1, 0), (0, 1), (-1, 0), (0, -1)]
# Hirzebruch F_1; the second ray is the (-1)-curve
F1 = [(1, 0), (1, 1), (0, 1), (-1, -1)]


def segment() -> AdjointInstance:
    """One boundary on P^1 whose adjoint polygon is [0, 2]."""
    S, T = toric_surface(P1, (0, 1))
    return AdjointInstance(S, [(0, 1)], T)


def duplicate_pair() -> AdjointInstance:
    """The segment instance with its boundary listed twice."""
    S, T = toric_surface(P1, (0, 1))
    return AdjointInstance(S, [(0, 1), (0, 1)], T)


def interior_point() -> AdjointInstance:
    """Three boundaries on P^1, the last the midpoint of the first two."""
    S, T = toric_surface(P1, (0, 0))
    return AdjointInstance(S, [(0, 1), (1, 0), (F(1, 2), F(1, 2))], T)


def blowup_wall() -> AdjointInstance:
    """Two boundaries on F_1: one meets the (-1)-curve negatively, one is nef."""
    S, T = toric_surface(F1, (0, 0, 0, 1))
    return AdjointInstance(S, [(0, 1, 0, 0), (1, 0, 0, 0)], T)


def blowup_triangle() -> AdjointInstance:
    """Three boundaries on F_1 spanning a triangle crossed by the contraction wall."""
    S, T = toric_surface(F1, (0, 0, 0, 1))
    return AdjointInstance(S, [(0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, F(1, 2))], T)


def non_pseff_vertex() -> AdjointInstance:
    """Two boundaries on F_1, the first leaving K + B outside the pseudo-effective cone."""
    S, T = toric_surface(F1, (-1, 0, 0, 0))
    return AdjointInstance(S, [(0, 0, 0, 0), (0, 1, 1, 1)], T)


def square() -> AdjointInstance:
    """Four boundaries on P^1 x P^1 at the corners of a square: needs a common point."""
    S, T = toric_surface(P1xP1, (0, 0, 0, 0))
    return AdjointInstance(S, [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)], T)


ALL = {
    "segment": segment,
    "duplicate-pair": duplicate_pair,
    "interior-point": interior_point,
    "blowup-wall": blowup_wall,
    "blowup-triangle": blowup_triangle,
    "non-pseff-vertex": non_pseff_vertex,
    "square": square,
}
