"""JSON codecs. Rationals travel as strings ("3", "-1/2") or integers; floats are rejected."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .geometry import Polytope, convex_hull
from .monoid import GeneratorSet, GradedMonoid
from .surface import AffineDivisorMap, NumericalSurface
from .toric import ToricModel


class InputError(ValueError):
    """Malformed or inconsistent JSON input."""


def rat_from(x: Any) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"expected an integer or a 'p/q' string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational {x!r}") from e
    raise InputError(f"expected a rational, got {x!r}")


def rat_str(x: Fraction) -> str:
    return str(Fraction(x))


def qvec_from(xs: Any) -> tuple:
    if not isinstance(xs, list):
        raise InputError(f"expected a list of rationals, got {xs!r}")
    return tuple(rat_from(x) for x in xs)


def qvec_json(v: Sequence) -> list[str]:
    return [rat_str(x) for x in v]


def int_vec_from(xs: Any) -> tuple:
    if not isinstance(xs, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in xs):
        raise InputError(f"expected a list of integers, got {xs!r}")
    return tuple(xs)


def polytope_from(obj: Any) -> Polytope:
    pts = obj.get("vertices") if isinstance(obj, dict) else obj
    if not isinstance(pts, list) or not pts:
        raise InputError("a polytope needs a nonempty vertex list")
    vs = [qvec_from(p) for p in pts]
    if len({len(v) for v in vs}) != 1:
        raise InputError("polytope vertices have different lengths")
    return convex_hull(vs)


def polytope_json(P: Polytope) -> dict:
    return {"dim": P.dim, "vertices": [qvec_json(v) for v in P.vertices]}


def surface_from(obj: dict) -> NumericalSurface:
    try:
        return NumericalSurface(
            tuple(obj["curves"]),
            tuple(qvec_from(row) for row in obj["Q"]),
            qvec_from(obj["K"]),
            tuple(qvec_from(g) for g in obj["effective_cone"]),
            tuple(qvec_from(g) for g in obj["mori_curves"]),
        )
    except KeyError as e:
        raise InputError(f"surface is missing field {e}") from e
    except InputError:
        raise
    except ValueError as e:
        raise InputError(str(e)) from e


def surface_json(S: NumericalSurface) -> dict:
    return {
        "curves": list(S.curves),
        "Q": [qvec_json(r) for r in S.Q],
        "K": qvec_json(S.K),
        "effective_cone": [qvec_json(g) for g in S.effective_cone],
        "mori_curves": [qvec_json(g) for g in S.mori_curves],
    }


def toric_from(obj: dict, names: Sequence[str] | None = None) -> ToricModel:
    try:
        rays = tuple(int_vec_from(r) for r in obj["rays"])
    except KeyError as e:
        raise InputError("toric model needs 'rays'") from e
    names = obj.get("names", names) or [f"D{i + 1}" for i in range(len(rays))]
    try:
        return ToricModel(rays, tuple(names))
    except ValueError as e:
        raise InputError(str(e)) from e


def toric_json(T: ToricModel) -> dict:
    return {"rays": [list(r) for r in T.rays], "names": list(T.names)}


def affine_map_from(obj: dict) -> AffineDivisorMap:
    try:
        return AffineDivisorMap(qvec_from(obj["base"]), tuple(qvec_from(v) for v in obj["linear"]))
    except KeyError as e:
        raise InputError(f"boundary map is missing field {e}") from e


def affine_map_json(f: AffineDivisorMap) -> dict:
    return {"base": qvec_json(f.base), "linear": [qvec_json(v) for v in f.linear]}


def generators_json(G: GeneratorSet) -> dict:
    return {"elements": [list(x) for x in G.elements], "provenance": list(G.provenance)}


def generators_from(obj: Any) -> GeneratorSet:
    if isinstance(obj, list):
        return GeneratorSet(tuple(int_vec_from(x) for x in obj))
    elems = tuple(int_vec_from(x) for x in obj.get("elements", []))
    return GeneratorSet(elems, tuple(obj.get("provenance", ())))


def monoid_from(obj: dict) -> GradedMonoid:
    try:
        return GradedMonoid(obj["n"], obj["k"], [int_vec_from(g) for g in obj["generators"]], obj.get("weights"))
    except KeyError as e:
        raise InputError(f"monoid is missing field {e}") from e


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, no extra whitespace, so equal data gives equal bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e
