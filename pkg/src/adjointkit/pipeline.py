"""End-to-end generation of adjoint rings on toric surfaces, with a replayable trace.

The boundary tuple is first reduced to affinely independent tuples: a
boundary that repeats or lies in the hull of the others is expressed as a
rational convex combination of them, and a tuple of too many vertices is
enlarged by a point common to all its vertex-deleted hulls. On each
independent tuple the pseudo-effective parameter region is split into
regions with a common weak log canonical model, a simplex cover aligned with
these regions is built, each cover simplex gets generators from the Cayley
cone of its nef push-forwards, and the results are transferred back. Every
step is checked against exhaustive enumeration up to the degree bound and
written to the trace.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp
from .cover import common_point, cover_respecting, verify_cover
from .errors import VerificationError
from .geometry import AffineChart, Polytope, convex_hull
from .io import (InputError, dumps, generators_from, generators_json, polytope_json, qvec_from,
                 qvec_json, surface_from, surface_json, toric_from, toric_json)
from .linalg import ZERO, QVec, add, denominator_lcm, solve, sub, vec
from .monoid import (GeneratorSet, GradedMonoid, ReweightedView, TransferMatrices,
                     generation_gap, lift_generators, reweight, semiample_generators,
                     simplex_transfer, truncation_implies_fg)
from .surface import (AffineDivisorMap, NumericalSurface, is_nef, is_pseff, is_weak_lc_model,
                      pseff_region, run_mmp, wlc_decomposition)
from .toric import AdjointMonoid, ToricModel, toric_surface

DEFAULT_BOUND = 8


@dataclass(frozen=True)
class AdjointInstance:
    surface: NumericalSurface
    boundaries: tuple
    toric_model: ToricModel | None = None

    def __post_init__(self):
        bs = tuple(vec(b) for b in self.boundaries)
        object.__setattr__(self, "boundaries", bs)
        if not bs:
            raise ValueError("need at least one boundary")
        for b in bs:
            if len(b) != self.surface.r:
                raise ValueError(f"boundary has {len(b)} coefficients, surface has {self.surface.r} curves")
            if any(c < 0 or c > 1 for c in b):
                raise ValueError(f"boundary coefficients must lie in [0, 1]: {[str(c) for c in b]}")
        if self.toric_model is not None and self.toric_model.names != self.surface.curves:
            raise ValueError("toric model rays do not match the surface curves")

    @property
    def n(self) -> int:
        return len(self.boundaries)

    def monoid(self, boundaries: Sequence | None = None) -> AdjointMonoid:
        if self.toric_model is None:
            raise ValueError("a toric model is needed for explicit sections")
        bs = self.boundaries if boundaries is None else boundaries
        return AdjointMonoid.adjoint(self.toric_model, self.surface.K, bs)

    @classmethod
    def from_json(cls, obj: dict) -> "AdjointInstance":
        if not isinstance(obj, dict) or "boundaries" not in obj:
            raise InputError("instance needs 'boundaries'")
        bs = tuple(qvec_from(b) for b in obj["boundaries"])
        toric = None
        try:
            if "surface" in obj:
                S = surface_from(obj["surface"])
                if "toric" in obj:
                    toric = toric_from(obj["toric"], S.curves)
            elif "toric" in obj:
                t = obj["toric"]
                if "K" not in t:
                    raise InputError("toric instance without a surface needs 'K'")
                model = toric_from(t)
                S, toric = toric_surface(model.rays, qvec_from(t["K"]), model.names)
            else:
                raise InputError("instance needs 'surface' or 'toric'")
            return cls(S, bs, toric)
        except InputError:
            raise
        except ValueError as e:
            raise InputError(str(e)) from e

    def to_json(self) -> dict:
        out = {"surface": surface_json(self.surface), "boundaries": [qvec_json(b) for b in self.boundaries]}
        if self.toric_model is not None:
            out["toric"] = toric_json(self.toric_model)
        return out


# -- tuple reduction ---------------------------------------------------------

@dataclass
class ReductionNode:
    """One tuple in the reduction tree.

    ``kind`` is "simplex" (affinely independent, a leaf), "duplicate" or
    "non-vertex" (boundary ``t`` equals sum a_i/q times boundary i over
    ``support``; one child per support index, dropping it) or "split"
    (one child with the common point appended).
    """

    id: str
    boundaries: tuple
    labels: tuple
    kind: str
    t: int | None = None
    support: tuple = ()
    a: tuple = ()
    q: int = 1
    point: QVec | None = None
    children: list = field(default_factory=list)  # (child, parent index of each child coordinate)

    def leaves(self) -> list["ReductionNode"]:
        if not self.children:
            return [self]
        return [leaf for c, _ in self.children for leaf in c.leaves()]

    def walk(self):
        yield self
        for c, _ in self.children:
            yield from c.walk()


def _dependency(bs: Sequence[QVec], i: int):
    """(support, a, q, kind) writing boundary i through the others, or None if it is a new vertex."""
    for j in range(i):
        if bs[j] == bs[i]:
            return (j,), (1,), 1, "duplicate"
    for j in range(i + 1, len(bs)):
        if bs[j] == bs[i]:
            return (j,), (1,), 1, "duplicate"
    others = [j for j in range(len(bs)) if j != i]
    if not others:
        return None
    w = lp.convex_coefficients([bs[j] for j in others], bs[i])
    if w is None:
        return None
    q = denominator_lcm(w)
    support = tuple(j for j, c in zip(others, w) if c)
    a = tuple(int(c * q) for c in w if c)
    return support, a, q, "non-vertex"


def reduce_tuple(I: AdjointInstance) -> ReductionNode:
    """Tree of tuples ending in affinely independent ones."""
    labels = tuple(f"B{i + 1}" for i in range(I.n))
    return _reduce(I.boundaries, labels, "r", [0])


def _reduce(bs: tuple, labels: tuple, nid: str, counter: list) -> ReductionNode:
    m = len(bs)
    for t in reversed(range(m)):
        dep = _dependency(bs, t)
        if dep is None:
            continue
        support, a, q, kind = dep
        node = ReductionNode(nid, bs, labels, kind, t, support, a, q)
        for j in support:
            keep = tuple(i for i in range(m) if i != j)
            child = _reduce(tuple(bs[i] for i in keep), tuple(labels[i] for i in keep), f"{nid}.{j + 1}", counter)
            node.children.append((child, keep))
        return node
    dim = AffineChart(list(bs)).dim
    if m > dim + 1:
        cert = common_point(convex_hull(bs))
        if not cert.verify(convex_hull(bs).vertices):
            raise VerificationError("common point certificate failed")
        counter[0] += 1
        node = ReductionNode(nid, bs, labels, "split", point=cert.point)
        child = _reduce(bs + (cert.point,), labels + (f"P{counter[0]}",), f"{nid}.s", counter)
        node.children.append((child, tuple(range(m)) + (None,)))
        return node
    return ReductionNode(nid, bs, labels, "simplex")


# -- trace -------------------------------------------------------------------

@dataclass
class PipelineTrace:
    records: list
    generators: GeneratorSet | None = None
    verified: bool = False

    def to_jsonl(self) -> str:
        return "".join(dumps(r) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str) -> "PipelineTrace":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        final = next((r for r in reversed(records) if r.get("kind") == "final"), None)
        gens = generators_from(final["generators"]) if final else None
        return cls(records, gens, bool(final and final.get("verified")))


class PipelineError(VerificationError):
    """A step failed its check; ``trace`` holds the records written so far."""

    def __init__(self, message: str, trace: PipelineTrace, step: str):
        super().__init__(message)
        self.trace = trace
        self.step = step


def _gens_json(G) -> dict:
    if not isinstance(G, GeneratorSet):
        G = GeneratorSet(tuple(G))
    return generators_json(G)


def _require(gap, what: str):
    if gap is not None:
        raise VerificationError(f"{what}: not generated at {list(gap)}")


class _Runner:
    def __init__(self, I: AdjointInstance, N: int):
        self.I, self.N = I, N
        self.S = I.surface
        self.model = I.toric_model
        self.records: list = []

    def emit(self, rec: dict):
        self.records.append(rec)

    def solve(self, node: ReductionNode) -> GeneratorSet:
        rec = {"kind": "reduce", "node": node.id, "step": node.kind, "labels": list(node.labels),
               "boundaries": [qvec_json(b) for b in node.boundaries]}
        if node.kind in ("duplicate", "non-vertex"):
            rec.update(t=node.t, support=list(node.support), a=list(node.a), q=node.q)
        if node.kind == "split":
            rec["point"] = qvec_json(node.point)
        self.emit(rec)
        child_gens = [(self.solve(c), keep) for c, keep in node.children]
        if node.kind == "simplex":
            return self.leaf(node)
        if node.kind == "split":
            return self.restrict(node, *child_gens[0])
        return self.lift(node, child_gens)

    # a tuple inside a larger one: keep generators with no weight on the new point
    def restrict(self, node, gens: GeneratorSet, keep) -> GeneratorSet:
        m = len(node.boundaries)
        out = GeneratorSet.build((g[:m] + g[m + 1:], tag) for g, tag in zip(gens.elements, gens.provenance)
                                 if g[m] == 0)
        _require(generation_gap(self.I.monoid(node.boundaries), out, self.N), f"node {node.id}")
        self.emit({"kind": "restrict", "node": node.id, "generators": _gens_json(out)})
        return out

    def lift(self, node, child_gens) -> GeneratorSet:
        bs, n, t = node.boundaries, len(node.boundaries), node.t
        k = self.model.dim
        d = [1] * n
        for j, aj in zip(node.support, node.a):
            d[j] = aj
        d[t] = node.q
        rest = [i for i in range(n) if i != t]
        M = ReweightedView(self.I.monoid([bs[i] for i in rest]), [d[i] for i in rest])
        faces = []
        for (gens, keep) in child_gens:
            rw = reweight(GradedMonoid(n - 1, k, gens.elements), [d[i] for i in keep], max_degree=self.N)
            face = []
            for g in rw.generators:
                full = [0] * n
                for c, i in zip(g[: n - 1], keep):
                    full[i] = c
                face.append(tuple(full[i] for i in rest) + (full[t],) + g[n - 1:])
            faces.append(face)
        pos = [rest.index(j) for j in node.support]
        lifted = lift_generators(faces, pos, M, bound=self.N)
        images = []
        for x, tag in zip(lifted.elements, lifted.provenance):
            m = [0] * n
            for c, i in zip(x[: n - 1], rest):
                m[i] = c
            m[t] = x[n - 1]
            images.append((tuple(mi * di for mi, di in zip(m, d)) + x[n:], tag))
        R = self.I.monoid(bs)
        w = truncation_implies_fg(R, d, [x for x, _ in images], self.N)
        if not w.verified:
            raise VerificationError(f"node {node.id}: lifted generators miss {w.missing}")
        self.emit({"kind": "lift", "node": node.id, "d": d,
                   "lifted": _gens_json(lifted), "generators": _gens_json(w.generators)})
        return w.generators

    def leaf(self, node) -> GeneratorSet:
        bs = node.boundaries
        n = len(bs)
        S, K = self.S, self.S.K
        R = self.I.monoid(bs)
        C, dmap = _leaf_space(n), _leaf_map(bs)
        regions = self.regions(node, C, dmap)
        parts = [W.region for W in regions]
        cover = cover_respecting(C, parts)
        report = verify_cover(C, parts, cover)
        self.emit({"kind": "cover", "node": node.id, "simplices": [[qvec_json(v) for v in s.vertices] for s in cover.simplices],
                   "alignment": [a.part for a in cover.alignment], "checks": report})
        if not report["ok"]:
            raise VerificationError(f"node {node.id}: cover check failed {report}")

        # boundary i sits at the i-th unit vector, the last one at the origin
        corners = [tuple(Fraction(int(i == j)) for j in range(n - 1)) for i in range(n - 1)] + [tuple([ZERO] * (n - 1))]
        bary = lambda simplex, x: solve([list(col) for col in zip(*[tuple(v) + (1,) for v in simplex])], tuple(x) + (1,))
        a_rows = [[bary(s.vertices, c) for c in corners] for s in cover.simplices]
        b_rows = [[bary(corners, v) for v in s.vertices] for s in cover.simplices]
        p = denominator_lcm(x for A in a_rows for row in A for x in row)
        q = denominator_lcm(x for B in b_rows for row in B for x in row)
        Ts = []
        for A, B in zip(a_rows, b_rows):
            T = TransferMatrices(tuple(tuple(int(x * p) for x in row) for row in A),
                                 tuple(tuple(int(x * q) for x in row) for row in B), p, q)
            # (1/pq) a b = I is checked when the matrices are built
            Ts.append(T)

        vertex_gens = []
        for lam, (s, al) in enumerate(zip(cover.simplices, cover.alignment)):
            psis = [dmap(v) for v in s.vertices]
            J = [j for j, psi in enumerate(psis) if is_pseff(add(K, psi), S)]
            elems: list = []
            if J:
                if al.part is None:
                    raise VerificationError(f"node {node.id}: simplex {lam} has pseudo-effective vertices but no region")
                W = regions[al.part]
                Y = W.model.final_surface
                modelY = self.model.restrict(Y.curves)
                polys = []
                for j in J:
                    D = add(K, psis[j])
                    if not is_weak_lc_model(S, W.model, D):
                        raise VerificationError(f"node {node.id}: region model fails at simplex {lam} vertex {j}")
                    Dy = W.model.push(D)
                    assert is_nef(Dy, Y)
                    polys.append(modelY.polygon(Dy))
                for g in semiample_generators(polys, max_degree=self.N):
                    full = [0] * n
                    for c, j in zip(g[: len(J)], J):
                        full[j] = c
                    elems.append(tuple(full) + g[len(J):])
            G = GeneratorSet(tuple(elems), ("cayley",) * len(elems))
            _require(generation_gap(self.I.monoid(psis), G, self.N), f"node {node.id} simplex {lam}")
            self.emit({"kind": "vertex_ring", "node": node.id, "simplex": lam,
                       "boundaries": [qvec_json(x) for x in psis], "pseff_vertices": J,
                       "region": al.part, "generators": _gens_json(G)})
            vertex_gens.append(G)

        res = simplex_transfer(vertex_gens, Ts, R, self.N, max_degree=self.N)
        self.emit({"kind": "transfer", "node": node.id,
                   "matrices": [{"a": [list(r) for r in T.a], "b": [list(r) for r in T.b], "p": T.p, "q": T.q} for T in Ts],
                   "images": [list(x) for x in res.images], "generators": _gens_json(res.generators)})
        return res.generators

    def regions(self, node, C: Polytope, dmap: AffineDivisorMap) -> list:
        E = pseff_region(self.S, C, dmap)
        regions = wlc_decomposition(self.S, C, dmap) if not E.is_empty else []
        self.emit({"kind": "regions", "node": node.id, "pseff": polytope_json(E) if not E.is_empty else None,
                   "regions": [{"vertices": [qvec_json(v) for v in W.region.vertices],
                                "contracted": list(W.model.contracted), "outcome": W.model.outcome}
                               for W in regions]})
        return regions


def run_pipeline(I: AdjointInstance, N: int = DEFAULT_BOUND) -> PipelineTrace:
    """Generators of the adjoint ring, verified up to degree N, with the full trace."""
    if I.toric_model is None:
        raise ValueError("a toric model is needed for explicit sections")
    runner = _Runner(I, N)
    runner.emit({"kind": "instance", "instance": I.to_json(), "bound": N})
    try:
        root = reduce_tuple(I)
        gens = runner.solve(root)
        gap = generation_gap(I.monoid(), gens, N)
    except VerificationError as e:
        trace = PipelineTrace(runner.records)
        step = runner.records[-1]["kind"] if runner.records else "start"
        raise PipelineError(str(e), trace, step) from e
    ok = gap is None
    runner.emit({"kind": "final", "generators": _gens_json(gens), "bound": N, "verified": ok,
                 "missing": list(gap) if gap is not None else None})
    trace = PipelineTrace(runner.records, gens, ok)
    if not ok:
        raise PipelineError(f"final generators miss {list(gap)}", trace, "final")
    return trace


# -- replay ------------------------------------------------------------------

def verify_trace(T: PipelineTrace | Sequence[dict]) -> list[dict]:
    """Re-check every record with the owning module's oracle; one result per record."""
    records = T.records if isinstance(T, PipelineTrace) else list(T)
    results = []
    ctx: dict = {"nodes": {}}
    for idx, rec in enumerate(records):
        kind = rec.get("kind", "?")
        try:
            msg = _CHECKS.get(kind, _unknown)(rec, ctx)
            ok = msg is None
        except (VerificationError, ValueError, KeyError, TypeError, AssertionError) as e:
            ok, msg = False, f"{type(e).__name__}: {e}"
        results.append({"record": idx, "kind": kind, "node": rec.get("node"), "ok": ok, "message": msg or ""})
    return results


def _unknown(rec, ctx):
    return f"unknown record kind {rec.get('kind')!r}"


def _instance(ctx) -> AdjointInstance:
    if "instance" not in ctx:
        raise ValueError("no instance record before this step")
    return ctx["instance"]


def _node_ring(rec, ctx):
    I = _instance(ctx)
    return I.monoid(ctx["nodes"][rec["node"]])


def _check_instance(rec, ctx):
    ctx["instance"] = AdjointInstance.from_json(rec["instance"])
    ctx["N"] = int(rec["bound"])


def _check_reduce(rec, ctx):
    bs = tuple(qvec_from(b) for b in rec["boundaries"])
    ctx["nodes"][rec["node"]] = bs
    step = rec["step"]
    if step in ("duplicate", "non-vertex"):
        a, q, t = rec["a"], rec["q"], rec["t"]
        if any(x <= 0 for x in a) or sum(a) != q:
            return "dependency weights are not positive with sum q"
        combo = tuple(sum((Fraction(x) * bs[j][c] for x, j in zip(a, rec["support"])), ZERO) for c in range(len(bs[t])))
        if combo != tuple(q * c for c in bs[t]):
            return "dependency does not reproduce the boundary"
    elif step == "split":
        p = qvec_from(rec["point"])
        P = convex_hull(bs)
        if len(P.vertices) != len(bs) or len(bs) <= P.dim + 1:
            return "split applied to a tuple that is not an oversized vertex set"
        for i in range(len(bs)):
            if lp.convex_coefficients([b for j, b in enumerate(bs) if j != i], p) is None:
                return f"common point misses hull without boundary {i + 1}"
    elif step == "simplex":
        if AffineChart(list(bs)).dim != len(bs) - 1:
            return "leaf tuple is not affinely independent"
    else:
        return f"unknown reduction step {step!r}"
    return None


def _leaf_space(n: int):
    if n == 1:
        return convex_hull([()])
    return convex_hull([tuple(Fraction(int(i == j)) for j in range(n - 1)) for i in range(n - 1)]
                       + [tuple([ZERO] * (n - 1))])


def _leaf_map(bs) -> AffineDivisorMap:
    if len(bs) == 1:
        return AffineDivisorMap(bs[0], ())
    return AffineDivisorMap(bs[-1], tuple(sub(b, bs[-1]) for b in bs[:-1]))


def _check_regions(rec, ctx):
    I = _instance(ctx)
    bs = ctx["nodes"][rec["node"]]
    S, dmap = I.surface, _leaf_map(bs)
    parts = []
    for reg in rec["regions"]:
        P = convex_hull([qvec_from(v) for v in reg["vertices"]])
        tr = run_mmp(S, dmap(P.barycenter()))
        if list(tr.contracted) != reg["contracted"]:
            return f"region {P} contracts {tr.contracted}, recorded {reg['contracted']}"
        for v in P.vertices:
            if not is_weak_lc_model(S, tr, add(S.K, dmap(v))):
                return f"model check fails at vertex {v}"
        parts.append(P)
    ctx.setdefault("regions", {})[rec["node"]] = parts
    return None


def _check_cover(rec, ctx):
    from .cover import SimplexCover, align, union_hull
    from .geometry import Simplex
    bs = ctx["nodes"][rec["node"]]
    C = _leaf_space(len(bs))
    parts = ctx.get("regions", {}).get(rec["node"], [])
    simplices = tuple(Simplex(tuple(qvec_from(v) for v in s)) for s in rec["simplices"])
    D = union_hull(parts, C.ambient)
    alignment = tuple(align(s, D, parts) for s in simplices)
    if [a.part for a in alignment] != rec["alignment"]:
        return "recorded alignment differs from recomputed alignment"
    report = verify_cover(C, parts, SimplexCover(simplices, alignment))
    return None if report["ok"] else f"cover check failed: {report}"


def _check_vertex_ring(rec, ctx):
    I = _instance(ctx)
    psis = [qvec_from(b) for b in rec["boundaries"]]
    G = generators_from(rec["generators"])
    gap = generation_gap(I.monoid(psis), G, ctx["N"])
    return None if gap is None else f"vertex ring not generated at {list(gap)}"


def _check_transfer(rec, ctx):
    for m in rec["matrices"]:
        TransferMatrices(tuple(map(tuple, m["a"])), tuple(map(tuple, m["b"])), m["p"], m["q"])
    R = _node_ring(rec, ctx)
    for x in rec["images"]:
        if not R.contains(x):
            return f"image {x} is not in the ring"
    gap = generation_gap(R, generators_from(rec["generators"]), ctx["N"])
    return None if gap is None else f"transferred generators miss {list(gap)}"


def _check_generated(rec, ctx):
    gap = generation_gap(_node_ring(rec, ctx), generators_from(rec["generators"]), ctx["N"])
    return None if gap is None else f"generators miss {list(gap)}"


def _check_final(rec, ctx):
    I = _instance(ctx)
    gap = generation_gap(I.monoid(), generators_from(rec["generators"]), ctx["N"])
    if (gap is None) != bool(rec["verified"]):
        return "recorded verdict disagrees with the oracle"
    return None if gap is None else f"final generators miss {list(gap)}"


_CHECKS = {
    "instance": _check_instance,
    "reduce": _check_reduce,
    "regions": _check_regions,
    "cover": _check_cover,
    "vertex_ring": _check_vertex_ring,
    "transfer": _check_transfer,
    "lift": _check_generated,
    "restrict": _check_generated,
    "final": _check_final,
}
