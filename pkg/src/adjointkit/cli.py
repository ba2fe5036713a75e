"""Command line entry point ``adjointkit``.

Every subcommand reads one JSON document (rationals as "p/q" strings),
writes machine JSON to ``--out`` or stdout and a short human summary to
stderr. Exit status: 0 verified, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Any

from . import corpus, io
from .cover import cover_respecting, verify_cover
from .errors import VerificationError
from .geometry import DimensionError
from .io import InputError, qvec_from, qvec_json, rat_str
from .linalg import add, is_negative_definite
from .monoid import (CayleyMonoid, TransferMatrices, generation_gap,
                     semiample_generators, simplex_transfer)
from .pipeline import DEFAULT_BOUND, AdjointInstance, PipelineError, PipelineTrace, run_pipeline, verify_trace
from .surface import (intersect, is_nef, is_pseff, is_weak_lc_model, pseff_region, run_mmp,
                      wlc_decomposition, zariski)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Ctx:
    def __init__(self, args):
        self.args = args

    def say(self, msg: str):
        if not self.args.quiet:
            print(msg, file=sys.stderr)

    def emit(self, obj: Any):
        text = io.dumps(obj)
        if self.args.out:
            with open(self.args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)

    def report_dir(self) -> str | None:
        d = self.args.report
        if d:
            os.makedirs(d, exist_ok=True)
        return d


def _read_input(args) -> Any:
    if args.input in (None, "-"):
        try:
            return json.load(sys.stdin)
        except json.JSONDecodeError as e:
            raise InputError(f"stdin is not valid JSON: {e}") from e
    return io.load_json(args.input)


def _field(obj: dict, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"input needs '{key}'")
    return obj[key]


# -- cover -------------------------------------------------------------------

def cmd_cover(ctx: _Ctx) -> int:
    args = ctx.args
    if args.random:
        from .randgen import random_cover_instance
        C, parts = random_cover_instance(random.Random(args.seed))
    else:
        obj = _read_input(args)
        C = io.polytope_from(_field(obj, "C"))
        parts = [io.polytope_from(P) for P in obj.get("D", [])]
    cover = cover_respecting(C, parts)
    checks = verify_cover(C, parts, cover)
    ctx.emit({
        "C": io.polytope_json(C),
        "D": [io.polytope_json(P) for P in parts],
        "cover": {
            "simplices": [[qvec_json(v) for v in s.vertices] for s in cover.simplices],
            "alignment": [{"face": [qvec_json(v) for v in a.face.vertices], "part": a.part} for a in cover.alignment],
        },
        "checks": checks,
    })
    for k, v in checks.items():
        ctx.say(f"{k}\t{v}")
    d = ctx.report_dir()
    if d:
        from . import report
        report.write_tsv(os.path.join(d, "cover.tsv"), ["simplex", "vertices", "part"],
                         ((i, " ".join("(" + ",".join(map(rat_str, v)) + ")" for v in s.vertices), a.part)
                          for i, (s, a) in enumerate(zip(cover.simplices, cover.alignment))))
        report.plot_cover(os.path.join(d, "cover.png"), C.vertices, [P.vertices for P in parts],
                          [s.vertices for s in cover.simplices])
    return EXIT_OK if checks["ok"] else EXIT_FAIL


# -- surfaces ----------------------------------------------------------------

def cmd_zariski(ctx: _Ctx) -> int:
    obj = _read_input(ctx.args)
    S = io.surface_from(_field(obj, "surface"))
    D = qvec_from(_field(obj, "D"))
    Z = zariski(D, S, obj.get("order"))
    idx = list(Z.support)
    gram = [[S.Q[i][j] for j in idx] for i in idx]
    checks = {
        "P_nef": is_nef(Z.P, S),
        "N_effective": all(c >= 0 for c in Z.N),
        "P_orthogonal": all(intersect(Z.P, S.basis(i), S) == 0 for i in idx),
        "support_negative_definite": not idx or is_negative_definite(gram),
        "sum": add(Z.P, Z.N) == tuple(D),
    }
    checks["ok"] = all(checks.values())
    ctx.emit({"P": qvec_json(Z.P), "N": qvec_json(Z.N), "support": [S.curves[i] for i in idx], "checks": checks})
    ctx.say(f"P = {' '.join(map(rat_str, Z.P))}")
    ctx.say(f"N = {' '.join(map(rat_str, Z.N))}  support {','.join(S.curves[i] for i in idx) or '-'}")
    return EXIT_OK if checks["ok"] else EXIT_FAIL


def _mmp_json(T) -> dict:
    return {
        "steps": [{"curve": s.curve, "index": s.index} for s in T.steps],
        "outcome": T.outcome,
        "final_surface": io.surface_json(T.final_surface),
        "final_boundary": qvec_json(T.final_boundary),
    }


def cmd_mmp(ctx: _Ctx) -> int:
    obj = _read_input(ctx.args)
    S = io.surface_from(_field(obj, "surface"))
    B = qvec_from(_field(obj, "boundary"))
    T = run_mmp(S, B)
    out = _mmp_json(T)
    checks = {"terminates": len(T.steps) <= S.r}
    if T.outcome == "minimal-model":
        checks["weak_lc_model"] = is_weak_lc_model(S, T, add(S.K, B))
    checks["ok"] = all(checks.values())
    out["checks"] = checks
    ctx.emit(out)
    for i, s in enumerate(T.steps, 1):
        ctx.say(f"step {i}: contract {s.curve}")
    ctx.say(f"outcome: {T.outcome}")
    return EXIT_OK if checks["ok"] else EXIT_FAIL


def cmd_region(ctx: _Ctx) -> int:
    obj = _read_input(ctx.args)
    S = io.surface_from(_field(obj, "surface"))
    C = io.polytope_from(_field(obj, "C"))
    f = io.affine_map_from(_field(obj, "map"))
    if f.params != C.ambient:
        raise InputError("the boundary map and the parameter polytope have different dimensions")
    E = pseff_region(S, C, f)
    regions = wlc_decomposition(S, C, f) if not E.is_empty else []
    rows, ok = [], True
    for W in regions:
        checks = [is_pseff(add(S.K, f(v)), S) and is_weak_lc_model(S, W.model, add(S.K, f(v)))
                  for v in W.region.vertices]
        ok &= all(checks)
        rows.append({"vertices": [qvec_json(v) for v in W.region.vertices], "contracted": list(W.model.contracted),
                     "outcome": W.model.outcome, "vertex_checks": checks})
    ctx.emit({"pseff": io.polytope_json(E) if not E.is_empty else None, "regions": rows, "ok": ok})
    ctx.say(f"pseudo-effective region: {'empty' if E.is_empty else f'{len(E.vertices)} vertices'}")
    for i, r in enumerate(rows):
        ctx.say(f"region {i}: contract {','.join(r['contracted']) or '-'} ({r['outcome']}), "
                f"{len(r['vertices'])} vertices, checks {'pass' if all(r['vertex_checks']) else 'FAIL'}")
    d = ctx.report_dir()
    if d:
        from . import report
        report.write_tsv(os.path.join(d, "regions.tsv"), ["region", "contracted", "outcome", "vertices"],
                         ((i, ",".join(r["contracted"]), r["outcome"],
                           " ".join("(" + ",".join(v) + ")" for v in r["vertices"])) for i, r in enumerate(rows)))
        report.plot_regions(os.path.join(d, "regions.png"),
                            [{"vertices": r["vertices"], "label": "+".join(r["contracted"]) or "id"} for r in rows],
                            [qvec_json(v) for v in E.vertices] if not E.is_empty else None)
    return EXIT_OK if ok else EXIT_FAIL


# -- generation --------------------------------------------------------------

def cmd_genring(ctx: _Ctx) -> int:
    obj = _read_input(ctx.args)
    N = ctx.args.bound
    if isinstance(obj, dict) and "polygons" in obj:
        polys = [io.polytope_from(P) for P in obj["polygons"]]
        G = semiample_generators(polys, max_degree=obj.get("max_degree"))
        gap = generation_gap(CayleyMonoid(polys), G, N)
    elif isinstance(obj, dict) and "vertex_rings" in obj:
        M = io.monoid_from(_field(obj, "target"))
        rings = [io.generators_from(g) for g in obj["vertex_rings"]]
        try:
            Ts = [TransferMatrices(t["a"], t["b"], t["p"], t["q"]) for t in _field(obj, "matrices")]
        except (KeyError, TypeError) as e:
            raise InputError(f"bad transfer matrices: {e}") from e
        res = simplex_transfer(rings, Ts, M, N)
        G = res.generators
        gap = generation_gap(M, G, N)
    else:
        raise InputError("genring needs 'polygons' or 'vertex_rings'")
    ok = gap is None
    ctx.emit({"generators": io.generators_json(G), "bound": N, "verified": ok,
              "missing": list(gap) if gap is not None else None})
    ctx.say(f"{len(G)} generators, {'verified' if ok else 'NOT verified'} up to degree {N}")
    return EXIT_OK if ok else EXIT_FAIL


# -- pipeline ----------------------------------------------------------------

def _write_trace(path: str | None, T: PipelineTrace):
    if path:
        with open(path, "w") as fh:
            fh.write(T.to_jsonl())


def cmd_pipeline(ctx: _Ctx) -> int:
    args = ctx.args
    if args.corpus:
        if args.corpus not in corpus.ALL:
            raise InputError(f"unknown corpus instance {args.corpus!r}; known: {', '.join(corpus.ALL)}")
        I = corpus.ALL[args.corpus]()
    else:
        I = AdjointInstance.from_json(_read_input(args))
    try:
        T = run_pipeline(I, args.bound)
    except PipelineError as e:
        _write_trace(args.trace, e.trace)
        ctx.say(f"verification failed at {e.step}: {e}")
        _pipeline_report(ctx, e.trace)
        return EXIT_FAIL
    _write_trace(args.trace, T)
    ctx.emit({"generators": io.generators_json(T.generators), "bound": args.bound, "verified": T.verified})
    kinds = [r["kind"] for r in T.records]
    ctx.say(f"{len(T.generators)} generators, verified up to degree {args.bound}; "
            f"{kinds.count('reduce')} reduction nodes, {kinds.count('vertex_ring')} vertex rings")
    _pipeline_report(ctx, T)
    return EXIT_OK if T.verified else EXIT_FAIL


def _pipeline_report(ctx: _Ctx, T: PipelineTrace):
    d = ctx.report_dir()
    if d:
        from . import report
        for f in report.pipeline_report(T.records, d):
            ctx.say(f"wrote {f}")


def cmd_verify(ctx: _Ctx) -> int:
    args = ctx.args
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {args.input}: {e}") from e
    try:
        T = PipelineTrace.from_jsonl(text)
    except json.JSONDecodeError as e:
        raise InputError(f"trace is not valid JSON lines: {e}") from e
    results = verify_trace(T)
    ok = all(r["ok"] for r in results)
    ctx.emit({"results": results, "ok": ok})
    for r in results:
        ctx.say(f"{r['record']}\t{r['kind']}\t{r['node'] or ''}\t{'pass' if r['ok'] else 'FAIL ' + r['message']}")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "cover": (cmd_cover, "simplex cover of C aligned with the parts of D"),
    "zariski": (cmd_zariski, "Zariski decomposition of a divisor"),
    "mmp": (cmd_mmp, "run the minimal model program for K + boundary"),
    "region": (cmd_region, "pseudo-effective region and its weak lc model regions"),
    "genring": (cmd_genring, "generators of a Cayley ring or of a transferred ring"),
    "pipeline": (cmd_pipeline, "generators of an adjoint ring with a replayable trace"),
    "verify": (cmd_verify, "replay a pipeline trace"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, metavar="N", help="verification degree bound")
    common.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")
    common.add_argument("--trace", metavar="FILE", help="pipeline trace output (JSON lines)")
    common.add_argument("--seed", type=int, default=0, metavar="S", help="seed for --random instances")
    common.add_argument("--report", metavar="DIR", help="write TSV tables and PNG figures here")
    common.add_argument("-q", "--quiet", action="store_true", help="no summary on stderr")
    p = argparse.ArgumentParser(prog="adjointkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("input", nargs="?", help="JSON input file (default stdin)")
        if name == "cover":
            sp.add_argument("--random", action="store_true", help="use a random instance from --seed")
        if name == "pipeline":
            sp.add_argument("--corpus", metavar="NAME", help=f"built-in instance: {', '.join(corpus.ALL)}")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.bound < 0:
        print("error: --bound must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    ctx = _Ctx(args)
    try:
        return COMMANDS[args.command][0](ctx)
    except VerificationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, DimensionError, ValueError, KeyError, TypeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
