"""Figures and tab-separated tables for CLI runs.

Figures are drawn with the Agg backend so no display is needed. Only one-
and two-parameter spaces are drawn; other dimensions get tables only.
"""
from __future__ import annotations

import csv
import math
import os
from fractions import Fraction
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon as _Patch  # noqa: E402

from .geometry import convex_hull  # noqa: E402


def write_tsv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([str(x) for x in row])
    return path


def _fl(v) -> list[float]:
    return [float(Fraction(x)) for x in v]


def _ring(vertices: Sequence) -> list[list[float]]:
    """Vertices of a convex polygon in counter-clockwise order."""
    pts = [_fl(v) for v in vertices]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def _draw(ax, vertices: Sequence, **kw):
    pts = [_fl(v) for v in vertices]
    y = kw.pop("y", 0.0)
    if not pts:
        return
    if len(pts[0]) == 1:
        xs = [p[0] for p in pts]
        ax.plot([min(xs), max(xs)], [y, y], lw=kw.pop("lw", 4), color=kw.get("edgecolor", kw.get("facecolor")),
                alpha=kw.get("alpha", 1.0), solid_capstyle="butt")
        return
    if len(pts) == 1:
        ax.plot([pts[0][0]], [pts[0][1]], "o", color=kw.get("edgecolor", "k"))
    elif len(pts) == 2:
        ax.plot([pts[0][0], pts[1][0]], [pts[0][1], pts[1][1]], color=kw.get("edgecolor", "k"), lw=2)
    else:
        ax.add_patch(_Patch(_ring(pts), closed=True, **kw))


def _finish(fig, ax, path: str, title: str) -> str:
    ax.set_title(title)
    ax.autoscale_view()
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_cover(path: str, C_vertices: Sequence, parts: Sequence[Sequence], simplices: Sequence[Sequence],
               title: str = "simplex cover") -> str | None:
    """C outlined, the parts of D shaded, the cover simplices drawn on top."""
    if not C_vertices or len(C_vertices[0]) != 2:
        return None
    fig, ax = plt.subplots(figsize=(5, 5))
    _draw(ax, C_vertices, facecolor="none", edgecolor="black", lw=2)
    cmap = plt.get_cmap("tab10")
    for i, P in enumerate(parts):
        _draw(ax, P, facecolor=cmap(i % 10), alpha=0.35, edgecolor=cmap(i % 10))
    for s in simplices:
        _draw(ax, s, facecolor="none", edgecolor="0.3", lw=0.6)
    return _finish(fig, ax, path, title)


def plot_regions(path: str, regions: Sequence[dict], pseff: Sequence | None = None,
                 title: str = "weak lc model regions") -> str | None:
    """Each region coloured by its model; ``regions`` are dicts with vertices and a label."""
    dims = {len(r["vertices"][0]) for r in regions if r["vertices"]}
    if pseff:
        dims.add(len(pseff[0]))
    if not dims or dims - {1, 2}:
        return None
    fig, ax = plt.subplots(figsize=(5, 5 if 2 in dims else 2))
    cmap = plt.get_cmap("tab10")
    if pseff and len(pseff[0]) == 2:
        _draw(ax, pseff, facecolor="none", edgecolor="black", lw=2)
    for i, r in enumerate(regions):
        _draw(ax, r["vertices"], facecolor=cmap(i % 10), edgecolor=cmap(i % 10), alpha=0.5, y=0.0)
        c = [sum(x) / len(r["vertices"]) for x in zip(*[_fl(v) for v in r["vertices"]])]
        ax.annotate(r.get("label", str(i)), (c[0], c[1] if len(c) > 1 else 0.05), ha="center", fontsize=8)
    if dims == {1}:
        ax.set_yticks([])
    return _finish(fig, ax, path, title)


def plot_generators(path: str, generators: Sequence[Sequence[int]], n: int, title: str = "generators") -> str | None:
    """Generators by their first two multidegree entries, point size by count."""
    if not generators:
        return None
    counts: dict = {}
    for g in generators:
        key = (g[0], g[1] if n > 1 else 0)
        counts[key] = counts.get(key, 0) + 1
    fig, ax = plt.subplots(figsize=(4, 4))
    xs, ys = zip(*counts)
    ax.scatter(xs, ys, s=[40 * c for c in counts.values()], alpha=0.7)
    for (x, y), c in counts.items():
        ax.annotate(str(c), (x, y), ha="center", va="center", fontsize=7)
    ax.set_xlabel("m_1")
    ax.set_ylabel("m_2" if n > 1 else "")
    fig.tight_layout()
    ax.set_title(title)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def pipeline_report(records: Sequence[dict], outdir: str) -> list[str]:
    """Tables of steps and generators plus one figure per drawable cover and region split."""
    os.makedirs(outdir, exist_ok=True)
    files = [write_tsv(os.path.join(outdir, "steps.tsv"), ["record", "kind", "node", "detail"],
                       ((i, r.get("kind"), r.get("node", ""), _detail(r)) for i, r in enumerate(records)))]
    final = next((r for r in records if r.get("kind") == "final"), None)
    inst = next((r for r in records if r.get("kind") == "instance"), None)
    if final is not None:
        gens = final["generators"]["elements"]
        prov = final["generators"].get("provenance") or [""] * len(gens)
        n = len(inst["instance"]["boundaries"]) if inst else 1
        files.append(write_tsv(os.path.join(outdir, "generators.tsv"),
                               [f"m{i + 1}" for i in range(n)] + ["payload", "provenance"],
                               (list(g[:n]) + [",".join(map(str, g[n:])), p] for g, p in zip(gens, prov))))
        f = plot_generators(os.path.join(outdir, "generators.png"), gens, n)
        if f:
            files.append(f)
    regions = {r["node"]: r for r in records if r.get("kind") == "regions"}
    for r in records:
        if r.get("kind") != "cover":
            continue
        tag = r["node"].replace(".", "_")
        reg = regions.get(r["node"])
        parts = [x["vertices"] for x in reg["regions"]] if reg else []
        simplices = r["simplices"]
        dim = len(simplices[0][0]) if simplices and simplices[0] else 0
        if reg:
            labelled = [{"vertices": x["vertices"], "label": "+".join(x["contracted"]) or "id"} for x in reg["regions"]]
            f = plot_regions(os.path.join(outdir, f"regions_{tag}.png"), labelled,
                             reg["pseff"]["vertices"] if reg.get("pseff") else None, title=f"regions at {r['node']}")
            if f:
                files.append(f)
        if dim == 2:
            C = convex_hull([tuple(Fraction(x) for x in v) for s in simplices for v in s]).vertices
            f = plot_cover(os.path.join(outdir, f"cover_{tag}.png"), C, parts, simplices, title=f"cover at {r['node']}")
            if f:
                files.append(f)
    return files


def _detail(r: dict) -> str:
    k = r.get("kind")
    if k == "reduce":
        return r.get("step", "")
    if k == "regions":
        return f"{len(r.get('regions', []))} regions"
    if k == "cover":
        return f"{len(r.get('simplices', []))} simplices"
    if k in ("vertex_ring", "transfer", "lift", "restrict", "final"):
        g = r.get("generators", {})
        return f"{len(g.get('elements', []))} generators"
    return ""
