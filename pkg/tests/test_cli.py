import json
import subprocess
import sys

import pytest

from _fixtures import blowup_pair
from adjointkit import corpus, io
from adjointkit.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


SQUARE = [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]
LEFT = [["0", "0"], ["1/2", "0"], ["0", "1"], ["1/2", "1"]]


def test_cover(tmp_path, capsys):
    f = write(tmp_path, "c.json", {"C": SQUARE, "D": [LEFT]})
    code, out, err = run(["cover", f, "--report", str(tmp_path / "rep")], capsys)
    assert code == 0 and out["checks"]["ok"] and len(out["cover"]["simplices"]) == 9
    assert "union_exact\tTrue" in err
    assert (tmp_path / "rep" / "cover.png").stat().st_size > 0
    assert (tmp_path / "rep" / "cover.tsv").read_text().startswith("simplex\tvertices\tpart")


def test_cover_random_seed_is_reproducible(capsys):
    a = run(["cover", "--random", "--seed", "5", "-q"], capsys)[1]
    b = run(["cover", "--random", "--seed", "5", "-q"], capsys)[1]
    assert a == b and a["checks"]["ok"]


def test_zariski_and_mmp(tmp_path, capsys):
    S = io.surface_json(blowup_pair())
    code, out, _ = run(["zariski", write(tmp_path, "z.json", {"surface": S, "D": ["2", "1"]})], capsys)
    assert code == 0 and out["N"] == ["1", "0"] and out["checks"]["ok"]
    code, out, err = run(["mmp", write(tmp_path, "m.json", {"surface": S, "boundary": ["2", "0"]})], capsys)
    assert code == 0 and [s["curve"] for s in out["steps"]] == ["E"]
    assert "contract E" in err


def test_region(tmp_path, capsys):
    S = io.surface_json(blowup_pair())
    obj = {"surface": S, "C": [["0"], ["4"]], "map": {"base": ["1", "2"], "linear": [["1", "0"]]}}
    code, out, _ = run(["region", write(tmp_path, "r.json", obj), "--report", str(tmp_path / "rep")], capsys)
    assert code == 0 and out["ok"] and len(out["regions"]) == 2
    assert (tmp_path / "rep" / "regions.png").exists()


def test_genring(tmp_path, capsys):
    code, out, _ = run(["genring", write(tmp_path, "g.json", {"polygons": [[["0"], ["2"]]]})], capsys)
    assert code == 0 and out["verified"]
    assert sorted(out["generators"]["elements"]) == [[1, 0], [1, 1], [1, 2]]
    obj = {"target": {"n": 1, "k": 1, "generators": [[1, 0], [1, 1]]},
           "vertex_rings": [[[1, 0], [1, 1]]], "matrices": [{"a": [[1]], "b": [[1]], "p": 1, "q": 1}]}
    code, out, _ = run(["genring", write(tmp_path, "t.json", obj), "--bound", "5"], capsys)
    assert code == 0 and out["bound"] == 5


def test_pipeline_trace_verify_round_trip(tmp_path, capsys):
    trace = tmp_path / "t.jsonl"
    code, out, _ = run(["pipeline", "--corpus", "interior-point", "--bound", "6", "--trace", str(trace),
                        "--out", str(tmp_path / "g.json"), "--report", str(tmp_path / "rep")], capsys)
    assert code == 0 and out is None
    assert json.loads((tmp_path / "g.json").read_text())["verified"]
    assert (tmp_path / "rep" / "generators.tsv").exists() and (tmp_path / "rep" / "steps.tsv").exists()
    code, out, _ = run(["verify", str(trace), "-q"], capsys)
    assert code == 0 and out["ok"]

    lines = trace.read_text().splitlines()
    recs = [json.loads(x) for x in lines]
    t = next(r for r in recs if r["kind"] == "transfer")
    t["generators"]["elements"][0][-1] += 3
    bad = tmp_path / "bad.jsonl"
    bad.write_text("".join(json.dumps(r) + "\n" for r in recs))
    code, out, _ = run(["verify", str(bad), "-q"], capsys)
    assert code == 1 and not out["ok"]


def test_pipeline_from_instance_file(tmp_path, capsys):
    f = write(tmp_path, "i.json", corpus.segment().to_json())
    code, out, _ = run(["pipeline", f, "-q"], capsys)
    assert code == 0 and len(out["generators"]["elements"]) == 3


def test_pipeline_verification_failure_writes_partial_trace(tmp_path, capsys, monkeypatch):
    from adjointkit import pipeline as pl
    from adjointkit.monoid import GeneratorSet
    real = pl.semiample_generators
    monkeypatch.setattr(pl, "semiample_generators",
                        lambda polys, max_degree=None: GeneratorSet(real(polys, max_degree).elements[1:]))
    trace = tmp_path / "t.jsonl"
    code, _, err = run(["pipeline", "--corpus", "segment", "--trace", str(trace)], capsys)
    assert code == 1 and "verification failed" in err
    assert trace.read_text().startswith('{"bound"')


@pytest.mark.parametrize("payload", [
    {"C": [[0.5, 0]]},
    {"nothing": 1},
    {"C": SQUARE, "D": [[["0", "0"], ["2", "0"], ["0", "2"]]]},
])
def test_cover_input_errors(tmp_path, capsys, payload):
    code, _, err = run(["cover", write(tmp_path, "bad.json", payload)], capsys)
    assert code == 2 and "input error" in err


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert run(["zariski", str(bad)], capsys)[0] == 2
    assert run(["pipeline", "--corpus", "nope"], capsys)[0] == 2
    assert run(["zariski", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    S = io.surface_json(blowup_pair())
    f = write(tmp_path, "neg.json", {"surface": S, "D": ["-1", "0"]})
    assert run(["zariski", f], capsys)[0] == 2


def test_console_script_module_entry(tmp_path):
    f = write(tmp_path, "i.json", corpus.segment().to_json())
    res = subprocess.run([sys.executable, "-m", "adjointkit", "pipeline", f, "-q"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["verified"]
