import json

import numpy as np
import pytest

from scglue.cli import main, read_config
from scglue.gluing import EXPONENTIAL
from scglue.imprint import Report
from scglue.scalespace import band_limited_pair
from scglue.serialize import ParseError, dump
from scglue.suites import SUITES


def test_verify_quadrant_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "q.json"
    assert main(["verify", "quadrant", "--n", "4", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1 and rep["pass"] and rep["totals"]["failed"] == 0
    assert "PASS" in capsys.readouterr().err
    assert main(["verify", "nonsense"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_failing_check_exits_one(tmp_path, monkeypatch):
    def broken(cfg):
        rep = Report("broken")
        rep.add("always_fails", 1.0, 0.0, 1)
        return rep
    monkeypatch.setitem(SUITES, "profile", broken)
    out = tmp_path / "b.json"
    assert main(["verify", "profile", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["pass"] is False


def test_same_seed_gives_identical_bytes(tmp_path):
    paths = [tmp_path / f"r{i}.json" for i in range(2)]
    for p in paths:
        assert main(["verify", "sccalc", "--seed", "7", "--scale", "0.5", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    other = tmp_path / "r2.json"
    main(["verify", "sccalc", "--seed", "8", "--scale", "0.5", "--out", str(other)])
    assert other.read_bytes() != paths[0].read_bytes()


def test_profile_csv(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["profile", "--from", "0.15", "--to", "1.0", "--steps", "100", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "s,phi" and len(lines) == 102 and lines[-1] == "1.0,0.0"
    s, phi = map(float, lines[50].split(","))
    assert phi == EXPONENTIAL.forward(s)
    assert main(["profile", "--from", "0", "--to", "1"]) == 2


def test_glue_header_carries_R(tmp_path, rng):
    pair = tmp_path / "pair.json"
    dump(band_limited_pair(rng), str(pair))
    out = tmp_path / "g.csv"
    assert main(["glue", "--a-mod", "0.22", "--a-arg", "0.3", "--input", str(pair),
                 "--out", str(out)]) == 0
    header = out.read_text().splitlines()[0]
    meta = dict(tok.split("=", 1) for tok in header.split()[4:])
    assert meta["kind"] == "GluedFunction" and float(meta["R"]) == EXPONENTIAL.forward(0.22)
    assert float(meta["a_re"]) == 0.22 * np.cos(0.3)


def test_report_merges_totals(tmp_path, capsys):
    paths = []
    for suite in ("profile", "cutoff"):
        p = tmp_path / f"{suite}.json"
        main(["verify", suite, "--out", str(p)])
        paths.append(p)
    out = tmp_path / "all.json"
    assert main(["report", *map(str, paths), "--out", str(out)]) == 0
    merged = json.loads(out.read_text())
    parts = [json.loads(p.read_text())["totals"]["checks"] for p in paths]
    assert merged["totals"]["checks"] == sum(parts)
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  nope")
    assert main(["report", str(bad)]) == 2
    assert "bad.json:2" in capsys.readouterr().err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed = 3\nbogus\n")
    with pytest.raises(ParseError) as exc:
        read_config(str(cfg))
    assert exc.value.line == 3
    assert main(["verify", "profile", "--config", str(cfg)]) == 2
    assert "run.cfg:3" in capsys.readouterr().err
    cfg.write_text("seed = 3\nscale = 0.1\n")
    out = tmp_path / "o.json"
    assert main(["verify", "cutoff", "--config", str(cfg), "--seed", "5", "--out", str(out)]) == 0
    env = json.loads(out.read_text())["environment"]
    assert env["seed"] == 5 and env["scale"] == 0.1


def test_functor_command(tmp_path):
    out = tmp_path / "f.json"
    assert main(["functor", "--target", "torus", "--check", "retraction", "--scale", "0.05",
                 "--out", str(out)]) == 0
    names = [c["name"] for c in json.loads(out.read_text())["checks"]]
    assert any(n.startswith("torus.") for n in names)
    assert not any(n.startswith("sphere.r_") for n in names)
