import numpy as np
import pytest

from scglue.gluing import GluingParameter, preglue
from scglue.scalespace import GridConfig, WeightSequence, band_limited_pair
from scglue.serialize import ParseError, dump, from_csv, from_json, load, to_csv, to_json


def _same_pair(u, v):
    return (np.array_equal(u.c, v.c) and np.array_equal(u.plus.r, v.plus.r)
            and np.array_equal(u.minus.r, v.minus.r) and u.plus.h == v.plus.h)


def test_pair_csv_round_trip_is_bit_exact(rng):
    u = band_limited_pair(rng)
    text = to_csv(u)
    assert text.startswith("# scglue grid v1 kind=EPair")
    assert text.splitlines()[1] == "side,s,t,v0,v1"
    assert _same_pair(from_csv(text), u)
    assert to_csv(from_csv(text)) == text


def test_glued_round_trips(rng, tmp_path):
    v = preglue(GluingParameter.polar(0.22, 0.3), band_limited_pair(rng))
    w = from_csv(to_csv(v))
    assert np.array_equal(w.values, v.values) and w.param == v.param and w.h == v.h
    grid, weights = GridConfig(16, 0.125), WeightSequence((0.05, 0.1))
    w, g2, wt2 = from_json(to_json(v, grid, weights))
    assert np.array_equal(w.values, v.values) and g2 == grid and wt2 == weights
    for name in ("v.csv", "v.json"):
        dump(v, str(tmp_path / name))
        assert np.array_equal(load(str(tmp_path / name))[0].values, v.values)


def test_pair_json_round_trip(rng):
    u = band_limited_pair(rng)
    assert _same_pair(from_json(to_json(u))[0], u)


@pytest.mark.parametrize("mangle, line", [
    (lambda ls: ["# wrong header"] + ls[1:], 1),
    (lambda ls: ls[:3] + ["plus,0.0,oops,1.0,2.0"] + ls[4:], 4),
    (lambda ls: ls[:5] + ["plus,0.0,0.0,1.0"] + ls[6:], 6),
    (lambda ls: ls[:5] + ["middle,0.0,0.0,1.0,2.0"] + ls[6:], 6),
])
def test_csv_errors_carry_line_numbers(rng, mangle, line):
    lines = to_csv(band_limited_pair(rng)).splitlines()
    with pytest.raises(ParseError) as exc:
        from_csv("\n".join(mangle(lines)), path="x.csv")
    assert exc.value.line == line and f"x.csv:{line}:" in str(exc.value)


def test_json_errors():
    with pytest.raises(ParseError) as exc:
        from_json('{"kind": "EPair",\n "c": [1, 2]\n oops}')
    assert exc.value.line == 3
    with pytest.raises(ParseError):
        from_json('{"kind": "Torus"}')
