"""CSV and JSON serialization of grid functions.

CSV layout (one file per element)::

    # scglue grid v1 kind=EPair n_theta=32 N=2 h_plus=0.25 h_minus=0.25
    side,s,t,v0,v1
    const,,,c0,c1
    plus,0.0,0.0,r0,r1
    ...

Rows list the decaying part ``r`` of each half in ``(s, t)`` order, first
``plus`` then ``minus``.  Glued maps use ``kind=GluedFunction`` with ``a_re``,
``a_im``, ``profile``, ``R`` and ``h`` in the comment line and ``side=glued``
rows holding full values.  Floats are written with ``repr`` (shortest
round-trip form), so reading a file back reproduces every bit.

The JSON envelope carries the same data plus the ``GridConfig`` and
``WeightSequence`` used to produce it.
"""
import csv
import io
import json

import numpy as np

from .gluing import EXPONENTIAL, INVERSE_TEST, GluedFunction, GluingParameter
from .scalespace import EPair, GridConfig, WeightSequence, make_pair

PROFILES = {"exponential": EXPONENTIAL, "inverse_test": INVERSE_TEST}
MAGIC = "# scglue grid v1"


class ParseError(ValueError):
    """Malformed input; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message, line=0, path=None):
        where = f"{path or '<input>'}:{line}: " if line else f"{path or '<input>'}: "
        super().__init__(where + message)
        self.line = line
        self.path = path


def _f(x):
    return repr(float(x))


def _profile_name(profile):
    for k, v in PROFILES.items():
        if v == profile:
            return k
    raise ValueError(f"unregistered profile {profile!r}")


# ------------------------------------------------------------------ CSV --

def to_csv(u):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(u, EPair):
        buf.write(f"{MAGIC} kind=EPair n_theta={u.n_theta} N={u.N} "
                  f"h_plus={_f(u.plus.h)} h_minus={_f(u.minus.h)}\n")
        w.writerow(["side", "s", "t"] + [f"v{i}" for i in range(u.N)])
        w.writerow(["const", "", ""] + [_f(x) for x in u.c])
        halves = (("plus", u.plus.r, u.plus.h), ("minus", u.minus.r, u.minus.h))
    elif isinstance(u, GluedFunction):
        a = u.param
        buf.write(f"{MAGIC} kind=GluedFunction n_theta={u.n_theta} N={u.N} a_re={_f(a.a.real)} "
                  f"a_im={_f(a.a.imag)} profile={_profile_name(a.profile)} R={_f(u.R)} h={_f(u.h)}\n")
        w.writerow(["side", "s", "t"] + [f"v{i}" for i in range(u.N)])
        halves = (("glued", u.values, u.h),)
    else:
        raise TypeError(f"cannot serialize {type(u).__name__}")
    for side, r, h in halves:
        n_t = r.shape[1]
        for i in range(r.shape[0]):
            for j in range(n_t):
                w.writerow([side, _f(i * h), _f(j / n_t)] + [_f(x) for x in r[i, j]])
    return buf.getvalue()


def _header(line, path):
    if not line.startswith(MAGIC):
        raise ParseError(f"expected '{MAGIC}' header", 1, path)
    meta = {}
    for tok in line[len(MAGIC):].split():
        if "=" not in tok:
            raise ParseError(f"bad header token {tok!r}", 1, path)
        k, v = tok.split("=", 1)
        meta[k] = v
    return meta


def _num(text, line, path, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line, path) from None


def from_csv(text, path=None):
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 0, path)
    meta = _header(lines[0], path)
    for key in ("kind", "n_theta", "N"):
        if key not in meta:
            raise ParseError(f"header lacks {key}=", 1, path)
    n_t = _num(meta["n_theta"], 1, path, int)
    N = _num(meta["N"], 1, path, int)
    rows = list(csv.reader(lines[1:]))
    if not rows or rows[0][:3] != ["side", "s", "t"] or len(rows[0]) != 3 + N:
        raise ParseError("column header must be side,s,t,v0..", 2, path)
    data = {}
    c = None
    for k, row in enumerate(rows[1:], start=3):
        if len(row) != 3 + N:
            raise ParseError(f"expected {3 + N} fields, got {len(row)}", k, path)
        vals = [_num(x, k, path) for x in row[3:]]
        if row[0] == "const":
            c = np.array(vals)
            continue
        if row[0] not in ("plus", "minus", "glued"):
            raise ParseError(f"unknown side {row[0]!r}", k, path)
        _num(row[1], k, path)
        _num(row[2], k, path)
        data.setdefault(row[0], []).append((k, vals))

    def block(side):
        entries = data.get(side, [])
        if not entries or len(entries) % n_t:
            ln = entries[-1][0] if entries else len(lines)
            raise ParseError(f"{side} rows do not fill whole rings of {n_t}", ln, path)
        return np.array([v for _, v in entries]).reshape(-1, n_t, N)

    try:
        if meta["kind"] == "EPair":
            if c is None:
                raise ParseError("missing const row", 3, path)
            hp, hm = _num(meta["h_plus"], 1, path), _num(meta["h_minus"], 1, path)
            rp, rm = block("plus"), block("minus")
            h = max(hp, hm)
            g = GridConfig(n_t, h, max(8.0, (max(len(rp), len(rm)) - 1) * h), N)
            return make_pair(c, rp, rm, g, h=(hp, hm), check_decay=False)
        if meta["kind"] == "GluedFunction":
            a = complex(_num(meta["a_re"], 1, path), _num(meta["a_im"], 1, path))
            prof = PROFILES.get(meta.get("profile", "exponential"))
            if prof is None:
                raise ParseError(f"unknown profile {meta.get('profile')!r}", 1, path)
            return GluedFunction(GluingParameter(a, prof), block("glued"), _num(meta["h"], 1, path))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), 0, path) from None
    raise ParseError(f"unknown kind {meta['kind']!r}", 1, path)


# ----------------------------------------------------------------- JSON --

def grid_dict(grid):
    return {"n_theta": grid.n_theta, "h_s": grid.h_s, "s_cut": grid.s_cut, "N": grid.N}


def weights_dict(weights):
    return {"deltas": list(weights.deltas)}


def to_json_obj(u, grid=None, weights=None):
    grid = GridConfig() if grid is None else grid
    weights = WeightSequence() if weights is None else weights
    env = {"schema": 1, "grid": grid_dict(grid), "weights": weights_dict(weights)}
    if isinstance(u, EPair):
        env.update(kind="EPair", c=u.c.tolist(),
                   plus={"h": u.plus.h, "r": u.plus.r.tolist()},
                   minus={"h": u.minus.h, "r": u.minus.r.tolist()})
    elif isinstance(u, GluedFunction):
        env.update(kind="GluedFunction", a=[u.param.a.real, u.param.a.imag],
                   profile=_profile_name(u.param.profile), R=u.R, h=u.h, values=u.values.tolist())
    else:
        raise TypeError(f"cannot serialize {type(u).__name__}")
    return env


def to_json(u, grid=None, weights=None):
    return json.dumps(to_json_obj(u, grid, weights), separators=(",", ":"))


def from_json(text, path=None):
    """Returns ``(element, GridConfig, WeightSequence)``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, path) from None
    try:
        g = obj.get("grid", {})
        grid = GridConfig(int(g.get("n_theta", 32)), float(g.get("h_s", 0.25)),
                          float(g.get("s_cut", 60.0)), int(g.get("N", 2)))
        weights = WeightSequence(tuple(obj.get("weights", {}).get("deltas", WeightSequence().deltas)))
        kind = obj["kind"]
        if kind == "EPair":
            c = np.array(obj["c"], dtype=float)
            rp = np.array(obj["plus"]["r"], dtype=float)
            rm = np.array(obj["minus"]["r"], dtype=float)
            hp, hm = float(obj["plus"]["h"]), float(obj["minus"]["h"])
            h = max(hp, hm)
            g2 = GridConfig(rp.shape[1], h, max(8.0, (max(len(rp), len(rm)) - 1) * h), c.shape[0])
            u = make_pair(c, rp, rm, g2, h=(hp, hm), check_decay=False)
        elif kind == "GluedFunction":
            prof = PROFILES[obj.get("profile", "exponential")]
            u = GluedFunction(GluingParameter(complex(*obj["a"]), prof),
                              np.array(obj["values"], dtype=float), float(obj["h"]))
        else:
            raise ParseError(f"unknown kind {kind!r}", 0, path)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid grid-function envelope: {exc}", 0, path) from None
    return u, grid, weights


def load(path):
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".csv"):
        return from_csv(text, path), None, None
    return from_json(text, path)


def dump(u, path, grid=None, weights=None):
    text = to_csv(u) if str(path).endswith(".csv") else to_json(u, grid, weights)
    with open(path, "w") as fh:
        fh.write(text)


__all__ = ["ParseError", "PROFILES", "to_csv", "from_csv", "to_json", "to_json_obj", "from_json",
           "grid_dict", "weights_dict", "load", "dump"]
