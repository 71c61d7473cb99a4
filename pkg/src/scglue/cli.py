"""Command-line harness: ``scglue {verify,glue,profile,functor,report}``.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.
"""
import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .functor import (
    EMBEDDINGS, GLUING_FUNCTOR, element_distance, extend_to_manifold, image_of,
)
from .gluing import GluingParameter, preglue
from .imprint import Report
from .scalespace import ConfigurationError, GridConfig, WeightSequence, band_limited_pair
from .serialize import PROFILES, ParseError, dump, load, to_csv
from .suites import (
    RunConfig, UnknownSuite, bilevel_csv, bilevel_tables, corner_lattice_csv, dumps_report,
    merge_reports, resolve, rng_for, run_suite, suite_functor, suite_names, verdict_report,
)

CONFIG_KEYS = {
    "suite": str, "n_theta": int, "h_s": float, "s_cut": float, "N": int, "weights": str,
    "moduli": str, "angles": int, "n": int, "pairs": int, "samples": int, "seed": int,
    "scale": float, "out": str,
}


class UsageError(Exception):
    pass


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment.  Returns a dict."""
    out = {}
    with open(path) as fh:
        for k, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", k, path)
            key, val = (p.strip() for p in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ParseError(f"unknown key {key!r}", k, path)
            try:
                out[key] = CONFIG_KEYS[key](val)
            except ValueError:
                raise ParseError(f"bad value for {key}: {val!r}", k, path) from None
    return out


def _floats(text):
    return tuple(float(x) for x in str(text).replace(",", " ").split())


def build_config(args):
    vals = read_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            vals[key] = v
    grid = GridConfig(vals.get("n_theta", 32), vals.get("h_s", 0.25), vals.get("s_cut", 60.0),
                      vals.get("N", 2))
    weights = WeightSequence(_floats(vals["weights"])) if "weights" in vals else WeightSequence()
    kw = {k: vals[k] for k in ("angles", "n", "pairs", "samples", "seed", "scale", "out")
          if k in vals}
    if "moduli" in vals:
        kw["moduli"] = _floats(vals["moduli"])
    return RunConfig(suite=vals.get("suite", "gluing"), grid=grid, weights=weights, **kw)


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def summary_table(rep, stream=None):
    stream = sys.stderr if stream is None else stream
    w = max([len(c.name) for c in rep.checks] + [5])
    for c in rep.checks:
        stream.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{w}}  defect={c.defect:.3e}  "
                     f"threshold={c.threshold:.1e}  samples={c.samples}\n")
    n_pass = sum(c.passed for c in rep.checks)
    stream.write(f"{rep.name}: {n_pass}/{len(rep.checks)} checks passed\n")


# ------------------------------------------------------------- commands --

def cmd_verify(args):
    try:
        resolve(args.suite)
    except UnknownSuite:
        raise UsageError(f"unknown suite {args.suite!r}; known: {', '.join(suite_names())}")
    cfg = replace(build_config(args), suite=args.suite)
    rep = run_suite(cfg)
    obj = verdict_report(cfg, rep)
    summary_table(rep)
    _write(dumps_report(obj), cfg.out)
    if args.tables:
        if args.suite in ("quadrant", "all"):
            _write(corner_lattice_csv(min(cfg.n, 4), min(cfg.n, 4)), f"{args.tables}.lattice.csv")
        if args.suite in ("bundle", "all"):
            for name, (_, rows) in bilevel_tables(cfg).items():
                _write(bilevel_csv(rows), f"{args.tables}.bilevel.{name}.csv")
    return 0 if obj["pass"] else 1


def cmd_glue(args):
    prof = PROFILES[args.profile]
    if args.input:
        u, grid, _ = load(args.input)
    else:
        grid = GridConfig()
        u = band_limited_pair(rng_for(args.seed, "glue"), grid)
    a = GluingParameter(args.a_mod * np.exp(1j * args.a_arg), prof)
    v = preglue(a, u)
    out = args.out or "-"
    if out == "-" or out.endswith(".csv"):
        _write(to_csv(v), out)
    else:
        dump(v, out, grid)
    sys.stderr.write(f"R = {a.R!r}, theta = {a.theta!r}\n")
    return 0


def cmd_profile(args):
    prof = PROFILES[args.profile]
    if not (0 < args.from_ <= 1 and 0 < args.to <= 1) or args.steps < 1:
        raise UsageError("profile range must lie in (0, 1] with steps >= 1")
    s = np.linspace(args.from_, args.to, args.steps + 1)
    lines = ["s,phi"] + [f"{float(x)!r},{float(prof.forward(x))!r}" for x in s]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_functor(args):
    cfg = RunConfig(suite=f"functor.{args.check}", seed=args.seed,
                    scale=args.scale if args.scale is not None else 1.0)
    if args.input:
        u, _, _ = load(args.input)
        emb = EMBEDDINGS[args.target]()
        if u.N != emb.N:
            raise UsageError(f"input has N={u.N}, target {args.target} lives in R^{emb.N}")
        ops = extend_to_manifold(GLUING_FUNCTOR, emb)
        rep = Report(f"functor.{args.check}[{args.target}]")
        ok, margin = image_of(u).contained_in(emb.margin)
        rep.add("input_in_tube", max(0.0, -margin), 0.0, 1, "Proposition: extension of functors")
        if ok:
            v = ops.retraction(u)
            w = ops.retraction(v)
            rep.add("XR_idempotent", element_distance(w, v), 1e-12, 1,
                    "Proposition: extension of functors")
            rep.add("XR_lands_on_manifold", 0.0 if ops.member(v) else 1.0, 0.0, 1,
                    "Proposition: extension of functors")
    else:
        rep = suite_functor(cfg, checks=(args.check,))
        rep.name = f"functor.{args.check}"
        if args.check == "retraction":
            keep = [c for c in rep.checks
                    if not any(c.name.startswith(t + ".") for t in EMBEDDINGS if t != args.target)]
            rep.checks = keep
    obj = verdict_report(cfg, rep)
    summary_table(rep)
    _write(dumps_report(obj), args.out)
    return 0 if obj["pass"] else 1


def cmd_report(args):
    objs = []
    for p in args.paths:
        try:
            with open(p) as fh:
                o = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, p) from None
        if o.get("schema") != 1 or "totals" not in o:
            raise ParseError("not a schema-1 verdict report", 0, p)
        objs.append((p, o))
    merged = merge_reports(objs)
    t = merged["totals"]
    sys.stderr.write(f"{len(objs)} reports: {t['passed']}/{t['checks']} checks passed\n")
    _write(dumps_report(merged), args.out)
    return 0 if merged["pass"] else 1


# --------------------------------------------------------------- parser --

def _add_run_flags(p):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.add_argument("--scale", type=float, help="sample-count multiplier (1.0 = full)")
    p.add_argument("--n", type=int, help="quadrant lattice size bound n+m")
    p.add_argument("--n-theta", dest="n_theta", type=int)
    p.add_argument("--h-s", dest="h_s", type=float)
    p.add_argument("--s-cut", dest="s_cut", type=float)
    p.add_argument("--weights", help="comma-separated weight sequence delta_0 < delta_1 < ...")
    p.add_argument("--moduli", help="comma-separated gluing moduli")
    p.add_argument("--angles", type=int)
    p.add_argument("--pairs", type=int)
    p.add_argument("--samples", type=int)


def build_parser():
    ap = argparse.ArgumentParser(prog="scglue", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run a named check suite")
    v.add_argument("suite", help="one of: " + ", ".join(suite_names()))
    v.add_argument("--tables", help="prefix for CSV tables (lattice, bi-level)")
    _add_run_flags(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("glue", help="pre-glue a pair and write the glued map")
    g.add_argument("--a-mod", type=float, required=True)
    g.add_argument("--a-arg", type=float, default=0.0, help="argument of a in radians")
    g.add_argument("--input", help="EPair JSON or CSV (default: random pair from --seed)")
    g.add_argument("--out", help=".csv or .json (default: CSV on stdout)")
    g.add_argument("--profile", choices=sorted(PROFILES), default="exponential")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_glue)

    pr = sub.add_parser("profile", help="CSV of (s, phi(s))")
    pr.add_argument("--from", dest="from_", type=float, default=0.15)
    pr.add_argument("--to", type=float, default=1.0)
    pr.add_argument("--steps", type=int, default=100)
    pr.add_argument("--profile", choices=sorted(PROFILES), default="exponential")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_profile)

    f = sub.add_parser("functor", help="construction-functor checks")
    f.add_argument("--target", choices=("sphere", "circle", "torus"), default="sphere")
    f.add_argument("--input", help="pair JSON/CSV with values in the target's ambient space")
    f.add_argument("--check", choices=("axioms", "retraction", "transition"), default="axioms")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--scale", type=float)
    f.add_argument("--out")
    f.set_defaults(func=cmd_functor)

    r = sub.add_parser("report", help="merge JSON verdict reports")
    r.add_argument("paths", nargs="+")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, ConfigurationError, OSError) as exc:
        sys.stderr.write(f"scglue: error: {exc}\n")
        return 2

