"""The thirteen acceptance criteria at their stated tolerances and budgets.

Each test prints one ``PASS``/``FAIL`` line (visible in ``pytest -v`` output)
with the measured defect and the wall time against its budget.  Run the file
directly with ``python3 tests/test_acceptance.py`` for the same lines without
pytest.
"""
import sys
import time

import numpy as np

from scglue.gluing import DEFAULT_CUTOFF, EXPONENTIAL
from scglue.suites import (
    PHI_QUARTER, RunConfig, dumps_report, plumbing_associativity, run_suite, suite_bundle,
    suite_cutoff, suite_functor, suite_gluing, suite_profile, suite_quadrant, suite_sccalc,
    suite_submersion, verdict_report,
)

CFG = RunConfig()


def _say(capsys, n, title, ok, elapsed, budget, detail):
    line = (f"[{'PASS' if ok else 'FAIL'}] AC{n:<2} {title:<34} {elapsed:7.2f}s / {budget:g}s"
            f"  {detail}")
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            sys.stdout.write("\n" + line + "\n")


def _run(capsys, n, title, budget, body):
    t0 = time.perf_counter()
    rep, detail = body()
    elapsed = time.perf_counter() - t0
    fails = [c.name for c in rep.checks if not c.passed] if rep is not None else []
    ok = not fails and elapsed < budget
    _say(capsys, n, title, ok, elapsed, budget, detail if not fails else f"failed: {fails}")
    assert not fails, fails
    assert elapsed < budget


def _worst(rep, *names):
    return max(rep.check(n).defect for n in names)


def test_ac01_profile_constant(capsys):
    def body():
        rep = suite_profile(CFG)
        phi = EXPONENTIAL.forward(0.25)
        rep.add("quoted_digits_1e9", abs(np.floor(phi * 1e4) / 1e4 - PHI_QUARTER), 1e-9, 1)
        return rep, f"phi(1/4)={phi!r}"
    _run(capsys, 1, "profile constant", 1.0, body)


def test_ac02_cutoff(capsys):
    def body():
        rep = suite_cutoff(CFG)
        s = np.linspace(-3, 3, 10001)
        return rep, f"sym={float(np.max(np.abs(DEFAULT_CUTOFF(s) + DEFAULT_CUTOFF(-s) - 1))):.1e}"
    _run(capsys, 2, "cut-off conditions", 1.0, body)


def test_ac03_gluing_section_identity(capsys):
    def body():
        rep = suite_gluing(CFG, parts=("section",))
        c = rep.check("section_identity_H3_rel")
        assert c.samples == 20 * 12
        return rep, (f"rel={c.defect:.1e} idem={rep.check('retraction_idempotent').defect:.1e}"
                     f" n={c.samples}")
    _run(capsys, 3, "gluing section identity", 60.0, body)


def test_ac04_recovery_at_zero(capsys):
    def body():
        rep = suite_gluing(CFG, parts=("zero",))
        return rep, f"mismatches={rep.check('recovery_at_zero_bitwise').defect:g}"
    _run(capsys, 4, "recovery at a=0 (bitwise)", 60.0, body)


def test_ac05_gluing_sc1(capsys):
    def body():
        rep = suite_gluing(CFG, parts=("sc1",))
        assert rep.check("sc1_slope").samples == 5
        return rep, f"min slope={rep.extras['sc1_min_slope']:.3f}"
    _run(capsys, 5, "sc1 of gluing retraction", 120.0, body)


def test_ac06_shift_dichotomy(capsys):
    def body():
        rep = suite_sccalc(CFG, parts=("shift",))
        return rep, (f"min ratio={min(rep.extras['triangle_ratios']):.3f}"
                     f" smooth slope={rep.extras['shift_min_slope']:.3f}")
    _run(capsys, 6, "shift-map dichotomy", 10.0, body)


def test_ac07_chain_rule(capsys):
    def body():
        rep = suite_sccalc(CFG, parts=("chain",))
        assert any("gluing" in c.name for c in rep.checks)
        return rep, f"max defect={max(c.defect for c in rep.checks):.1e}"
    _run(capsys, 7, "chain rule", 30.0, body)


def test_ac08_degeneracy(capsys):
    def body():
        rep = suite_quadrant(CFG)
        assert rep.check("splicing_preserves_degeneracy").samples == 1000
        return rep, f"lattice points={rep.check('corner_lattice_additivity').samples}"
    _run(capsys, 8, "degeneracy index", 10.0, body)


def test_ac09_submersion(capsys):
    def body():
        rep = suite_submersion(CFG)
        idem = _worst(rep, "product.rho_idempotent", "fibered.sigma_idempotent",
                      "product.tau_idempotent", "fibered.delta_idempotent")
        assert all(c.samples >= 1000 for c in rep.checks)
        return rep, f"worst idempotence={idem:.1e}"
    _run(capsys, 9, "submersion formulas", 10.0, body)


def test_ac10_plumbing_associativity(capsys):
    def body():
        rep = plumbing_associativity(CFG, n_tuples=1000)
        return rep, (f"members={rep.extras['members']}"
                     f" canon={rep.check('canonical_agreement').defect:.1e}")
    _run(capsys, 10, "plumbing associativity", 60.0, body)


def test_ac11_functor(capsys):
    def body():
        rep = suite_functor(CFG, checks=("axioms", "retraction"))
        return rep, (f"comp={rep.check('axioms.composition').defect:.1e}"
                     f" XR={rep.check('sphere.XR_idempotent').defect:.1e}")
    _run(capsys, 11, "functor axioms", 30.0, body)


def test_ac12_strong_bundle(capsys):
    def body():
        rep = suite_bundle(CFG)
        return rep, f"sb plumbing={rep.check('sb_plumbing.canonical_agreement').defect:.1e}"
    _run(capsys, 12, "strong-bundle checks", 60.0, body)


def test_ac13_determinism(capsys):
    def body():
        texts = []
        for _ in range(2):
            cfg = RunConfig(suite="sccalc", seed=1234)
            texts.append(dumps_report(verdict_report(cfg, run_suite(cfg))).encode())
        cfg = RunConfig(suite="quadrant", seed=1234, n=4, scale=0.2)
        a = dumps_report(verdict_report(cfg, run_suite(cfg))).encode()
        b = dumps_report(verdict_report(cfg, run_suite(cfg))).encode()
        ok = texts[0] == texts[1] and a == b
        assert ok
        return None, f"identical bytes ({len(texts[0])} + {len(a)})"
    _run(capsys, 13, "determinism", 60.0, body)


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn(None)
            except AssertionError:
                fails += 1
    sys.exit(1 if fails else 0)
