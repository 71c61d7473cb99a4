import json

import numpy as np
import pytest

from scglue.suites import (
    IMPRINT_CASES, RunConfig, UnknownSuite, dumps_report, merge_reports, resolve, rng_for,
    run_suite, suite_names, verdict_report,
)


def test_rng_streams_are_independent_and_reproducible():
    a = rng_for(0, "gluing").normal(size=4)
    assert np.array_equal(a, rng_for(0, "gluing").normal(size=4))
    assert not np.array_equal(a, rng_for(0, "quadrant").normal(size=4))
    assert not np.array_equal(a, rng_for(1, "gluing").normal(size=4))


def test_suite_registry():
    names = suite_names()
    assert {"gluing", "quadrant", "bundle", "functor", "all", "imprint.gluing"} <= set(names)
    for n in names:
        assert callable(resolve(n))
    with pytest.raises(UnknownSuite):
        resolve("imprint.nowhere")


def test_verify_gluing_defaults_pass():
    cfg = RunConfig(suite="gluing")
    obj = verdict_report(cfg, run_suite(cfg))
    assert obj["pass"], [c for c in obj["checks"] if not c["pass"]]
    assert obj["schema"] == 1 and obj["environment"]["grid"]["n_theta"] == 32
    assert obj["extras"]["sc1_min_slope"] >= 0.5


@pytest.mark.parametrize("case", sorted(IMPRINT_CASES))
def test_imprint_cases_pass_at_reduced_scale(case):
    cfg = RunConfig(suite=f"imprint.{case}", scale=0.3)
    rep = run_suite(cfg)
    assert rep.passed, [c.name for c in rep.failures()]


def test_report_text_is_canonical():
    cfg = RunConfig(suite="profile")
    text = dumps_report(verdict_report(cfg, run_suite(cfg)))
    obj = json.loads(text)
    assert text == dumps_report(obj) and text.endswith("\n")
    assert set(obj) == {"schema", "suite", "environment", "checks", "extras", "totals", "pass"}
    assert set(obj["checks"][0]) == {"name", "paper_ref", "samples", "defect", "threshold", "pass"}
    merged = merge_reports([("a", obj), ("b", obj)])
    assert merged["totals"]["checks"] == 2 * obj["totals"]["checks"]
