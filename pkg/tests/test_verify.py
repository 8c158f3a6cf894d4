import json

import pytest

from qmcoh.verify import (
    REGISTRY,
    registry_rows,
    report_json,
    run_suite,
    suite_names,
)

ALL = run_suite("all", seed=42)


def by_id(report):
    return {e["id"]: e for e in report["identities"]}


def test_report_shape():
    assert ALL["suite"] == "all"
    assert ALL["seed"] == 42
    assert len(ALL["identities"]) == len(REGISTRY) == 26
    ids = [e["id"] for e in ALL["identities"]]
    assert ids == sorted(ids)
    for e in ALL["identities"]:
        assert set(e) == {
            "id", "suite", "law", "checked", "failures", "max_error_bound",
        }
        assert e["checked"] > 0
    assert ALL["failures_total"] == sum(
        len(e["failures"]) for e in ALL["identities"]
    )
    assert ALL["passed"] == (ALL["failures_total"] == 0)


def test_only_the_plain_kernel_change_fails():
    failing = {
        e["id"] for e in ALL["identities"] if e["failures"]
    }
    assert failing == {"kernel-change"}
    entries = by_id(ALL)
    assert entries["kernel-change-exact"]["failures"] == []
    assert entries["kernel-change-exact"]["max_error_bound"] == "0"


def test_reports_are_byte_identical_across_runs():
    again = run_suite("all", seed=42)
    assert report_json(ALL) == report_json(again)
    parsed = json.loads(report_json(ALL))
    assert parsed["failures_total"] == ALL["failures_total"]


def test_suite_filtering():
    qm = run_suite("qm", seed=1)
    assert {e["suite"] for e in qm["identities"]} == {"qm"}
    assert len(qm["identities"]) == 2
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("nope")
    assert set(suite_names()) == {
        "qm", "chains", "cochains", "kernels", "model", "theta",
        "sections", "spectral", "all",
    }


def test_registry_rows_are_unique_and_tagged():
    rows = registry_rows()
    ids = [r[0] for r in rows]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    for ident, suite, law in rows:
        assert suite in suite_names()
        assert law


def test_finite_fiber_fixture_is_rejected_for_extension_suites():
    with pytest.raises(ValueError, match="free"):
        run_suite("model", fixture="z4-hs", seed=0)
    spec = run_suite("spectral", fixture="z4-hs", seed=0)
    assert spec["passed"]


def test_split_swap_fixture_runs_the_section_suite():
    rep = run_suite("sections", fixture="split-swap-dec", seed=7,
                    samples=3)
    assert rep["passed"]


def test_timings_stay_out_of_the_payload_by_default():
    assert all("wall_time" not in e for e in ALL["identities"])
    timed = run_suite("qm", seed=0, timings=True)
    assert all("wall_time" in e for e in timed["identities"])


def test_parameter_validation():
    with pytest.raises(ValueError, match="samples"):
        run_suite("qm", samples=0)
    with pytest.raises(ValueError, match="fixture"):
        run_suite("qm", fixture="missing")
