import json

import jsonschema
import pytest

from fregereals.report import FAIL, INDETERMINATE, PASS, REPORT_SCHEMA, CheckRecord, CheckReport, run_check


def test_fail_requires_witness():
    with pytest.raises(ValueError):
        CheckRecord("x", FAIL, 3)


def test_run_check_picks_first_failure():
    rec = run_check("even", [2, 4, 5, 7], lambda n: n % 2 == 0, describe=str)
    assert rec.status == FAIL and rec.witness == "5"
    assert rec.samples == 3  # evaluation stops at the first counterexample
    assert run_check("ok", [1, 2], lambda n: True).status == PASS
    assert run_check("open", [1, 2], lambda n: None if n == 2 else True).status == INDETERMINATE


def test_report_ordering_and_counts():
    rep = CheckReport("suite", "model")
    rep.add(CheckRecord("zeta", PASS, 1))
    rep.add(CheckRecord("alpha", INDETERMINATE, 1))
    assert [r.name for r in rep.ordered()] == ["alpha", "zeta"]
    assert rep.counts() == {PASS: 1, FAIL: 0, INDETERMINATE: 1}
    assert rep.ok and not rep.all_pass


def test_report_json_shape():
    rep = CheckReport("suite", "model", 3, 10)
    rep.add(CheckRecord("b", FAIL, 2, "w"))
    doc = json.loads(rep.to_json())
    jsonschema.validate({"tool_version": "0", "config": {}, **doc}, REPORT_SCHEMA)
    assert doc["checks"][0] == {"name": "b", "status": "fail", "samples": 2, "mode": "sampled", "witness": "w"}
