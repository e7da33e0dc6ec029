import io
import json
import subprocess
import sys

import jsonschema
import pytest

from fregereals.cli import run
from fregereals.report import REPORT_SCHEMA


def call(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err, env={} if env is None else env)
    return code, out.getvalue(), err.getvalue()


def test_check_domain_all_pass():
    code, out, _ = call("check-domain", "--model", "rational-translations", "--seed", "7", "--samples", "200")
    assert code == 0
    assert "FAIL" not in out and "summary: 15 pass, 0 fail" in out


def test_check_domain_failure_exit():
    code, out, _ = call("check-domain", "--model", "dyadic-translations", "--samples", "50", "--bound", "1/3")
    assert code == 1
    assert "FAIL          completeness: upper limit at 1/3" in out


def test_finite_check_expected_outcomes():
    code, out, _ = call("finite-check", "--class", "E1")
    assert code == 0
    assert out.splitlines()[0] == "L:false L*:true P:false P*:true M:false M*:true"
    code, out, _ = call("finite-check", "--class", "E0")
    assert code == 0 and out.splitlines()[0] == "L:true L*:true P:true P*:true M:true M*:true"


def test_finite_check_custom_class():
    cls = json.dumps({"carrier": [0, 1], "relations": [[[0, 1], [1, 0]]]})
    code, out, _ = call("finite-check", "--class", cls)
    assert code == 0 and out.startswith("L:")
    assert call("finite-check", "--class", "{oops")[0] == 2


def test_ratio_cross_domain_equal():
    code, out, _ = call("ratio", "--a", "2/3:1/3@rat", "--b", "4/6:2/6@bic")
    assert code == 0
    assert "Equal" in out.splitlines()


def test_ratio_streams_and_ks():
    code, out, _ = call("ratio", "--a", "sqrt(2):1@str", "--b", "3/2:1@str")
    assert code == 0 and "order: Less" in out
    code, out, _ = call("ratio", "--a", "1/2:1@ks", "--b", "1:2@dyad", "--support", '{"3": "1"}')
    assert code == 0 and "Equal" in out.splitlines()


def test_cf_and_indeterminate_warning():
    code, out, err = call("cf", "--a", "sqrt(2):1@str")
    assert code == 0 and "[1, 2, 2, 2, 2, 2, 2, 2]" in out and err == ""
    code, out, err = call("cf", "--a", "sqrt(2):1@str", "--fuel", "4")
    assert code == 0 and "warning: 1 indeterminate" in err


def test_embed_extensions_cuts():
    assert call("embed", "--support", '{"2": "1/2", "3": "1"}', "--samples", "100")[0] == 0
    code, out, _ = call("extensions", "--k", "16", "--samples", "50")
    assert code == 0 and out.startswith("prefix: {}, {{}}")
    code, out, _ = call("cuts", "--cut", "1/3", "--samples", "200")
    assert code == 0 and "positive: True" in out
    assert call("cuts", "--cut", "sqrt(2)", "--samples", "200")[0] == 0


@pytest.mark.parametrize("argv", [
    (),
    ("bogus",),
    ("check-domain",),
    ("check-domain", "--model", "nope"),
    ("check-domain", "--model", "ks-embedded"),
    ("check-domain", "--model", "ks-embedded", "--support", "{bad"),
    ("ratio", "--a", "1:2"),
    ("ratio", "--a", "1:2@xyz"),
    ("ratio", "--a", "sqrt(2):1@rat"),
    ("cf", "--a", "1:2@rat", "--samples", "0"),
    ("cuts", "--seed", "x"),
])
def test_usage_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and "usage error" in err


def test_json_report_validates_and_is_deterministic():
    argv = ("check-domain", "--model", "bicimal-translations", "--samples", "60", "--json")
    code, out, _ = call(*argv)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["config"]["samples"] == 60 and doc["summary"]["fail"] == 0
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert call(*argv)[1] == out


@pytest.mark.parametrize("argv", [
    ("finite-check", "--class", "E1", "--json"),
    ("ratio", "--a", "2/3:1/3@rat", "--b", "4/6:2/6@bic", "--json"),
    ("cf", "--a", "7:3@rat", "--json"),
    ("embed", "--samples", "50", "--json"),
    ("extensions", "--k", "8", "--json"),
    ("cuts", "--samples", "50", "--json"),
])
def test_every_subcommand_emits_valid_json(argv):
    code, out, _ = call(*argv)
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("model = rational-translations\nseed = 5\nsamples = 40\nfuel = 999\noutput = json\n")
    code, out, _ = call("check-domain", "--config", str(cfg))
    doc = json.loads(out)
    assert code == 0
    assert doc["config"] == {"subcommand": "check-domain", "model": "rational-translations", "seed": 5,
                             "samples": 40, "fuel": 999, "output": "json"}
    code, out, _ = call("check-domain", "--config", str(cfg), "--samples", "30", "--seed", "1")
    doc = json.loads(out)
    assert (doc["config"]["samples"], doc["config"]["seed"], doc["config"]["fuel"]) == (30, 1, 999)
    assert call("check-domain", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_env_fuel_default():
    code, out, _ = call("cf", "--a", "7:3@rat", "--json", env={"FREGE_FUEL": "77"})
    assert json.loads(out)["config"]["fuel"] == 77
    code, out, _ = call("cf", "--a", "7:3@rat", "--json", "--fuel", "5", env={"FREGE_FUEL": "77"})
    assert json.loads(out)["config"]["fuel"] == 5
    assert call("cf", "--a", "7:3@rat", env={"FREGE_FUEL": "-3"})[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fregereals", "finite-check", "--class", "E0"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert proc.stdout.startswith("L:true")
    proc = subprocess.run([sys.executable, "-m", "fregereals", "nope"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 2
