import argparse
import io
import json
import math
import subprocess
import sys

import pytest

from pvif.cli import complex_arg, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--no-meta")
    return code, json.loads(text)


def test_connect_tetrahedral_triple():
    code, doc = run_json("connect", "--x0", "3", "--x1", "3", "--xinf", "3", "--mu", "-1")
    assert code == 0 and doc["schema"] == "pvif/1"
    sigma = doc["result"]["critical"]["sigma"]
    assert sigma[0] == pytest.approx(1)
    assert sigma[1] == pytest.approx(2 / math.pi * math.log((3 + math.sqrt(5)) / 2))


def test_connect_direct_map_round_trip():
    code, doc = run_json("connect", "--sigma", "0.3,0.2", "--a", "1", "--mu", "0.3")
    t = doc["result"]["triple"]
    args = [f"{t[k][0]!r},{t[k][1]!r}" for k in ("x0", "x1", "xinf")]
    code, back = run_json("connect", "--x0", args[0], "--x1", args[1], "--xinf", args[2], "--mu", "0.3")
    assert code == 0
    assert back["result"]["critical"]["sigma"] == pytest.approx([0.3, 0.2])
    assert back["result"]["critical"]["a"] == pytest.approx([1.0, 0.0], abs=1e-9)


def test_domain_error_has_tag_and_exit_one():
    code, doc = run_json("connect", "--x0", "2", "--x1", "1", "--xinf", "2", "--mu", "0.25")
    assert code == 1
    assert doc["error"]["tag"] == "invalid_monodromy"


def test_usage_error_exit_two(capsys):
    assert run("connect", "--x0", "3")[0] == 2
    assert run("braid", "--x0", "1,2,3", "--x1", "0", "--xinf", "0", "--mu", "1", "--word", "b1")[0] == 2
    assert run("nosuchcommand")[0] == 2


def test_braid_command():
    code, doc = run_json("braid", "--x0", "0", "--x1", "1", "--xinf", "1", "--mu", "0.25", "--word", "b1 b2 b1")
    assert code == 0
    code, other = run_json("braid", "--x0", "0", "--x1", "1", "--xinf", "1", "--mu", "0.25", "--word", "b2 b1 b2")
    assert doc["result"]["output"] == other["result"]["output"]


def test_stokes_orbit():
    code, doc = run_json("stokes", "--d", "2", "--orbit", "3,3,3")
    assert doc["result"]["upper"] == [-3.0, 3.0, -3.0]
    assert doc["result"]["orbit_word"]


def test_nk_csv_default():
    code, text = run("nk", "--max", "5")
    assert code == 0
    assert text.splitlines() == ["k,N_k", "1,1", "2,1", "3,12", "4,620", "5,87304"]


def test_qh_counts():
    code, doc = run_json("qh")
    assert [r["N_k"] for r in doc["result"]["nk"]] == [1, 1, 12, 620, 87304]


def test_catalog_entry_and_list():
    code, doc = run_json("catalog", "--case", "A3", "--variant", "i")
    assert code == 0 and doc["result"]["ok"]
    code, doc = run_json("catalog", "--list")
    assert len(doc["result"]["entries"]) == 11
    code, doc = run_json("catalog", "--case", "A3", "--variant", "ix")
    assert code == 1 and doc["error"]["tag"] == "unknown_variant"


def test_pvi_series_and_integrate():
    code, doc = run_json("pvi-series", "--sigma", "0.3,0.1", "--a", "1", "--mu", "0.2", "--order", "6")
    assert code == 0
    code, doc = run_json("pvi-integrate", "--x", "0.3,0.2", "--y", "0.15,0.1", "--yp", "0.3", "--mu", "0.3",
                         "--to", "0.6,0.5")
    assert code == 0


def test_picard_command():
    code, doc = run_json("picard", "--nu1", "0.3,0.2", "--nu2", "0.7,-0.1", "--x", "0.1,0.05", "0.2")
    assert code == 0


def test_frobenius_command():
    code, doc = run_json("frobenius", "--x0", "0", "--x1", "-1", "--xinf", "-1", "--mu", "-0.25")
    assert code == 0


def test_output_is_deterministic_without_meta():
    a = run("connect", "--x0", "3", "--x1", "3", "--xinf", "3", "--mu", "-1", "--no-meta")
    b = run("connect", "--x0", "3", "--x1", "3", "--xinf", "3", "--mu", "-1", "--no-meta")
    assert a == b


def test_meta_block():
    code, text = run("nk", "--max", "2", "--format", "json")
    meta = json.loads(text)["meta"]
    assert set(meta) == {"version", "argv", "timestamp"}


def test_table_format():
    code, text = run("stokes", "--d", "2", "--format", "table")
    assert code == 0 and "upper" in text


def test_acceptance_subset():
    code, doc = run_json("acceptance", "--only", "1", "9")
    assert code == 0 and doc["result"]["ok"]


@pytest.mark.parametrize("text,value", [("1,2", 1 + 2j), ("-0.5", -0.5), ("1e-3,-2", 1e-3 - 2j)])
def test_complex_arg(text, value):
    assert complex_arg(text) == value


@pytest.mark.parametrize("text", ["1,2,3", "abc", ""])
def test_complex_arg_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        complex_arg(text)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pvif.cli", "stokes", "--d", "1", "--no-meta"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["upper"] == [-2.0]
