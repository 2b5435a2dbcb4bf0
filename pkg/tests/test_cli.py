import csv
import io
import json
import random
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import planted_weierstrass
from k3lab import cli
from k3lab.errors import NoConvergence
from k3lab.forms import BinaryForm


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    ns = cli.build_parser().parse_args(list(argv))
    code = cli.run(cli.JobConfig(**vars(ns)), out, err)
    return code, out.getvalue(), err.getvalue()


# -- serialization --------------------------------------------------------

fractions = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**9)
floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(fractions, min_size=9, max_size=9))
def test_exact_form_round_trip(cs):
    f = BinaryForm(cs)
    g = cli.decode_form(json.loads(json.dumps(cli.encode_form(f))), 8)
    assert g.exact and g == f


@given(st.lists(st.tuples(floats, floats), min_size=13, max_size=13))
def test_float_form_round_trip(cs):
    f = BinaryForm([complex(a, b) for a, b in cs], exact=False)
    g = cli.decode_form(json.loads(json.dumps(cli.encode_form(f))), 12)
    assert not g.exact and g.coeffs == f.coeffs


def test_weierstrass_round_trip():
    W = planted_weierstrass(random.Random(4), "III")
    back = cli.decode_weierstrass(json.loads(json.dumps(cli.encode_weierstrass(W))))
    assert back.A == W.A and back.B == W.B


def test_decode_infers_exactness():
    f = cli.decode_form({"degree": 1, "coeffs": [1, "2/3"]}, 1)
    assert f.exact
    g = cli.decode_form({"degree": 1, "coeffs": [1, 0.5]}, 1)
    assert not g.exact


def test_decode_rejects_bad_degree():
    with pytest.raises(cli.K3LabInputError):
        cli.decode_form({"degree": 2, "coeffs": [1, 2, 3]}, 8)


# -- commands -------------------------------------------------------------


def test_analyze_cuspidal():
    code, out, _ = call("analyze")
    rep = json.loads(out)
    assert code == 0
    assert [f["type"] for f in rep["fibres"]] == ["II"] * 12
    assert rep["total_euler"] == 24 and rep["surface_smooth"]
    assert all(f["orders"] == {"a": "inf", "b": 1, "d": 2} for f in rep["fibres"])


def test_analyze_nodal_probe():
    code, out, _ = call("analyze", "--family", "nodal", "--K", "1/4")
    rep = json.loads(out)
    assert code == 0
    assert len(rep["fibres"]) == 24
    assert all(f["type"] == "I1" and f["smooth_probe"] for f in rep["fibres"])


def test_analyze_input_file(tmp_path):
    W = planted_weierstrass(random.Random(9), "I0*")
    path = tmp_path / "w.json"
    path.write_text(json.dumps(cli.encode_weierstrass(W)))
    code, out, _ = call("analyze", "--input", str(path))
    rep = json.loads(out)
    assert code == 0
    assert "I0*" in [f["type"] for f in rep["fibres"]]
    assert sum(f["euler"] for f in rep["fibres"]) == 24


def test_family_from_points(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"a": [str(k) for k in range(12)]}))
    code, out, _ = call("family", "--input", str(path), "--family", "nodal", "--K", "1/4")
    W = cli.decode_weierstrass(json.loads(out))
    assert code == 0 and W.exact
    assert W.A.coeffs[8] == cli.decode_scalar("-3/4", True)


def test_enumerate_rows():
    code, out, _ = call("enumerate", "--g", "2", "--s", "12")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert rows[-1] == {"count": 78}
    assert len(rows) == 79
    assert rows[0] == {"g": 2, "m": [0] * 11 + [2]}


def test_count_csv():
    code, out, _ = call("count", "--gmax", "3")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows == [["g", "n_g"], ["0", "1"], ["1", "24"], ["2", "324"], ["3", "3200"]]


def test_count_json():
    code, out, _ = call("count", "--gmax", "1", "--format", "json")
    assert json.loads(out) == [{"g": 0, "n_g": 1}, {"g": 1, "n_g": 24}]


@pytest.mark.parametrize("l,expected", [(1, (11, 21, 31)), (2, (15, 11, 25))])
def test_severi_quartic(l, expected):
    code, out, _ = call("severi", "--quartic", "--l", str(l))
    rep = json.loads(out)
    assert code == 0
    assert (rep["dim_W_S"], rep["kernel_dim"], rep["fibre_dim"]) == expected


def test_severi_genus():
    code, out, _ = call("severi", "--g", "7", "--h", "2")
    rep = json.loads(out)
    assert code == 0
    assert rep["node_count"] == 5 and rep["h_min_irreducible"] == 6


def test_trace_transfer_with_output(tmp_path):
    path, svg = tmp_path / "trace.jsonl", tmp_path / "trace.svg"
    code, out, _ = call("trace", "--mode", "transfer", "--m", "2,1", "--steps", "32",
                        "--output", str(path), "--svg", str(svg))
    summary = json.loads(out)
    assert code == 0
    assert summary["continuous"] and not summary["invariant_violations"]
    lines = path.read_text().splitlines()
    assert len(lines) == summary["samples"]
    assert "<svg" in svg.read_text()


def test_trace_beta():
    code, out, _ = call("trace", "--mode", "beta", "--K", "1/4", "--steps", "16")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 17
    last = complex(*map(float, rows[-1]["beta"]))
    assert abs(last - 1) < 1e-12


# -- errors ---------------------------------------------------------------


def test_input_error_exit_code_and_json():
    code, out, err = call("severi", "--quartic", "--l", "3")
    assert code == 1 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "BadDegree"
    assert set(payload) == {"error", "operation", "message"}


def test_missing_file():
    code, _, err = call("analyze", "--input", "/nonexistent/w.json")
    assert code == 1
    assert json.loads(err)["error"] == "K3LabInputError"


def test_numeric_failure_exit_code(monkeypatch):
    def boom(cfg):
        raise NoConvergence("did not converge", operation="forms.roots_with_multiplicity")

    monkeypatch.setitem(cli._HANDLERS, "count", boom)
    code, _, err = call("count")
    assert code == 2
    assert json.loads(err)["operation"] == "forms.roots_with_multiplicity"


def test_bad_arguments(capsys):
    assert cli.main(["count", "--steps", "1"]) == 1
    assert cli.main(["nosuchcommand"]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert all(json.loads(line)["error"] == "K3LabInputError" for line in err)


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "k3lab", "count", "--gmax", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "2,324"
