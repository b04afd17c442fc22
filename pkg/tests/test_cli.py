import csv
import io
import json
import math

import pytest

from bidisc import cli
from bidisc.io import strip_timestamp

SQRT3 = math.sqrt(3)

GOLDEN_CAPACITIES = """\
domain,k,lower,upper,exact
bidisc,1,4.0,4.0,True
bidisc,2,5.196152422706632,5.196152422706632,True
bidisc,3,8.0,8.0,True
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_csv():
    code, out, _ = run("spectrum", "--max", "10", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["value", "label_type", "k", "n"]
    values = [float(r["value"]) for r in table]
    assert values == sorted(values)
    assert values[:2] == pytest.approx([4, 3 * SQRT3])
    gliding = [r for r in table if r["label_type"] == "gliding"]
    assert len(gliding) == 1 and float(gliding[0]["value"]) == pytest.approx(2 * math.pi)
    # between 2 pi and 10 only the square's double and the pentagon
    assert [v for v in values if v > 2 * math.pi] == pytest.approx(
        [8.0, 10 * math.cos(math.pi / 10)])


def test_capacities_golden():
    code, out, _ = run("capacities", "--domain", "bidisc", "--kmax", "3", "--format", "csv")
    assert code == 0
    assert out == GOLDEN_CAPACITIES


def test_certify_i6():
    code, out, _ = run("certify", "--case", "I6", "--c", "5.6568", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    res = doc["result"]
    assert (res["A"], res["B"], res["C"]) == pytest.approx((3.56268, -2.8284, 0.44310), abs=1e-5)
    assert res["extra"]["roots"] == pytest.approx([0.214756, 0.579141], abs=1e-6)
    assert res["gamma_coverage"]["covered"]
    assert doc["schema"] == 1 and doc["command"] == "certify"


def test_certify_csv_columns():
    code, out, _ = run("certify", "--case", "I8", "--format", "csv")
    assert code == 0
    assert list(rows(out)[0])[:5] == ["case", "c", "A", "B", "C"]


def test_deltaphi_routes_in_csv():
    code, out, _ = run("deltaphi", "--n", "10", "--theta", "0.5", "0.7", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["theta", "quad", "ode", "difference"]
    assert all(abs(float(r["difference"])) <= 1e-6 for r in table)


def test_psi_circle():
    code, out, _ = run("psi", "--c", "5", "--coeff", "1:1,0,0,0", "--format", "json")
    assert code == 0
    value = json.loads(out)["result"]["psi"]
    assert value == pytest.approx(math.pi - 5 * (0.5 + 1 / math.pi), abs=1e-10)


def test_obstruct_and_distinguish():
    code, out, _ = run("obstruct", "--source", "complex_bidisc", "--target", "bidisc",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["violations"] == [2, 3]
    code, out, _ = run("distinguish", "--R", "0.95", "--format", "csv")
    assert code == 0
    assert rows(out)[0]["separating_k"] == "2"


@pytest.mark.parametrize("argv", [
    ["spectrum"],
    ["spectrum", "--max", "-1"],
    ["capacities", "--domain", "torus", "--kmax", "3"],
    ["capacities", "--domain", "bidisc", "--kmax", "0"],
    ["orbit", "--k", "3", "--n", "4"],
    ["certify", "--case", "I9"],
    ["distinguish", "--R", "1.5"],
    ["nonsense"],
])
def test_invalid_input_exits_with_2(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert err


def test_numerical_failure_exits_with_3():
    code, _, err = run("shoot", "--k", "2", "--m", "5", "--n", "1")
    assert code == 3
    assert err


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("BIDISC_OUT_DIR", str(tmp_path))
    code, out, _ = run("capacities", "--domain", "ball:2", "--kmax", "4", "--format", "json")
    assert code == 0
    written = list(tmp_path.iterdir())
    assert len(written) == 1 and written[0].suffix == ".json"
    doc = json.loads(written[0].read_text())
    assert [c["lower"] for c in doc["result"]["capacities"]] == [2, 2, 4, 4]


def test_explicit_out_file(tmp_path):
    target = tmp_path / "spec.csv"
    code, out, _ = run("spectrum", "--max", "6", "--format", "csv", "--out", str(target))
    assert code == 0
    assert target.read_text().startswith("value,label_type,k,n")


def test_repeated_runs_are_identical():
    argv = ["scan-negativity", "--family", "W2", "--c", "5.6", "--samples", "200", "--seed", "4"]
    first, second = (strip_timestamp(run(*argv)[1]) for _ in range(2))
    assert first == second
    assert first["result"]["violations"] == 0


def test_help_lists_csv_columns():
    code, out, _ = run("orbit", "--help")
    assert code == 0
    assert "CSV columns: t, x1, x2, y1, y2" in out
