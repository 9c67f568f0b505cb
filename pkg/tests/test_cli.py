import io
import json
import subprocess
import sys

import pytest

from bmenet import make_network, metric_from_splits, sigma_splits, unit_weights
from bmenet.cli import run
from bmenet.formats import format_phylip

N1 = '{"n":5,"ordering":[1,2,3,4,5],"bridges":[[1,2]]}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def n1_matrix(tmp_path):
    net = make_network((1, 2, 3, 4, 5), [])
    from bmenet import Split

    net = make_network((1, 2, 3, 4, 5), [Split.from_part([1, 2], 5)])
    path = tmp_path / "n1.phy"
    path.write_text(format_phylip(metric_from_splits(unit_weights(sigma_splits(net)))))
    return path


def test_count():
    code, out, _ = call("count", "--n", "5")
    assert code == 0 and out.splitlines() == ["n,k0,k1,k2", "5,12,30,15"]
    code, out, _ = call("count", "--max-n", "9")
    rows = out.splitlines()
    assert rows[0] == "n,k0,k1,k2,k3,k4,k5,k6"
    assert rows[1] == "3,1,,,,,," and rows[-1] == "9,20160,272160,1134000,2079000,1871100,810810,135135"


def test_vector_sums_to_ten():
    code, out, _ = call("vector", '{"n":5,"ordering":[1,2,3,4,5],"bridges":[[4,5]]}')
    rows = out.splitlines()
    assert code == 0 and rows[0] == "i,j,x_ij" and len(rows) == 11
    assert sum(int(r.split(",")[2]) for r in rows[1:]) == 10


def test_network_argument_may_be_a_file(tmp_path):
    path = tmp_path / "net.json"
    path.write_text(N1)
    assert call("vector", str(path))[1] == call("vector", N1)[1]


def test_sigma():
    code, out, _ = call("sigma", N1)
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 8 and [3, 4, 5] in obj["splits"]


def test_enumerate_and_partitions():
    code, out, _ = call("enumerate", "--n", "6", "--k", "2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 315
    parts = "".join(call("enumerate", "--n", "6", "--k", "2", "--partition", f"{i}/4")[1] for i in range(4))
    assert parts == out


def test_minimize(n1_matrix):
    code, out, _ = call("minimize", "--k", "1", "--matrix", str(n1_matrix))
    obj = json.loads(out)
    assert code == 0 and obj["minimum"] == "32" and obj["evaluated"] == 30
    assert obj["argmin"] == [{"n": 5, "ordering": [1, 2, 3, 4, 5], "bridges": [[3, 4, 5]]}]
    assert obj["labels"]["1"] == "1"
    code, text, _ = call("minimize", "--k", "0", "--matrix", str(n1_matrix), "--format", "text")
    assert code == 0 and "minimum 16" in text and text.count("tour ") == 2
    code, text, _ = call("minimize", "--k", "2", "--matrix", str(n1_matrix), "--format", "text", "--jobs", "2")
    assert code == 0 and "tree " in text


def test_minimize_budget(n1_matrix):
    code, _, err = call("minimize", "--k", "1", "--matrix", str(n1_matrix), "--budget", "5")
    assert code == 2 and "BudgetExceeded" in err


def test_decompose(n1_matrix, tmp_path):
    code, out, _ = call("decompose", str(n1_matrix))
    obj = json.loads(out)
    assert code == 0 and obj["kalmanson"] and len(obj["system"]["splits"]) == 8
    code, out, _ = call("decompose", str(n1_matrix), "--ordering", "1,3,2,4,5")
    assert code == 1 and not json.loads(out)["kalmanson"]
    bad = tmp_path / "bad.phy"
    bad.write_text("5\n1 0 3 1 2 2\n2 3 0 2 3 3\n3 1 2 0 1 3\n4 2 3 1 0 2\n5 2 3 3 2 0\n")
    code, out, _ = call("decompose", str(bad))
    assert code == 1 and "reason" in json.loads(out)


def test_export_dot(tmp_path):
    weights = tmp_path / "w.json"
    weights.write_text(json.dumps({"n": 5, "splits": [{"part": [1, 2], "weight": "1/2"}]}))
    code, out, _ = call("export-dot", N1, "--weights", str(weights))
    assert code == 0 and out.startswith("graph network {") and 'weight="0.5"' in out
    code, out, _ = call("export-dot", N1)
    assert code == 0 and "weight" not in out


def test_verify_is_deterministic():
    code, out, _ = call("verify", "--suite", "facets51")
    obj = json.loads(out)
    assert code == 0 and obj["passed"] and len(obj["reports"]) == 62
    assert all(r["valid"] for r in obj["reports"])
    assert call("verify", "--suite", "facets51")[1] == out
    a = call("verify", "--suite", "recovery", "--quick", "--seed", "3")
    assert a[0] == 0 and a == call("verify", "--suite", "recovery", "--quick", "--seed", "3")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["count", "--n", "2"],
        ["enumerate", "--n", "5", "--k", "3"],
        ["enumerate", "--n", "5", "--k", "1", "--partition", "x"],
        ["vector", "{not json"],
        ["vector", "/no/such/file"],
        ["minimize", "--k", "1", "--matrix", "/no/such/file"],
        ["minimize", "--k", "1", "--matrix", "x", "--jobs", "0"],
        ["verify", "--suite", "nope"],
    ],
)
def test_input_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err


def test_no_floats_in_output(n1_matrix):
    _, out, _ = call("minimize", "--k", "1", "--matrix", str(n1_matrix))
    obj = json.loads(out)
    assert isinstance(obj["minimum"], str)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bmenet.cli", "count", "--n", "4"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "n,k0,k1\n4,3,3\n"
