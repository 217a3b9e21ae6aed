import csv
import io
import json
import subprocess
import sys

import pytest

from sparsedio import Instance
from sparsedio.cli import main
from sparsedio.solver import m0_sweep


@pytest.fixture
def inst(tmp_path):
    def write(gens, d=None, name="x.json"):
        path = tmp_path / name
        d = len(gens[0]) if d is None else d
        path.write_text(json.dumps({"d": d, "generators": gens}))
        return str(path)
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_m0_member(inst, capsys):
    code, obj = run_json(capsys, "m0", inst([[4], [6], [15]]), "--rhs", "85")
    assert code == 0
    assert obj == {"member": True, "m0": 2, "witness": [10, 0, 3]}


def test_m0_non_member(inst, capsys):
    code, obj = run_json(capsys, "m0", inst([[4], [6], [15]]), "--rhs", "17")
    assert code == 1 and obj["member"] is False


def test_m0_vector(inst, capsys):
    code, obj = run_json(capsys, "m0", inst([[1, 1], [2, 1]]), "--rhs", "3,2")
    assert code == 0 and obj["m0"] == 2


def test_sweep_csv(inst, capsys):
    path = inst([[4], [6], [15]])
    code, out, _ = run(capsys, "sweep", path, "--max", 100)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "b,m0" and "\r" not in out
    assert {"0,0", "17,", "25,3", "85,2"} <= set(lines)
    rows = list(csv.DictReader(io.StringIO(out)))
    ref = m0_sweep(Instance.knapsack([4, 6, 15]), 100).values
    assert {int(r["b"]): (int(r["m0"]) if r["m0"] else None) for r in rows} == ref


def test_sweep_out_file_and_threads(inst, capsys, tmp_path):
    path = inst([[4], [6], [15]])
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "sweep", path, "--max", 222, "--out", a)[0] == 0
    assert run(capsys, "sweep", path, "--max", 222, "--out", b, "--threads", 4)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().count(b"\n") == 224


def test_sweep_needs_knapsack(inst, capsys):
    assert run(capsys, "sweep", inst([[1, 1]]), "--max", 5)[0] == 2


def test_bounds(inst, capsys):
    code, obj = run_json(capsys, "bounds", inst([[4], [6], [15]]))
    assert code == 0
    assert obj["rank_height"] == 5 and obj["knapsack"] == 4
    assert obj["h_squared"] == "277/1" and obj["r"] == 1 and obj["max_norm"] == 15
    assert isinstance(obj["eisenbrand_shmonin"], float)
    assert obj["sinc_threshold"] == "3/1"


def test_bounds_vectors(inst, capsys):
    code, obj = run_json(capsys, "bounds", inst([[1, 1], [2, 1], [4, 1]]))
    assert code == 0
    assert obj["h_squared"] == "14/1" and obj["rank_height"] == 3 and obj["sinc_threshold"] is None


def test_period(inst, capsys):
    code, obj = run_json(capsys, "period", inst([[4], [6], [15]]))
    assert code == 0
    assert obj["L"] == 60 and obj["N0_period"] == 41 and obj["verified"] is True
    assert obj["minimal_period_observed"] == 60 and obj["M0_exact"] == 3
    assert obj["M0_argmax"] == [25, 29, 37, 41]


def test_frobenius(inst, capsys):
    code, obj = run_json(capsys, "frobenius", inst([[4], [6], [15]]), "--subsets")
    assert code == 0
    assert obj["set"]["frobenius"] == 17 and obj["N0"] == 41
    assert {"subset": [4, 15], "g": 1, "frobenius": 41} in obj["subsets"]
    assert {"subset": [4], "g": 4, "frobenius": None} in obj["subsets"]


def test_sparsify_knapsack(inst, capsys):
    code, obj = run_json(capsys, "sparsify", inst([[1], [2], [3], [4]]), "--rhs", "10", "--solution", "1,1,1,1")
    assert code == 0 and obj["method"] == "knapsack"
    assert len(obj["final_support"]) <= obj["guarantee"] == 3
    assert sum(c * v for c, v in zip(obj["final"], [1, 2, 3, 4])) == 10


def test_sparsify_siegel(inst, capsys):
    code, obj = run_json(capsys, "sparsify", inst([[1, 1], [2, 1], [3, 2], [1, 0]]), "--solution", "2,2,2,2")
    assert code == 0 and obj["method"] == "siegel"
    assert obj["steps"] and len(obj["final_support"]) <= obj["guarantee"]


def test_sparsify_find(inst, capsys):
    code, obj = run_json(capsys, "sparsify", inst([[4], [6], [15]]), "--rhs", "85", "--find")
    assert code == 0 and obj["rhs"] == [85]


def test_sparsify_errors(inst, capsys):
    path = inst([[4], [6], [15]])
    assert run(capsys, "sparsify", path, "--rhs", "17", "--find")[0] == 1
    assert run(capsys, "sparsify", path, "--rhs", "20", "--solution", "1,1,1")[0] == 1
    assert run(capsys, "sparsify", path, "--solution", "1,-1,1")[0] == 1
    assert run(capsys, "sparsify", path)[0] == 2


def test_dilate(inst, capsys):
    code, obj = run_json(capsys, "dilate", inst([[4], [6], [15]]), "--rhs", "25", "--lambda-max", 30)
    assert code == 0
    assert obj["values"][:3] == [3, 2, 1] and len(obj["values"]) == 30
    # 25k is a multiple of a generator iff 4, 6 or 3 divides k: period 12
    assert obj["observed_period"] == {"start": 2, "period": 12}


def test_dilate_non_member(inst, capsys):
    assert run(capsys, "dilate", inst([[4], [6], [15]]), "--rhs", "17")[0] == 1


def test_sumdistinct(inst, capsys):
    code, obj = run_json(capsys, "sumdistinct", inst([[1], [2], [4], [8]]))
    assert code == 0
    assert obj["is_sum_distinct"] is True and obj["kernel"] is None
    assert obj["sinc_bound"] == "16/3"
    code, obj = run_json(capsys, "sumdistinct", inst([[1], [2], [3]]))
    assert obj["is_sum_distinct"] is False and obj["kernel"] == [1, 1, -1]


def test_conjecture(inst, capsys):
    code, obj = run_json(capsys, "conjecture", inst([[4], [6], [15]]))
    assert code == 0 and obj == {"M0": 3, "floor_log2_max": 3, "excess": 0}


@pytest.mark.parametrize("payload", [
    "not json",
    '{"generators": [[1]]}',
    '{"d": 0, "generators": [[1]]}',
    '{"d": 1, "generators": []}',
    '{"d": 1, "generators": [[0]]}',
    '{"d": 2, "generators": [[1]]}',
    '{"d": 1, "generators": [[1.5]]}',
])
def test_bad_instances(tmp_path, capsys, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload)
    code, _, err = run(capsys, "bounds", path)
    assert code == 2 and err.startswith("error:")


def test_missing_file(capsys):
    assert run(capsys, "bounds", "/nonexistent/x.json")[0] == 2


def test_negative_generators_rejected_by_solver(inst, capsys):
    assert run(capsys, "m0", inst([[3], [-1]]), "--rhs", "2")[0] == 2
    assert run(capsys, "bounds", inst([[3], [-1]]))[0] == 0


def test_bad_rhs(inst, capsys):
    path = inst([[4], [6], [15]])
    assert run(capsys, "m0", path, "--rhs", "x")[0] == 2
    assert run(capsys, "m0", path, "--rhs", "-4")[0] == 2
    assert run(capsys, "m0", path, "--rhs", "4,4")[0] == 2


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2


def test_module_entry_point(inst):
    path = inst([[4], [6], [15]])
    proc = subprocess.run([sys.executable, "-m", "sparsedio", "m0", path, "--rhs", "25"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["witness"] == [1, 1, 1]
