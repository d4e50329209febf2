import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from boxpierce.cli import main
from boxpierce.errors import InvalidInput
from boxpierce.fileio import instance_from_json, instance_to_json, transversal_from_json, transversal_to_json
from boxpierce.generators import gen_clique_union, gen_no_p2_family, gen_remark_family
from boxpierce.geometry import AxisBox, BoxFamily
from boxpierce.verify import verify_objects


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_round_trip():
    fams = [gen_remark_family(9, 5, 15, 3, 1).family, gen_clique_union(3, 20, 2, seed=2).family,
            gen_no_p2_family(4).family,
            BoxFamily([AxisBox((Fraction(-1, 3), 0), (Fraction(7, 2), Fraction(1, 10**20)))])]
    for fam in fams:
        back, meta = instance_from_json(json.loads(json.dumps(instance_to_json(fam, {"p": 1}))))
        assert back == fam and meta == {"p": 1}
    pts = [(Fraction(1, 3), 2)]
    assert transversal_from_json(transversal_to_json(pts, "x", 1, True)) == pts


def test_floats_rejected():
    with pytest.raises(InvalidInput):
        instance_from_json({"dim": 1, "boxes": [{"lo": [0.5], "hi": [1]}]})
    with pytest.raises(InvalidInput):
        instance_from_json({"dim": 2, "boxes": [{"lo": [0], "hi": [1]}]})
    with pytest.raises(InvalidInput):
        instance_from_json({"boxes": []})


def test_verify_is_independent():
    src = open(sys.modules["boxpierce.verify"].__file__).read()
    assert "from ." not in src and "import boxpierce" not in src
    inst = {"dim": 1, "boxes": [{"lo": ["0"], "hi": ["1/2"]}, {"lo": [1], "hi": [2]}]}
    assert verify_objects(inst, {"points": [["1/2"], ["1"]]})[0]
    ok, msg, missed = verify_objects(inst, {"points": [["3/4"]]})
    assert not ok and missed == [0, 1]
    assert not verify_objects(inst, {"points": [["1", "2"]]})[0]
    assert not verify_objects(inst, {"points": [[0.5]]})[0]


def test_remark_gen_pierce_verify(tmp_path, capsys):
    inst, tr = str(tmp_path / "i.json"), str(tmp_path / "t.json")
    assert main(["gen", "remark", "--p", "6", "--q", "4", "--n", "10", "-o", inst]) == 0
    assert main(["pierce", inst, "--alg", "dol1", "-o", tr, "--assert-bound"]) == 0
    assert len(json.load(open(tr))["points"]) == 3
    assert main(["verify", inst, tr]) == 0
    assert "ok" in capsys.readouterr().out


def test_bounds_eq1(capsys):
    assert main(["bounds", "--eq1", "--p", "5"]) == 0
    assert capsys.readouterr().out.strip() == "8"
    assert main(["bounds", "--tc", "--p", "1024"]) == 0
    assert capsys.readouterr().out.strip() == "443"
    assert main(["bounds", "--d", "3", "--eq1", "--p", "4", "8"]) == 0
    assert capsys.readouterr().out.splitlines()[0].split("\t") == ["p", "eq1", "B_3"]


def test_check_pq_bad_set(tmp_path, capsys):
    inst = write(tmp_path / "d.json", {"dim": 1, "boxes": [{"lo": [0], "hi": [1]}, {"lo": [2], "hi": [3]},
                                                          {"lo": [4], "hi": [5]}]})
    assert main(["exact", "check-pq", inst, "--p", "3", "--q", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "bad-set-found" and sorted(out["bad_set"]) == [0, 1, 2]
    for what in ("tau", "nu", "depth"):
        assert main(["exact", what, inst]) == 0


def test_exit_codes(tmp_path, capsys):
    good = write(tmp_path / "g.json", instance_to_json(gen_remark_family(6, 4, 10, 2, 0).family, {"p": 6, "q": 4}))
    disj = write(tmp_path / "d.json", {"dim": 1, "boxes": [{"lo": [2 * i], "hi": [2 * i + 1]} for i in range(4)]})
    bad = write(tmp_path / "b.json", {"dim": 1, "boxes": [{"lo": [1], "hi": [0]}]})
    wrong = write(tmp_path / "w.json", {"points": [["100", "100"]]})
    assert main([]) == 1
    assert main(["pierce", good]) == 1
    assert main(["pierce", good, "--alg", "rect-main", "--q", "2"]) == 1
    assert main(["pierce", bad, "--alg", "cute"]) == 3
    assert main(["verify", good, wrong]) == 3
    assert main(["pierce", disj, "--alg", "p2", "--p", "3"]) == 4
    assert main(["exact", "tau", good, "--mode", "heuristic"]) == 3
    assert main(["exact", "nu", good, "--cap", "5"]) == 1


def test_assert_bound_only_on_certified(tmp_path, monkeypatch):
    from boxpierce import cli
    from boxpierce.pipeline import RunReport

    inst = write(tmp_path / "i.json", instance_to_json(gen_remark_family(6, 4, 10, 2, 0).family))
    fake = lambda cert: (lambda *a, **k: RunReport([(0, 0)] * 5, 3, cert, []))
    monkeypatch.setattr(cli, "solve", fake(True))
    assert main(["pierce", inst, "--alg", "dol1", "--p", "6", "--q", "4", "--assert-bound", "-o", "-"]) == 2
    monkeypatch.setattr(cli, "solve", fake(False))
    assert main(["pierce", inst, "--alg", "dol1", "--p", "6", "--q", "4", "--assert-bound", "-o", "-"]) == 0


def test_gen_kinds(tmp_path):
    for argv in (["clique-union", "--k", "3", "--n", "12", "--p", "9"], ["random-p2", "--p", "4", "--n", "10"],
                 ["no-p2", "--m", "3"]):
        out = str(tmp_path / "x.json")
        assert main(["gen"] + argv + ["-o", out]) == 0
        instance_from_json(json.load(open(out)))
    meta = json.load(open(out)).get("meta")
    assert meta["certificate"]["tau"] == 3


def test_bench_csv(tmp_path):
    inst = str(tmp_path / "i.json")
    main(["gen", "remark", "--p", "9", "--q", "5", "--n", "12", "-o", inst])
    out = str(tmp_path / "b.csv")
    assert main(["bench", inst, "--alg", "dol2", "-o", out]) == 0
    rows = list(csv.DictReader(open(out)))
    assert list(rows[0]) == ["instance", "algorithm", "n", "p", "q", "size", "bound", "certified", "millis"]
    assert rows[0]["size"] == "5"


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "boxpierce", "bounds", "--eq1", "--p", "4"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "5"
