from __future__ import annotations

import json
from pathlib import Path

import pytest

from wittlift import cli, jsonio

FIX = Path(__file__).resolve().parents[1] / "fixtures"


def f(kind, name):
    return str(FIX / kind / f"{name}.json")


def run(*argv):
    return cli.run(list(argv))


def test_witt_add_and_zpd():
    code, rep = run("witt", "add", "3", "1", "--p", "2", "--d", "2")
    assert code == 0
    assert rep["result"]["zpd"] == 0
    code, rep = run("witt", "mul", "[1,1]", "[1,1]", "--p", "2", "--d", "2")
    assert code == 0 and rep["result"]["zpd"] == 1


def test_witt_usage_errors():
    assert run("witt", "add", "1", "--p", "2")[0] == 2
    assert run("witt", "add", "1", "x", "--p", "2")[0] == 2
    assert run("witt", "add", "1", "1")[0] == 2


def test_bogus_flag_is_usage_error():
    code, rep = run("smooth", "search", "--bogus")
    assert code == 2 and rep["status"] == "usage_error"


def test_smooth_search():
    code, rep = run("smooth", "search", "--group", f("groups", "C2"), "--p", "2")
    assert code == 0 and rep["result"]["witness"]["signed"] == [-1]
    code, rep = run("smooth", "search", "--group", f("groups", "C4"), "--p", "2")
    assert code == 1 and rep["status"] == "not_smooth"


def test_smooth_check_and_cd1():
    code, rep = run("smooth", "check", "--group", f("groups", "C2"),
                    "--chi", f("characters", "c2_sign_w2"))
    assert code == 0 and rep["status"] == "cyclotomic"
    code, _ = run("smooth", "check", "--group", f("groups", "C2"),
                  "--chi", f("characters", "c2_trivial_w2"))
    assert code == 1
    code, rep = run("smooth", "cd1", "--group", f("groups", "S3"), "--p", "3")
    assert code == 1 and rep["status"] == "cd_gt_1"


def test_character_on_wrong_group():
    code, rep = run("smooth", "check", "--group", f("groups", "C4"),
                    "--chi", f("characters", "c2_sign_w2"))
    assert code == 2 and "different group" in rep["error"]


def test_lift_p2():
    code, rep = run("lift", "p2", "--rep", f("reps", "c2_unipotent"))
    assert code == 0 and rep["result"]["lift"]["matrices"] == [[[1, 1], [0, 3]]]
    assert rep["result"]["verified"]
    code, rep = run("lift", "p2", "--rep", f("reps", "c2_z4_shear"))
    assert code == 1 and rep["status"] == "obstructed"


def test_lift_dim2_and_stable():
    code, rep = run("lift", "dim2", "--rep", f("reps", "c2_unipotent"),
                    "--chi", f("characters", "c2_sign_w2"))
    assert code == 0 and rep["result"]["lift"]["verified"]
    assert rep["result"]["stable"]["verified"]
    code, rep = run("lift", "stable", "--rep", f("reps", "c2_unipotent"))
    assert code == 0 and "lift" not in rep["result"]
    code, rep = run("lift", "dim2", "--rep", f("reps", "c2_unipotent"),
                    "--chi", f("characters", "c2_trivial_w2"))
    assert code == 1 and rep["result"]["witness"] == {"stabilizer": [0, 1]}


def test_lift_dim4():
    code, rep = run("lift", "dim4", "--rep", f("reps", "c2_jordan4"))
    assert code == 0 and rep["result"]["lift"]["verified"]


def test_ext_class_and_link():
    code, rep = run("ext", "class", "--rep", f("extensions", "c2_regular"))
    assert code == 0 and not rep["result"]["split"]
    assert rep["result"]["section_independent"]
    code, rep = run("ext", "link", "--rep", f("extensions", "c2_regular"),
                    "--rep", f("extensions", "c2_split"))
    assert code == 1 and rep["status"] == "not_linked"
    code, _ = run("ext", "link", "--rep", f("extensions", "c2_regular"),
                  "--rep", f("extensions", "c2_regular"))
    assert code == 0


def test_cohom_and_oracle():
    code, rep = run("cohom", "--rep", f("reps", "c2_unipotent"), "--n", "2")
    assert code == 0 and rep["result"]["cyclic_oracle"]["agrees"]
    code, rep = run("oracle", "cyclic", "--rep", f("reps", "c4_unipotent"))
    assert code == 0
    code, rep = run("oracle", "brute", "--rep", f("reps", "c2_unipotent"))
    assert code == 0 and rep["result"]["total"] == 16


def test_budget_exit_code(monkeypatch):
    assert run("oracle", "brute", "--rep", f("reps", "s3_natural_f2"), "--budget", "10")[0] == 3
    monkeypatch.setenv("WITTLIFT_BUDGET", "10")
    assert run("oracle", "brute", "--rep", f("reps", "s3_natural_f2"))[0] == 3
    monkeypatch.setenv("WITTLIFT_BUDGET", "ten")
    assert run("oracle", "brute", "--rep", f("reps", "s3_natural_f2"))[0] == 2


def test_bad_json_path_is_named(tmp_path):
    bad = tmp_path / "r.json"
    obj = json.loads((FIX / "reps" / "c2_unipotent.json").read_text())
    obj["generators"][0][1] = [[[0]]]
    bad.write_text(json.dumps(obj))
    code, rep = run("lift", "p2", "--rep", str(bad))
    assert code == 2
    assert str(bad) in rep["error"] and "$.generators[0]" in rep["error"]


def test_float_rejected(tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text('{"degree": 2.0, "generators": [[1, 0]]}')
    code, rep = run("smooth", "search", "--group", str(bad), "--p", "2")
    assert code == 2 and "floating" in rep["error"]


def test_missing_file():
    code, rep = run("lift", "p2", "--rep", "no_such_rep")
    assert code == 2 and "no such rep" in rep["error"]


def test_fixture_name_resolution(monkeypatch):
    monkeypatch.chdir(FIX.parent)
    assert run("lift", "p2", "--rep", "c2_unipotent")[0] == 0


def test_determinism_and_digests():
    argv = ["lift", "dim2", "--rep", f("reps", "s3_natural_f2")]
    _, a = cli.run(argv)
    _, b = cli.run(argv)
    assert jsonio.dumps(cli.strip_timing(a)) == jsonio.dumps(cli.strip_timing(b))
    assert a["input_digest"] == b["input_digest"]
    body = {k: v for k, v in cli.strip_timing(a).items() if k != "report_digest"}
    assert jsonio.digest(body) == a["report_digest"]


def test_main_writes_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["lift", "p2", "--rep", f("reps", "c2_unipotent"), "--out", str(out)])
    assert code == 0
    rep = jsonio.load(out)
    assert rep["status"] == "lifted" and "timing" in rep
    assert capsys.readouterr().out == ""


def test_text_format(capsys):
    code = cli.main(["lift", "p2", "--rep", f("reps", "c2_z4_shear"), "--format", "text"])
    assert code == 1
    assert capsys.readouterr().out.startswith("lift p2: obstructed (exit 1)")


def test_report_roundtrip_as_cert(tmp_path):
    out = tmp_path / "cert.json"
    cli.main(["smooth", "search", "--group", f("groups", "C2"), "--p", "2", "--out", str(out)])
    code, rep = run("lift", "dim2", "--rep", f("reps", "c2_unipotent"), "--cert", str(out))
    assert code == 0 and rep["result"]["signed"] == [-1]


@pytest.mark.parametrize("argv", [["lift"], ["cohom"], ["ext", "class"], ["smooth", "check",
                                                                           "--group", "C2"]])
def test_missing_arguments(argv):
    assert run(*argv)[0] == 2
