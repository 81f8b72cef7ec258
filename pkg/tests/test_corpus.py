from __future__ import annotations

import time
from pathlib import Path

import pytest

from wittlift import corpus, jsonio
from wittlift.errors import OracleDisagreement

FIX = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="module")
def regen(tmp_path_factory):
    root = tmp_path_factory.mktemp("fx")
    t = time.perf_counter()
    files = corpus.regen_fixtures(root)
    return root, files, time.perf_counter() - t


def snapshot(root):
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*.json"))}


def test_regen_is_byte_identical(regen, tmp_path):
    root, files, _ = regen
    corpus.regen_fixtures(tmp_path)
    assert snapshot(root) == snapshot(tmp_path)
    assert len(files) == len(snapshot(root))


def test_regen_under_a_minute(regen):
    assert regen[2] < 60


def test_checked_in_fixtures_match(regen):
    root, _, _ = regen
    assert snapshot(root) == snapshot(FIX)
    assert corpus.digest_drift(FIX) == []


def test_corrupted_expectation_is_named(regen, tmp_path):
    root, _, _ = regen
    corpus.regen_fixtures(tmp_path)
    path = tmp_path / "expectations" / "lift_c2_unipotent.json"
    e = jsonio.load(path)
    e["found"] = not e["found"]
    path.write_text(jsonio.pretty(e))
    assert corpus.digest_drift(tmp_path) == ["expectations/lift_c2_unipotent.json"]
    with pytest.raises(OracleDisagreement, match="lift_c2_unipotent.json"):
        corpus.regen_fixtures(tmp_path)
    with pytest.raises(OracleDisagreement, match="lift_c2_unipotent.json"):
        corpus.verify_expectations(tmp_path)
    corpus.regen_fixtures(tmp_path, force=True)
    assert corpus.digest_drift(tmp_path) == []


def test_corrupted_witt_table(tmp_path):
    corpus.regen_fixtures(tmp_path)
    path = tmp_path / "expectations" / "witt_p3_d2.json"
    e = jsonio.load(path)
    row = e["table"][5]
    row[2] = [(row[2][0] + 1) % 3] + row[2][1:]
    path.write_text(jsonio.pretty(e))
    with pytest.raises(OracleDisagreement, match="witt_p3_d2.json"):
        corpus.verify_expectations(tmp_path)


def test_verify_expectations():
    assert corpus.verify_expectations(FIX) == len(list((FIX / "expectations").glob("*.json")))


@pytest.mark.parametrize("name", sorted(corpus.GROUP_SPECS))
def test_group_fixture_loads(name):
    G = corpus.load_group(jsonio.load(FIX / "groups" / f"{name}.json"))
    assert G.order == corpus.group(name).order


def test_all_reps_counts():
    from wittlift.witt import FieldDesc, WittRing
    R = WittRing(FieldDesc(2), 1)
    assert len(list(corpus.all_reps(corpus.group("C2"), R))) == 4
    assert len(list(corpus.all_reps(corpus.group("trivial"), R))) == 1


def test_family_sizes():
    assert len(corpus.cyclic_family()) == 112
    assert len(corpus.yoneda_pairs()) == 101
    assert len(corpus.dim4_instances()) == 55
