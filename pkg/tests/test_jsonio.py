from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import jsonio
from wittlift.errors import InputError
from wittlift.jsonio import SchemaError

values = st.recursive(st.none() | st.booleans() | st.integers() | st.text(max_size=5),
                      lambda c: st.lists(c, max_size=4)
                      | st.dictionaries(st.text(max_size=4), c, max_size=4), max_leaves=20)


@given(values)
def test_dumps_roundtrip(v):
    assert jsonio.loads(jsonio.dumps(v)) == v
    assert jsonio.loads(jsonio.pretty(v)) == v


def test_canonical_order():
    assert jsonio.dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    assert jsonio.digest({"a": 1, "b": 2}) == jsonio.digest({"b": 2, "a": 1})


def test_numpy_values():
    assert jsonio.dumps({"x": np.arange(3), "y": np.int64(4), "z": (1, 2)}) == \
        '{"x":[0,1,2],"y":4,"z":[1,2]}'


def test_floats_rejected():
    with pytest.raises(SchemaError) as e:
        jsonio.dumps({"a": [1, 2.5]})
    assert e.value.path == "$.a[1]"
    with pytest.raises(SchemaError, match="floating"):
        jsonio.loads('{"a": 1.0}')
    with pytest.raises(SchemaError):
        jsonio.loads("NaN")


def test_schema_paths():
    obj = {"ring": {"p": 2, "d": 1}, "generators": [[[1, 0], [0]]], "group": {"degree": 2,
                                                                           "generators": [[1, 0]]}}
    with pytest.raises(SchemaError) as e:
        jsonio.check_rep(obj, src="x.json")
    assert e.value.path == "$.generators[0][1]" and "x.json" in str(e.value)
    with pytest.raises(SchemaError, match=r"\$\.ring\.d"):
        jsonio.check_rep({"ring": {"p": 2}, "generators": []})
    with pytest.raises(SchemaError, match=r"\$\.group"):
        jsonio.check_rep({"ring": {"p": 2, "d": 1}, "generators": []})
    # booleans are not integers
    with pytest.raises(SchemaError, match=r"\$\.ring\.p"):
        jsonio.check_ring({"p": True, "d": 1})
    with pytest.raises(SchemaError) as e:
        jsonio.check_matrix([[1, [True]]], "$.m", square=False)
    assert e.value.path == "$.m[0][1][0]"


def test_read_errors(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        jsonio.load(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(SchemaError, match="bad.json"):
        jsonio.load(tmp_path / "bad.json")


def test_write_atomic(tmp_path):
    path = tmp_path / "sub" / "a.json"
    jsonio.write_atomic(path, "one")
    jsonio.write_atomic(path, "two")
    assert path.read_text() == "two"
    assert [p.name for p in path.parent.iterdir()] == ["a.json"]
