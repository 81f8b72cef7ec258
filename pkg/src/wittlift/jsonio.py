"""Canonical JSON: sorted keys, compact separators, integers only."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputError


class SchemaError(InputError):
    """A JSON document does not match the expected shape; carries the offending path."""

    def __init__(self, path: str, message: str, source: str | None = None):
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: {message}")
        self.path = path
        self.source = source


def plain(obj, path: str = "$"):
    """Recursively convert numpy scalars/arrays and tuples to plain JSON values."""
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist(), path)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        raise SchemaError(path, "floating point values are not allowed")
    if isinstance(obj, str) or obj is None:
        return obj
    if isinstance(obj, dict):
        return {str(k): plain(v, f"{path}.{k}") for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v, f"{path}[{i}]") for i, v in enumerate(obj)]
    raise SchemaError(path, f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _flat(x) -> bool:
    return not isinstance(x, (list, dict)) or (
        isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x))


def _pretty(x, ind):
    if _flat(x) or (isinstance(x, list) and all(_flat(y) for y in x) and len(dumps(x)) <= 72):
        return dumps(x)
    pad = " " * (ind + 1)
    if isinstance(x, list):
        body = ",\n".join(pad + _pretty(y, ind + 1) for y in x)
        return "[\n" + body + "\n" + " " * ind + "]"
    if not x:
        return "{}"
    body = ",\n".join(f"{pad}{json.dumps(k)}: {_pretty(x[k], ind + 1)}" for k in sorted(x))
    return "{\n" + body + "\n" + " " * ind + "}"


def pretty(obj) -> str:
    """Indented canonical form; short lists of scalars stay on one line."""
    return _pretty(plain(obj), 0) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


def _no_float(x):
    raise ValueError(f"floating point literal {x!r}")


def loads(text: str, source: str | None = None):
    try:
        return json.loads(text, parse_float=_no_float, parse_constant=_no_float)
    except ValueError as exc:
        raise SchemaError("$", f"invalid JSON ({exc})", source) from exc


def load(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from exc
    return loads(text, str(path))


def write_atomic(path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# shape checks, run before any object is built

def _expect(cond, path, msg, src):
    if not cond:
        raise SchemaError(path, msg, src)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def check_ring(obj, path="$.ring", src=None):
    _expect(isinstance(obj, dict), path, "expected an object", src)
    for k in ("p", "d"):
        _expect(_is_int(obj.get(k)), f"{path}.{k}", "expected an integer", src)
    if "m" in obj:
        _expect(_is_int(obj["m"]), f"{path}.m", "expected an integer", src)
    if "modulus" in obj:
        mod = obj["modulus"]
        _expect(isinstance(mod, list) and all(_is_int(c) for c in mod), f"{path}.modulus",
                "expected a list of integers", src)


def _check_entry(x, path, src):
    if _is_int(x):
        return
    _expect(isinstance(x, list), path, "expected an integer or a list of Witt coordinates", src)
    for i, c in enumerate(x):
        ok = _is_int(c) or (isinstance(c, list) and all(_is_int(t) for t in c))
        _expect(ok, f"{path}[{i}]", "expected an integer coordinate", src)


def check_matrix(obj, path, src=None, square=True):
    _expect(isinstance(obj, list) and all(isinstance(r, list) for r in obj), path,
            "expected a list of rows", src)
    if obj:
        n = len(obj[0])
        for i, row in enumerate(obj):
            _expect(len(row) == n, f"{path}[{i}]", f"row has length {len(row)}, expected {n}", src)
            for j, x in enumerate(row):
                _check_entry(x, f"{path}[{i}][{j}]", src)
        if square:
            _expect(n == len(obj), path, "matrix is not square", src)


def check_group(obj, path="$", src=None):
    _expect(isinstance(obj, dict), path, "expected an object", src)
    if "table" in obj:
        check_matrix(obj["table"], f"{path}.table", src)
        return
    _expect(_is_int(obj.get("degree")), f"{path}.degree", "expected an integer", src)
    gens = obj.get("generators")
    _expect(isinstance(gens, list), f"{path}.generators", "expected a list", src)
    for i, g in enumerate(gens):
        _expect(isinstance(g, list) and all(_is_int(x) for x in g), f"{path}.generators[{i}]",
                "expected a permutation as a list of integers", src)


def check_rep(obj, path="$", src=None, need_group=True):
    _expect(isinstance(obj, dict), path, "expected an object", src)
    _expect("ring" in obj, f"{path}.ring", "missing", src)
    check_ring(obj["ring"], f"{path}.ring", src)
    gens = obj.get("generators")
    _expect(isinstance(gens, list), f"{path}.generators", "expected a list of matrices", src)
    for i, g in enumerate(gens):
        check_matrix(g, f"{path}.generators[{i}]", src)
    if "profile" in obj:
        pr = obj["profile"]
        _expect(isinstance(pr, list) and all(_is_int(x) for x in pr), f"{path}.profile",
                "expected a list of integers", src)
    if need_group:
        _expect("group" in obj, f"{path}.group", "missing", src)
    if "group" in obj:
        check_group(obj["group"], f"{path}.group", src)


def check_character(obj, path="$", src=None):
    _expect(isinstance(obj, dict), path, "expected an object", src)
    _expect("ring" in obj, f"{path}.ring", "missing", src)
    check_ring(obj["ring"], f"{path}.ring", src)
    vals = obj.get("generators")
    _expect(isinstance(vals, list), f"{path}.generators", "expected a list of values", src)
    for i, v in enumerate(vals):
        _check_entry(v, f"{path}.generators[{i}]", src)


def check_extension(obj, path="$", src=None):
    _expect(isinstance(obj, dict), path, "expected an object", src)
    for k in ("sub", "middle", "quot"):
        _expect(k in obj, f"{path}.{k}", "missing", src)
        check_rep(obj[k], f"{path}.{k}", src, need_group=False)
    for k in ("incl", "proj"):
        _expect(k in obj, f"{path}.{k}", "missing", src)
        check_matrix(obj[k], f"{path}.{k}", src, square=False)
    _expect("group" in obj, f"{path}.group", "missing", src)
    check_group(obj["group"], f"{path}.group", src)
