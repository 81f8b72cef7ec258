"""Command-line front end.

Exit codes: 0 affirmative result, 1 negative mathematical verdict (obstructed,
not smooth, not linked), 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, corpus, jsonio
from .errors import BudgetExceeded, InputError, OracleDisagreement, WittLiftError
from .gmodules import Character
from .witt import FieldDesc, WittRing, frobenius, ghost_oracle, verschiebung, zpd_iso

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

KINDS = {"group": "groups", "rep": "reps", "chi": "characters", "cert": "certificates",
         "ext": "extensions"}


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# inputs

class Inputs:
    """Loaded input documents plus everything that goes into the input digest."""

    def __init__(self):
        self.docs = {}

    def load(self, path: str, kind: str):
        p = resolve(path, kind)
        obj = jsonio.load(p)
        self.docs.setdefault(kind, []).append(obj)
        return obj, str(p)

    def digest(self, params):
        return jsonio.digest({"inputs": self.docs, "params": params})


def resolve(path: str, kind: str) -> Path:
    """A path as given, or the same file name inside the fixture layout."""
    p = Path(path)
    if p.exists():
        return p
    sub = KINDS.get(kind, kind)
    name = p.name if p.suffix == ".json" else p.name + ".json"
    for cand in (p.parent / sub / name, p.parent / "fixtures" / sub / name,
                 Path("fixtures") / sub / name):
        if cand.exists():
            return cand
    raise InputError(f"{path}: no such {kind} file")


def _budget(args):
    if args.budget is not None:
        return args.budget
    env = os.environ.get("WITTLIFT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"WITTLIFT_BUDGET must be an integer, got {env!r}") from None
    return None


def _group(inp, args):
    if not args.group:
        raise UsageError("--group is required")
    obj, src = inp.load(args.group, "group")
    return corpus.load_group(obj, src)


def _rep(inp, path):
    obj, src = inp.load(path, "rep")
    return corpus.load_rep(obj, src)


def _character(inp, args, G):
    if args.chi:
        obj, src = inp.load(args.chi, "chi")
    elif args.cert:
        rep_, src = inp.load(args.cert, "cert")
        try:
            res = rep_["result"]
            obj = (res.get("witness") or res)["character"]
        except (KeyError, TypeError, AttributeError):
            raise jsonio.SchemaError("$.result.witness.character", "missing", src) from None
    else:
        return None
    jsonio.check_character(obj, src=src)
    if "group" in obj and jsonio.dumps(corpus.load_group(obj["group"], src).to_json()) \
            != jsonio.dumps(G.to_json()):
        raise InputError(f"{src}: character is defined on a different group")
    return Character.from_json(obj, G)


def _field(args) -> FieldDesc:
    if args.p is None:
        raise UsageError("--p is required")
    m = args.m or 1
    return FieldDesc(args.p) if m == 1 else FieldDesc.first_irreducible(args.p, m)


# ---------------------------------------------------------------------------
# output helpers

def _matrices(M):
    """Generator matrices as integers mod p^d when m = 1, else Witt coordinates."""
    if M.m == 1:
        return [np.asarray(a)[..., 0].tolist() for a in M.generator_matrices()]
    from .gmodules import witt_matrix_json
    return [witt_matrix_json(M.ring, a) for a in M.generator_matrices()]


def _signed(v, q):
    v = int(v) % q
    return v - q if 2 * v > q else v


def _char_values(chi):
    q = chi.ring.modulus
    vals = [chi.values[s] for s in chi.group.generators]
    if chi.ring.m == 1:
        return {"values": [int(v[0]) for v in vals],
                "signed": [_signed(v[0], q) for v in vals]}
    return {"values": [np.asarray(v).tolist() for v in vals]}


def _cert_json(cert):
    out = cert.to_json()
    out.update(_char_values(cert.character))
    return out


# ---------------------------------------------------------------------------
# verbs; each returns (status, affirmative, result)

def cmd_witt(args, inp):
    ring = WittRing(_field(args), args.d or 1)
    ops = args.operands

    def parse(s):
        try:
            v = jsonio.loads(s, "operand")
        except InputError:
            raise UsageError(f"operand {s!r} is not JSON") from None
        if isinstance(v, int) and not isinstance(v, bool):
            return ring.from_int(v)
        return ring.element(v)

    unary = {"neg", "frob", "ver", "ghost", "zpd"}
    need = 1 if args.sub in unary else 2
    if len(ops) != need:
        raise UsageError(f"witt {args.sub} takes {need} operand(s)")
    xs = [parse(s) for s in ops]
    a = xs[0]
    if args.sub == "add":
        r = a + xs[1]
    elif args.sub == "sub":
        r = a - xs[1]
    elif args.sub == "mul":
        r = a * xs[1]
    elif args.sub == "neg":
        r = -a
    elif args.sub == "frob":
        r = frobenius(a, args.n if args.n is not None else 1)
    elif args.sub == "ver":
        r = verschiebung(a)
    elif args.sub == "ghost":
        return "ok", True, {"ghost": list(ghost_oracle(a).values)}
    else:
        return "ok", True, {"zpd": zpd_iso(a)}
    out = {"result": r.to_json()}
    if ring.m == 1:
        out["zpd"] = zpd_iso(r)
    return "ok", True, out


def cmd_cohom(args, inp):
    from .cohomology import cohomology_group, cyclic_oracle
    if not args.rep:
        raise UsageError("--rep is required")
    M = _rep(inp, args.rep[0])
    n = 1 if args.n is None else args.n
    H = cohomology_group(M.group, M, n, _budget(args))
    out = {"n": n, **H.to_json()}
    if M.group.cyclic_generator() is not None:
        orders, _ = cyclic_oracle(M.group, M, n)
        out["cyclic_oracle"] = {"orders": [int(o) for o in orders],
                                "agrees": sorted(orders) == sorted(H.orders)}
    return "ok", True, out


def _extensions(inp, args, count):
    from .yoneda import Extension1
    if not args.rep or len(args.rep) != count:
        raise UsageError(f"expected {count} --rep extension file(s)")
    exts = []
    G = None
    for path in args.rep:
        obj, src = inp.load(path, "ext")
        jsonio.check_extension(obj, src=src)
        H = corpus.load_group(obj["group"], src)
        if G is None:
            G = H
        elif jsonio.dumps(H.to_json()) != jsonio.dumps(G.to_json()):
            raise InputError(f"{src}: extension over a different group")
        exts.append(Extension1.from_json(obj, G))
    return exts


def cmd_ext(args, inp):
    from .yoneda import LINK_BUDGET, class_of_extension, linked_brute, section
    if args.sub == "class":
        (e,) = _extensions(inp, args, 1)
        c0 = class_of_extension(e)
        c1 = class_of_extension(e, section(e, 1))
        out = {"class": c0.to_json(), "split": c0.is_zero(), "section_independent": c0 == c1}
        return "ok", True, out
    e1, e2 = _extensions(inp, args, 2)
    budget = _budget(args) or LINK_BUDGET
    linked = linked_brute(e1, e2, budget)
    same = class_of_extension(e1) == class_of_extension(e2)
    out = {"linked": linked, "classes_equal": same,
           "classes": [class_of_extension(e).to_json()["coords"] for e in (e1, e2)]}
    return ("linked" if linked else "not_linked"), linked, out


def cmd_smooth(args, inp):
    from .smoothness import cd1_check, check_cyclotomic, smooth_search
    G = _group(inp, args)
    n = 1 if args.n is None else args.n
    d = 1 if args.d is None else args.d
    budget = _budget(args)
    if args.sub == "check":
        chi = _character(inp, args, G)
        if chi is None:
            raise UsageError("smooth check needs --chi or --cert")
        cert = check_cyclotomic(G, chi, n, d, budget)
        return ("cyclotomic" if cert.passed else "not_cyclotomic"), cert.passed, \
            {"certificate": _cert_json(cert), "character": chi.to_json()}
    if args.sub == "search":
        res = smooth_search(G, n, d, _field(args), budget)
        out = {"n": n, "d": d, "found": res.found,
               "table": [{"character": c.character.to_json(), **_char_values(c.character),
                          "passed": c.passed,
                          "failing_subgroup": None if c.passed
                          else list(c.witness.subgroup.elements)} for c in res.tried]}
        if res.found:
            out["witness"] = {"character": res.witness.character.to_json(),
                              **_char_values(res.witness.character),
                              "certificate": res.witness.to_json()}
        return ("smooth" if res.found else "not_smooth"), res.found, out
    if args.p is None:
        raise UsageError("--p is required")
    res = cd1_check(G, args.p, n, d, budget)
    return ("cd_le_1" if res.passed else "cd_gt_1"), res.passed, res.to_json()


def _default_character(G, rho, inp, args):
    from .smoothness import smooth_search
    chi = _character(inp, args, G)
    if chi is not None:
        return chi, None
    d = 1 if args.d is None else args.d
    n = 1 if args.n is None else args.n
    res = smooth_search(G, n, d, rho.ring.field, _budget(args))
    return (res.witness.character if res.found else None), res


def cmd_lift(args, inp):
    from .lifting import (check_lift, is_lift, lift_dim2, lift_dim4_f2, obstruction_p_next,
                          solve_lift)
    if not args.rep:
        raise UsageError("--rep is required")
    rho = _rep(inp, args.rep[0])
    if args.sub == "p2":
        rep_ = obstruction_p_next(rho, budget=_budget(args))
        out = {"r": rep_.r, "h2_orders": [int(o) for o in rep_.H2.orders],
               "class": [int(x) for x in rep_.coords], "vanishes": rep_.vanishes}
        if not rep_.vanishes:
            return "obstructed", False, out
        L = solve_lift(rho, rep_)
        out["lift"] = {"matrices": _matrices(L), "module": L.to_json()}
        out["verified"] = is_lift(L, rho)
        return "lifted", True, out
    G = rho.group
    chi, search = _default_character(G, rho, inp, args)
    if chi is None:
        return "no_certificate", False, {"search": search.to_json() if search else None}
    fn = lift_dim4_f2 if args.sub == "dim4" else lift_dim2
    res = fn(rho, chi)
    out = {"character": chi.to_json(), **_char_values(chi), "transcript": res.transcript}
    if res.witness is not None:
        out["witness"] = res.witness
    if res.status == "budget":
        raise BudgetExceeded("; ".join(res.transcript[-1:]))
    if res.lift is not None:
        out["lift"] = {"matrices": _matrices(res.lift), "module": res.lift.to_json(),
                       "verified": is_lift(res.lift, rho)}
    if res.stable is not None:
        st = res.stable
        from .gmodules import direct_sum
        target = direct_sum(rho, st.W) if st.W.rank else rho
        out["stable"] = {"subgroup": list(st.G0.elements), "complement_rank": st.W.rank,
                         "depth": st.lift.D, "matrices": _matrices(st.lift),
                         "verified": check_lift(st.lift, target).ok}
        if args.sub == "stable":
            out.pop("lift", None)
    ok = res.status in ("lifted", "stably_lifted")
    return res.status, ok, out


def cmd_oracle(args, inp):
    from .cohomology import cyclic_oracle
    from .lifting import BRUTE_BUDGET, brute_force_lift
    if not args.rep:
        raise UsageError("--rep is required")
    M = _rep(inp, args.rep[0])
    if args.sub == "brute":
        res = brute_force_lift(M, _budget(args) or BRUTE_BUDGET)
        out = {"found": res.found, "checked": res.checked, "total": res.total}
        if res.found:
            out["lift"] = {"matrices": _matrices(res.lift), "module": res.lift.to_json()}
        return ("lifted" if res.found else "not_liftable"), res.found, out
    n = 1 if args.n is None else args.n
    orders, reps = cyclic_oracle(M.group, M, n)
    return "ok", True, {"n": n, "orders": [int(o) for o in orders],
                        "representatives": [np.asarray(r).tolist() for r in reps]}


def cmd_regen(args, inp):
    out_dir = Path(args.out or "fixtures")
    files = corpus.regen_fixtures(out_dir, force=args.force)
    dig = jsonio.load(out_dir / corpus.DIGEST_FILE)
    args.out = None       # the directory is the output; the report goes to stdout
    return "ok", True, {"files": len(files), "digest": jsonio.digest(dig)}


VERBS = {
    "witt": (cmd_witt, ["add", "sub", "mul", "neg", "frob", "ver", "ghost", "zpd"]),
    "cohom": (cmd_cohom, None),
    "ext": (cmd_ext, ["class", "link"]),
    "smooth": (cmd_smooth, ["check", "search", "cd1"]),
    "lift": (cmd_lift, ["p2", "dim2", "stable", "dim4"]),
    "oracle": (cmd_oracle, ["brute", "cyclic"]),
    "regen-fixtures": (cmd_regen, None),
}


def _nonneg(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _common(p: argparse.ArgumentParser):
    p.add_argument("--group")
    p.add_argument("--rep", action="append")
    p.add_argument("--chi")
    p.add_argument("--cert")
    for k in ("n", "d", "p", "m", "budget"):
        p.add_argument(f"--{k}", type=_nonneg)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "text"], default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wittlift", description="Lifting mod-p representations through "
                 "truncated Witt vectors.")
    ap.add_argument("--version", action="version", version=f"wittlift {__version__}")
    sp = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb, (_fn, subs) in VERBS.items():
        vp = sp.add_parser(verb)
        if subs:
            vp.add_argument("sub", choices=subs)
        if verb == "witt":
            vp.add_argument("operands", nargs="*")
        if verb == "regen-fixtures":
            vp.add_argument("--force", action="store_true")
        _common(vp)
    return ap


def _params(args):
    keep = {k: v for k, v in vars(args).items()
            if k not in ("out", "format", "group", "rep", "chi", "cert") and v is not None}
    return keep


def _text(report) -> str:
    lines = [f"{report['command']}: {report['status']} (exit {report['exit_code']})"]
    res = report.get("result") or {}
    for k in sorted(res):
        v = jsonio.dumps(res[k])
        if len(v) > 160:
            v = v[:157] + "..."
        lines.append(f"  {k}: {v}")
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    return "\n".join(lines) + "\n"


def _operands_first(argv):
    """For ``witt``: move operands ahead of the flags so argparse sees them together."""
    if len(argv) < 2 or argv[0] != "witt":
        return argv
    head, rest = argv[:2], argv[2:]
    flags, ops = [], []
    i = 0
    while i < len(rest):
        t = rest[i]
        if t.startswith("--"):
            flags.append(t)
            if "=" not in t and i + 1 < len(rest):
                flags.append(rest[i + 1])
                i += 1
        else:
            ops.append(t)
        i += 1
    return head + ops + flags


def run(argv=None):
    """Parse, dispatch and build the report; returns (exit code, report)."""
    t0 = time.perf_counter()
    inp = Inputs()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_operands_first(argv))
    except UsageError as e:
        i = argv.index("--format") + 1 if "--format" in argv else len(argv)
        fmt = "text" if argv[i:i + 1] == ["text"] else "json"
        return EXIT_INPUT, {"tool": {"name": "wittlift", "version": __version__},
                            "command": " ".join(argv[:2]), "status": "usage_error",
                            "error": str(e), "exit_code": EXIT_INPUT, "_format": fmt}
    fn = VERBS[args.verb][0]
    command = args.verb + (f" {args.sub}" if getattr(args, "sub", None) else "")
    report = {"tool": {"name": "wittlift", "version": __version__}, "command": command}
    try:
        status, affirmative, result = fn(args, inp)
        code = EXIT_OK if affirmative else EXIT_NEGATIVE
        report.update(status=status, verdict=bool(affirmative), result=result)
    except BudgetExceeded as e:
        code = EXIT_BUDGET
        report.update(status="budget_exceeded", error=str(e))
    except InputError as e:
        code = EXIT_INPUT
        report.update(status="input_error", error=str(e))
    except OracleDisagreement as e:
        code = EXIT_NEGATIVE
        report.update(status="oracle_disagreement", error=str(e))
    except WittLiftError as e:
        code = EXIT_NEGATIVE
        report.update(status=type(e).__name__, error=str(e))
    report["exit_code"] = code
    report["input_digest"] = inp.digest({"command": command, **_params(args)})
    report["report_digest"] = jsonio.digest(report)
    report["timing"] = {"elapsed_ms": int((time.perf_counter() - t0) * 1000)}
    report["_out"], report["_format"] = args.out, args.format
    return code, report


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing" and not k.startswith("_")}


def main(argv=None) -> int:
    code, report = run(argv)
    out, fmt = report.pop("_out", None), report.pop("_format", "json")
    text = _text(report) if fmt == "text" else jsonio.pretty(report)
    if out:
        jsonio.write_atomic(out, text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        sys.stderr.write(f"wittlift: {report['error']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
