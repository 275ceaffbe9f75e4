"""Command-line entry point: ``skeinhard <command> ...``.

Every command prints one JSON run report on stdout and a one-line summary
on stderr.  Exit codes: 0 ok, 1 usage, 2 parse error, 3 budget exceeded,
4 verification failure.
"""
from __future__ import annotations

import argparse
import cmath
import hashlib
import json
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4
ORACLE_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"usage: {message}", EXIT_USAGE)


# --------------------------------------------------------------------------
# Report serialization with 17 significant digits


def _num(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, Fraction):
        return dumps({"exact": str(obj), "value": float(obj)}, indent, _level)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_num(obj.real)}, {_num(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, bool, str, complex, np.number)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _digest(args: argparse.Namespace, files: list[str]) -> str:
    h = hashlib.sha256()
    for f in files:
        h.update(Path(f).read_bytes())
    h.update(json.dumps({k: str(v) for k, v in sorted(vars(args).items()) if k != "func"}).encode())
    return h.hexdigest()


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from None


def _number(text: str):
    """Parse ``3``, ``-2/3`` or ``2.5``; rationals stay exact."""
    try:
        return Fraction(text) if "." not in text and "e" not in text.lower() else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _params(args):
    from .params import BracketParams

    if getattr(args, "t", None) is not None:
        return BracketParams.generic(cmath.exp(1j * args.t))
    return BracketParams.root_of_unity(args.r)


# --------------------------------------------------------------------------
# Commands: each returns (params, outputs, tolerances, passed, files)


def cmd_bracket(args):
    from .braid import PlatPresentation, load_braid, trace_to_plat, writhe
    from .bracket import bracket, jones_normalized, plat_probability

    w = load_braid(_read(args.braid_file))
    params = _params(args)
    link = PlatPresentation(w) if args.mode == "plat" else w
    b = bracket(link, params, args.method).value
    wr = writhe(link)
    out = {"bracket": b, "abs_bracket": abs(b), "jones": jones_normalized(b, wr, params), "writhe": wr}
    passed = True
    if params.is_root_of_unity:
        plat = link if args.mode == "plat" else trace_to_plat(w)
        p = plat_probability(plat, params)
        out["plat_probability"] = p
        out["plat_g"] = plat.g
        passed = -1e-12 <= p <= 1 + 1e-12
    return params.to_dict() | {"mode": args.mode, "method": args.method}, out, {"probability_range": 1e-12}, passed, [args.braid_file]


def _load_circuit(path):
    from .circuit import CircuitError, QuantumCircuit

    try:
        return QuantumCircuit.from_json(_read(path))
    except (json.JSONDecodeError, KeyError, TypeError, CircuitError) as exc:
        raise CliError(f"bad circuit file {path}: {exc}", EXIT_PARSE) from None


def cmd_compile(args):
    from .braid import serialize_braid
    from .compiler import QubitEncoding, compile_circuit, verify_reduction

    c = _load_circuit(args.circuit_file)
    params = _params(args)
    res = compile_circuit(c, args.eps, QubitEncoding(params))
    check = verify_reduction(c, res, params)
    out = res.to_dict() | {"verification": check}
    if args.out:
        Path(args.out).write_text(json.dumps({"plat": serialize_braid(res.plat.braid), "bound": res.bound}) + "\n")
        out["written"] = args.out
    return params.to_dict() | {"eps": args.eps}, out, {"bound": res.bound}, check["pass"], [args.circuit_file]


def cmd_verify(args):
    from .braid import PlatPresentation, load_braid
    from .compiler import verify_reduction

    c = _load_circuit(args.circuit_file)
    text = _read(args.plat_file)
    bound = args.bound
    try:
        data = json.loads(text)
        if isinstance(data, dict) and "plat" in data:
            text = data["plat"]
            bound = data.get("bound", bound) if args.bound is None else args.bound
    except json.JSONDecodeError:
        pass
    plat = PlatPresentation(load_braid(text))
    params = _params(args)
    check = verify_reduction(c, plat, params, bound)
    return params.to_dict(), check, {"bound": check["bound"]}, check["pass"], [args.circuit_file, args.plat_file]


def cmd_potts(args):
    from .potts.graph import PottsGraph, tutte_cd_oracle, tutte_from_potts, z_cluster, z_colorings
    from .potts.transfer import MAX_TRANSFER_WIDTH, plan_layout, z_transfer

    try:
        G = PottsGraph.from_json(_read(args.graph_file))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"bad graph file {args.graph_file}: {exc}", EXIT_PARSE) from None
    out: dict = {"n_vertices": G.n_vertices, "n_edges": G.n_edges}
    deltas = {}
    if args.x is not None:
        if args.y is None:
            raise CliError("--x needs --y", EXIT_USAGE)
        T = tutte_from_potts(G, args.x, args.y)
        T_cd = tutte_cd_oracle(G, args.x, args.y)
        out |= {"tutte": T, "tutte_cd_oracle": T_cd}
        deltas["tutte"] = _rel(T, T_cd)
        params = {"x": args.x, "y": args.y, "n": (args.x - 1) * (args.y - 1)}
    else:
        if args.n is None:
            raise CliError("--n is required unless --x/--y give a Tutte evaluation", EXIT_USAGE)
        H = G.with_weight(args.y) if args.y is not None else G
        Z = z_cluster(H, args.n)
        out["Z"] = Z
        if float(args.n).is_integer() and args.n >= 1 and args.n ** H.n_vertices <= 10**7:
            Zc = z_colorings(H, int(args.n))
            out["Z_colorings"] = Zc
            deltas["colorings"] = _rel(Z, Zc)
        if plan_layout(H).width <= MAX_TRANSFER_WIDTH:
            Zt = z_transfer(H, args.n)
            out["Z_transfer"] = Zt
            deltas["transfer"] = _rel(Z, Zt)
        params = {"n": args.n, "y": args.y}
    out["oracle_deltas"] = deltas
    passed = all(d <= ORACLE_TOL for d in deltas.values())
    return params, out, {"oracle_relative": ORACLE_TOL}, passed, [args.graph_file]


def _rel(a, b) -> float:
    a, b = float(a), float(b)
    return abs(a - b) / max(abs(a), abs(b), 1e-300) if a != b else 0.0


def cmd_implement_weight(args):
    from .potts.shift import implement_weight

    tree = implement_weight(args.Y, args.n, args.target, args.eps)
    got = float(tree.evaluate())
    out = {
        "effective_weight": got,
        "distance": abs(got - float(args.target)),
        "tree_size": tree.size,
        "tree": tree.describe(),
        "notes": tree.notes,
    }
    params = {"Y": list(args.Y), "n": args.n, "target": args.target, "eps": args.eps}
    return params, out, {"eps": args.eps}, out["distance"] <= args.eps, []


def cmd_dense_check(args):
    from .potts.density import preset_certificate

    res = preset_certificate(args.preset)
    passed = True
    if args.expect is not None:
        passed = res.dense == (args.expect == "dense")
    return {"preset": args.preset}, res.to_dict(), {"rank_tol": 1e-8, "near_identity": 0.2}, passed, []


def cmd_gadget(args):
    from . import gadgets

    rng = random.Random(args.seed)
    if args.demo == "a-prime":
        res = gadgets.threshold_bounds(args.a, args.b)
        passed = res["no_side"] is not False and res["yes_side"] is not False
        return {"a": args.a, "b": args.b}, res, {}, passed, []
    if args.demo == "promise-demo":
        correct = 0
        max_q = 0
        for i in range(args.pairs):
            a, b = gadgets.promise_pair(rng, args.n, args.ratio)
            oracle = gadgets.ThresholdOracle(a, b, gap=2.0, mode=args.oracle_mode, seed=args.seed + i)
            res = gadgets.promise_compare(oracle, args.n)
            correct += res["answer"] == ("AoverB" if a > b else "BoverA")
            max_q = max(max_q, oracle.calls)
        out = {"pairs": args.pairs, "correct": correct, "max_queries": max_q, "query_limit": 2 * (args.n + 1)}
        passed = correct == args.pairs and max_q <= 2 * (args.n + 1)
        return {"n": args.n, "ratio": args.ratio, "oracle_mode": args.oracle_mode}, out, {}, passed, []
    # apv-demo
    f = args.f if args.f is not None else 10 ** rng.uniform(-3, 3)
    rescale, value = gadgets.synthetic_family(f, args.k, args.c, seed=args.seed)
    lo, hi = 1.0, args.k
    decider = gadgets.WindowDecider(value, lo, hi)
    res = gadgets.apv_to_apx(decider, rescale, args.k, args.c, args.m, (lo, hi))
    res |= {"f": f, "ratio": res["estimate"] / f}
    passed = res["lower"] <= f <= res["upper"]
    return {"k": args.k, "c": args.c, "m": args.m, "window": [lo, hi]}, res, {}, passed, []


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skeinhard", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for every random choice")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def point(q):
        g = q.add_mutually_exclusive_group()
        g.add_argument("--r", type=int, default=5, help="root-of-unity order, t = exp(2 pi i / r)")
        g.add_argument("--t", type=float, default=None, help="generic point t = exp(i T)")

    q = sub.add_parser("bracket", parents=[common], help="Kauffman bracket, Jones value and plat probability")
    q.add_argument("braid_file")
    q.add_argument("--mode", choices=("plat", "trace"), default="plat")
    q.add_argument("--method", choices=("morse", "brute"), default="morse")
    point(q)
    q.set_defaults(func=cmd_bracket)

    q = sub.add_parser("compile", parents=[common], help="compile a 1- or 2-qubit circuit into a plat")
    q.add_argument("circuit_file")
    q.add_argument("--r", type=int, default=5)
    q.add_argument("--eps", type=float, default=0.02)
    q.add_argument("--out", default=None, help="write the plat and its bound here")
    q.set_defaults(func=cmd_compile, t=None)

    q = sub.add_parser("verify", parents=[common], help="compare circuit and plat acceptance probabilities")
    q.add_argument("circuit_file")
    q.add_argument("plat_file")
    q.add_argument("--r", type=int, default=5)
    q.add_argument("--bound", type=float, default=None)
    q.set_defaults(func=cmd_verify, t=None)

    q = sub.add_parser("potts", parents=[common], help="Potts partition function or Tutte polynomial value")
    q.add_argument("graph_file")
    q.add_argument("--n", type=_number, default=None)
    q.add_argument("--x", type=_number, default=None)
    q.add_argument("--y", type=_number, default=None)
    q.set_defaults(func=cmd_potts)

    q = sub.add_parser("implement-weight", parents=[common], help="series/parallel tree approximating a target weight")
    q.add_argument("--Y", type=_number, action="append", required=True, help="start weight (repeatable)")
    q.add_argument("--n", type=_number, required=True)
    q.add_argument("--target", type=float, required=True)
    q.add_argument("--eps", type=float, default=1e-3)
    q.set_defaults(func=cmd_implement_weight)

    q = sub.add_parser("dense-check", parents=[common], help="numerical denseness certificate for a generator preset")
    q.add_argument("--preset", required=True, choices=("kauffman-r5", "kauffman-r6", "potts-n5-k3"))
    q.add_argument("--expect", choices=("dense", "not-dense"), default=None)
    q.set_defaults(func=cmd_dense_check)

    q = sub.add_parser("gadget", parents=[common], help="postselection, promise and rescaling gadgets")
    q.add_argument("demo", choices=("a-prime", "promise-demo", "apv-demo"))
    q.add_argument("--a", type=float, default=0.9)
    q.add_argument("--b", type=float, default=0.1)
    q.add_argument("--n", type=int, default=20)
    q.add_argument("--ratio", type=float, default=8.0)
    q.add_argument("--pairs", type=int, default=100)
    q.add_argument("--oracle-mode", choices=("exact", "random", "adversarial"), default="adversarial")
    q.add_argument("--f", type=float, default=None)
    q.add_argument("--k", type=float, default=2.0)
    q.add_argument("--c", type=float, default=3.0)
    q.add_argument("--m", type=int, default=40)
    q.set_defaults(func=cmd_gadget)
    return p


def _classify(exc: BaseException) -> int:
    from .braid import BraidParseError
    from .bracket import BudgetExceeded
    from .circuit import CircuitBudgetExceeded
    from .compiler import NetBudgetExceeded, TargetUnreachable
    from .potts.graph import PottsBudgetExceeded
    from .potts.shift import SearchBudgetExhausted

    if isinstance(exc, BraidParseError):
        return EXIT_PARSE
    if isinstance(exc, (BudgetExceeded, CircuitBudgetExceeded, NetBudgetExceeded, PottsBudgetExceeded, SearchBudgetExhausted)):
        return EXIT_BUDGET
    if isinstance(exc, TargetUnreachable):
        return EXIT_VERIFY
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    t0 = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        random.seed(args.seed)
        np.random.seed(args.seed)
        params, outputs, tolerances, passed, files = args.func(args)
        report = {
            "command": args.command,
            "inputs_digest": _digest(args, files),
            "params": params,
            "outputs": outputs,
            "tolerances": tolerances,
            "pass": bool(passed),
            "wall_time": time.perf_counter() - t0,
            "seed": args.seed,
        }
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:  # report library failures with a classified exit code
        code = _classify(exc)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    print(dumps(report))
    print(f"{args.command}: {'pass' if passed else 'FAIL'} in {report['wall_time']:.2f}s", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
