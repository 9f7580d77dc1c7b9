"""
Command-line entry point.

Graphs are read from plain-text files (vertex count, 0/1 matrix rows, optional
``colors:`` line). Every command except ``decode`` prints a JSON report.

Exit codes: 0 success, 1 a negative outcome (only with --fail-on-no, or a
failed self-test, or encode on non-isomorphic graphs), 2 usage or input error,
3 input exceeds the brute-force limit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import jsonschema

from . import __version__
from .acceptance import SCALES, run_all
from .blockcode import BlockedDescription, describe_single, describe_mixed, reconstruct_bit
from .codec import build_aux, code_range, decode, encode, stage_trace
from .errors import CapabilityError, GraphcodeError, NotIsomorphicError
from .graph import Graph, parse_graph, serialize_graph
from .group import LIMIT_ENV_VAR, are_isomorphic, automorphism_group, generating_set, stabilizer_chain
from .reduction import MDLOracle, ReductionParams, ga_test, gi_test, rigid_gi, rigid_noniso_test

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "version", "seed", "params", "measurements", "decision", "wall_time"],
    "properties": {
        "command": {"type": "string"},
        "version": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
        "params": {"type": "object"},
        "measurements": {"type": ["object", "array"]},
        "decision": {"type": ["string", "null"]},
        "wall_time": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}

# decisions that count as "no" for --fail-on-no
NEGATIVE = {
    "reduce-noniso": "iso-or-unknown",
    "reduce-gi": "non-isomorphic",
    "reduce-ga": "has-nontrivial-automorphism",
    "rigid-gi": "non-isomorphic",
}


class UsageError(Exception):
    pass


def read_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def make_report(command: str, params: dict, measurements, decision: str | None, started: float, seed=None) -> dict:
    report = {
        "command": command,
        "version": __version__,
        "seed": seed,
        "params": params,
        "measurements": measurements,
        "decision": decision,
        "wall_time": round(time.perf_counter() - started, 4),
    }
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))


def _reduction_params(args) -> ReductionParams:
    return ReductionParams(t=args.t, b=args.b, theta_slack=args.slack, trials=args.trials, seed=args.seed, preset=args.preset)


def _params_echo(params: ReductionParams, n: int) -> dict:
    return {
        "t": params.t_for(n),
        "b": params.b,
        "theta_slack": params.slack_for(n),
        "trials": params.trials,
        "preset": params.preset,
    }


# -- commands --------------------------------------------------------------------


def cmd_aut(args, started):
    g = read_graph(args.graph)
    aut = automorphism_group(g)
    chain = stabilizer_chain(aut, g.n)
    m = {
        "n": g.n,
        "order": aut.order,
        "orbits": [list(b) for b in chain[0].orbits],
        "chain": [{"level": lv.index, "order": lv.order, "orbits": [list(b) for b in lv.orbits]} for lv in chain.levels],
        "generators": [str(p) for p in generating_set(aut)],
    }
    if args.elements:
        m["elements"] = [str(p) for p in aut]
    return make_report("aut", {"graph": args.graph}, m, "rigid" if aut.order == 1 else "nontrivial", started), 0


def cmd_encode(args, started):
    g, h = read_graph(args.base), read_graph(args.copy)
    code, trace = encode(g, h)
    # codes are 1-based on the command line, 0-based inside the library
    m = {"code": str(code.one_based), "range": str(code.range), "stage_factors": [str(f) for f in trace.stage_factors()]}
    if args.trace:
        m["trace"] = trace.to_dict()
    return make_report("encode", {"base": args.base, "copy": args.copy}, m, None, started), 0


def cmd_decode(args, started):
    g = read_graph(args.base)
    try:
        value = int(args.code)
    except ValueError:
        raise UsageError(f"code must be an integer, got {args.code!r}") from None
    m = code_range(g)
    if not 1 <= value <= m:
        raise UsageError(f"code {value} outside [1, {m}]")
    h = decode(build_aux(g), value - 1)
    text = serialize_graph(h)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return None, 0


def cmd_describe(args, started):
    g0 = read_graph(args.base)
    g1 = read_graph(args.second) if args.second else None
    copies = [read_graph(p) for p in args.copies]
    if g1 is None:
        codes = [encode(g0, h)[0].value for h in copies]
        m0 = code_range(g0)
        if args.kind == "rank":
            from .group import find_isomorphism
            from .perm import lehmer_rank

            codes = [lehmer_rank(find_isomorphism(g0, h)) for h in copies]
            import math

            m0 = math.factorial(g0.n)
        d = describe_single(g0, codes, m0, args.b, kind=args.kind)
    else:
        w, codes = [], []
        for h in copies:
            base = 0 if are_isomorphic(g0, h) else 1
            w.append(base)
            codes.append(encode((g0, g1)[base], h)[0].value)
        d = describe_mixed(g0, g1, w, codes, code_range(g0), code_range(g1), args.b)
    Path(args.out).write_bytes(d.to_bytes())
    m = {"mode": d.mode, "t": d.t, "b": d.b, "total_bits": d.total_bits, "x_length": d.x_length, "out": args.out}
    return make_report("describe", {"base": args.base, "second": args.second, "copies": len(copies)}, m, None, started), 0


def cmd_xbit(args, started):
    try:
        d = BlockedDescription.from_bytes(Path(args.description).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {args.description}: {exc.strerror}") from None
    rows = []
    for i in args.index:
        log: set = set()
        bit = reconstruct_bit(d, i, log)
        rows.append({"index": i, "bit": bit, "sections": sorted(log)})
    m = {"x_length": d.x_length, "x_prime_length": d.x_prime_length, "bits": rows}
    return make_report("xbit", {"description": args.description}, m, None, started), 0


def cmd_reduce_noniso(args, started):
    g0, g1 = read_graph(args.g0), read_graph(args.g1)
    params = _reduction_params(args)
    oracle = MDLOracle()
    runs = [rigid_noniso_test(g0, g1, params, oracle, (k,)) for k in range(params.trials)]
    votes = sum(r.decision == "noniso" for r in runs)
    decision = "noniso" if 2 * votes > len(runs) else "iso-or-unknown"
    m = {"trials": [r.to_dict() for r in runs], "noniso_votes": votes}
    return make_report("reduce-noniso", _params_echo(params, g0.n), m, decision, started, params.seed), decision


def cmd_reduce_gi(args, started):
    g0, g1 = read_graph(args.g0), read_graph(args.g1)
    params = _reduction_params(args)
    res = gi_test(g0, g1, params, MDLOracle())
    return make_report("reduce-gi", _params_echo(params, g0.n), res.to_dict(), res.decision, started, params.seed), res.decision


def cmd_reduce_ga(args, started):
    g = read_graph(args.graph)
    params = _reduction_params(args)
    res = ga_test(g, params, MDLOracle())
    return make_report("reduce-ga", _params_echo(params, g.n), res.to_dict(), res.decision, started, params.seed), res.decision


def cmd_rigid_gi(args, started):
    g, h = read_graph(args.g0), read_graph(args.g1)
    params = _reduction_params(args)
    res = rigid_gi(g, h, params, MDLOracle())
    return make_report("rigid-gi", _params_echo(params, g.n), res.to_dict(), res.decision, started, params.seed), res.decision


def cmd_selftest(args, started):
    only = set(args.only) if args.only else None
    echo = (lambda line: print(line, file=sys.stderr)) if not args.quiet else None
    results = run_all(args.scale, args.seed, only, echo)
    passed = all(r.passed for r in results)
    m = [r.to_dict() for r in results]
    report = make_report("selftest", {"scale": args.scale}, m, "pass" if passed else "fail", started, args.seed)
    return report, 0 if passed else 1


# -- parser ------------------------------------------------------------------------


def _add_reduction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=int, default=None, help="copies per sample (default: preset value)")
    p.add_argument("--b", type=int, default=3, help="codes per block")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=None, help="threshold slack in bits (default 4 n log2 n)")
    p.add_argument("--preset", choices=("desk", "asymptotic"), default="desk")
    p.add_argument("--fail-on-no", action="store_true", help="exit 1 when the decision is the negative outcome")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphcode",
        description="Coset codes for graph copies and description-length isomorphism tests.",
        epilog=f"Set {LIMIT_ENV_VAR} to change the largest n handled by exhaustive group computations.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aut", help="automorphism group, orbits and stabilizer chain")
    p.add_argument("graph")
    p.add_argument("--elements", action="store_true", help="list every automorphism")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("encode", help="coset code of a copy of BASE")
    p.add_argument("base")
    p.add_argument("copy")
    p.add_argument("--trace", action="store_true", help="include the per-stage bookkeeping")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="the copy of BASE with the given code (graph text on stdout)")
    p.add_argument("base")
    p.add_argument("code", help="1-based code as printed by encode")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("describe", help="write a blocked description of a list of copies")
    p.add_argument("base")
    p.add_argument("copies", nargs="+")
    p.add_argument("--second", help="second base graph (mixed description)")
    p.add_argument("--kind", choices=("coset", "rank"), default="coset")
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("xbit", help="random-access bits of the string a description encodes")
    p.add_argument("description")
    p.add_argument("--index", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_xbit)

    for name, func, nargs, text in (
        ("reduce-noniso", cmd_reduce_noniso, ("g0", "g1"), "one-sided non-isomorphism test for rigid graphs"),
        ("reduce-gi", cmd_reduce_gi, ("g0", "g1"), "isomorphism test from three complexity estimates"),
        ("reduce-ga", cmd_reduce_ga, ("graph",), "nontrivial automorphism test via individualization"),
        ("rigid-gi", cmd_rigid_gi, ("g0", "g1"), "rigidity check followed by the non-isomorphism test"),
    ):
        p = sub.add_parser(name, help=text)
        for a in nargs:
            p.add_argument(a)
        _add_reduction_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--scale", choices=SCALES, default="small")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    p.add_argument("--quiet", action="store_true", help="suppress per-criterion lines on stderr")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        report, outcome = args.func(args, started)
    except CapabilityError as exc:
        print(f"graphcode: {exc}", file=sys.stderr)
        return 3
    except NotIsomorphicError as exc:
        print(f"graphcode: {exc}", file=sys.stderr)
        return 1
    except (UsageError, GraphcodeError, ValueError) as exc:
        print(f"graphcode: {exc}", file=sys.stderr)
        return 2
    if report is not None:
        _emit(report)
    if isinstance(outcome, str):
        return 1 if getattr(args, "fail_on_no", False) and NEGATIVE.get(args.command) == outcome else 0
    return outcome


if __name__ == "__main__":
    sys.exit(main())
