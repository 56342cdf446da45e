"""Command-line front end.

    cbd validate FILE
    cbd analyze FILE... [--witness] [--json] [--max-slots N] [--jobs N]
    cbd criterion FILE [--json]
    cbd extract-hv FILE [-o OUT] [--max-slots N]
    cbd simulate MODEL [--layout "c1=1,2;c2=2,3"] [-o OUT]

Exit codes: 0 ok, 1 domain negative (invalid system, contextual when a
hidden-variable model was requested, unknown content), 2 parse error,
3 capacity exceeded, 4 wrong shape for the cyclic criterion, 5 the
closed-form criterion and the LP disagree (a bug, never expected).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .coupling import (
    DEFAULT_MAX_SLOTS,
    CapacityError,
    analyze,
    connection_equality_probs,
)
from .cyclic import cyclic3_contextual, is_cyclic3, suppes_zanotti_value
from .fileformat import (
    ParseError,
    canonical_json,
    dump_hv_model,
    dump_system,
    format_rational,
    format_values,
    load_hv_model,
    load_system,
    parse_layout,
)
from .hidden import extract, realize
from .system import System, connected_components, is_consistently_connected, validate

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_SHAPE = 4
EXIT_INTERNAL = 5


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandError(EXIT_PARSE, f"{path}: cannot read: {exc.strerror}") from None


def _load_valid(path: str) -> System:
    try:
        system = load_system(_read(path))
    except ParseError as exc:
        raise CommandError(EXIT_PARSE, f"{path}:{exc.line}:{exc.column}: {exc.message}") from None
    problems = validate(system)
    if problems:
        raise CommandError(EXIT_NEGATIVE, "\n".join(f"{path}: {p}" for p in problems))
    return system


def _write(out: Optional[str], text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _verdict(noncontextual: bool) -> str:
    return "noncontextual" if noncontextual else "contextual"


def build_report(system: System, max_slots: int = DEFAULT_MAX_SLOTS, witness: bool = False) -> dict:
    """Analysis report with every rational rendered as ``"num/den"``."""
    try:
        result = analyze(system, max_slots)
    except CapacityError as exc:
        raise CommandError(EXIT_CAPACITY, f"capacity exceeded: K={exc.slots} slots, cap {exc.cap}") from None
    consistent, violations = is_consistently_connected(system)
    report: dict = {
        "verdict": _verdict(result.noncontextual),
        "delta_max": format_rational(result.delta_max),
        "delta0": format_rational(result.delta0),
        "measure": format_rational(result.measure),
        "slots": len(system.slots),
        "connection_pairs": len(system.connection_pairs),
        "consistently_connected": consistent,
        "consistency_violations": [
            {
                "content": v.content,
                "context_a": v.context_a,
                "context_b": v.context_b,
                "plus_a": format_rational(v.plus_a),
                "plus_b": format_rational(v.plus_b),
            }
            for v in violations
        ],
    }
    view = is_cyclic3(system)
    if view is not None and consistent:
        sz = suppes_zanotti_value(view)
        report["suppes_zanotti"] = {"value": format_rational(sz), "verdict": _verdict(not sz > 1)}
    components = connected_components(system)
    if len(components) > 1:
        parts = []
        for comp in components:
            sub = analyze(comp, max_slots)
            parts.append(
                {
                    "contexts": list(comp.context_ids),
                    "verdict": _verdict(sub.noncontextual),
                    "delta_max": format_rational(sub.delta_max),
                    "delta0": format_rational(sub.delta0),
                    "measure": format_rational(sub.measure),
                }
            )
        report["components"] = parts
    if witness:
        w = result.witness
        report["witness"] = {
            "slots": [list(s) for s in w.slots],
            "atoms": [{"values": format_values(a), "p": format_rational(p)} for a, p in w.atoms()],
            "connection_equality": [
                {
                    "content": pair.content,
                    "context_a": pair.context_a,
                    "context_b": pair.context_b,
                    "probability": format_rational(p),
                }
                for pair, p in connection_equality_probs(w).items()
            ],
        }
    return report


def render_report(report: dict) -> str:
    lines = [
        f"slots K={report['slots']}, connection pairs N={report['connection_pairs']}",
        f"consistently connected: {'yes' if report['consistently_connected'] else 'no'}",
    ]
    for v in report["consistency_violations"]:
        lines.append(
            f"  content {v['content']}: Pr[+1] = {v['plus_a']} in {v['context_a']}, "
            f"{v['plus_b']} in {v['context_b']}"
        )
    lines += [
        f"delta_max = {report['delta_max']}",
        f"delta0 = {report['delta0']}",
        f"measure (delta0 - delta_max) = {report['measure']}",
        f"verdict: {report['verdict']}",
    ]
    if "suppes_zanotti" in report:
        sz = report["suppes_zanotti"]
        lines.append(f"Suppes-Zanotti value = {sz['value']} ({sz['verdict']})")
    for i, comp in enumerate(report.get("components", []), 1):
        lines.append(
            f"component {i} [{', '.join(comp['contexts'])}]: {comp['verdict']}, "
            f"delta_max = {comp['delta_max']}, delta0 = {comp['delta0']}, measure = {comp['measure']}"
        )
    if "witness" in report:
        w = report["witness"]
        lines.append("witness coupling over slots " + " ".join(f"{q}@{c}" for q, c in w["slots"]) + ":")
        lines += [f"  {a['values']}: {a['p']}" for a in w["atoms"]]
        lines += [
            f"  Pr[{e['content']}@{e['context_a']} = {e['content']}@{e['context_b']}] = {e['probability']}"
            for e in w["connection_equality"]
        ]
    return "\n".join(lines) + "\n"


def _analyze_one(path: str, max_slots: int, witness: bool) -> tuple[int, Optional[dict], str]:
    try:
        return EXIT_OK, build_report(_load_valid(path), max_slots, witness), ""
    except CommandError as exc:
        return exc.code, None, str(exc)


def cmd_validate(args) -> int:
    try:
        system = load_system(_read(args.path))
    except ParseError as exc:
        raise CommandError(EXIT_PARSE, f"{args.path}:{exc.line}:{exc.column}: {exc.message}") from None
    problems = validate(system)
    for p in problems:
        print(p)
    if problems:
        return EXIT_NEGATIVE
    print(f"{args.path}: valid")
    return EXIT_OK


def cmd_analyze(args) -> int:
    paths = args.paths
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(
                pool.map(_analyze_one, paths, [args.max_slots] * len(paths), [args.witness] * len(paths))
            )
    else:
        results = [_analyze_one(p, args.max_slots, args.witness) for p in paths]

    for code, _, err in results:
        if code:
            print(err, file=sys.stderr)
    if args.json:
        if len(paths) == 1:
            code, report, _ = results[0]
            if report is not None:
                sys.stdout.write(canonical_json(report))
        else:
            doc = {
                "files": [
                    {"path": p, "exit_code": code, **({"report": r} if r is not None else {"error": e})}
                    for p, (code, r, e) in zip(paths, results)
                ]
            }
            sys.stdout.write(canonical_json(doc))
    else:
        for p, (code, report, _) in zip(paths, results):
            if report is not None:
                if len(paths) > 1:
                    print(f"== {p}")
                sys.stdout.write(render_report(report))
    return max(code for code, _, _ in results)


def cmd_criterion(args) -> int:
    system = _load_valid(args.path)
    view = is_cyclic3(system)
    if view is None:
        raise CommandError(EXIT_SHAPE, f"{args.path}: not a rank-3 cyclic system; use `cbd analyze` instead")
    if not is_consistently_connected(system)[0]:
        raise CommandError(EXIT_SHAPE, f"{args.path}: not consistently connected; use `cbd analyze` instead")
    value = suppes_zanotti_value(view)
    contextual = cyclic3_contextual(system)
    try:
        result = analyze(system, args.max_slots)
    except CapacityError as exc:
        raise CommandError(EXIT_CAPACITY, str(exc)) from None
    lp_contextual = not result.noncontextual
    doc = {
        "suppes_zanotti_value": format_rational(value),
        "verdict": _verdict(not contextual),
        "lp_verdict": _verdict(not lp_contextual),
        "lp_measure": format_rational(result.measure),
        "agree": contextual == lp_contextual,
    }
    if args.json:
        sys.stdout.write(canonical_json(doc))
    else:
        print(f"Suppes-Zanotti value = {doc['suppes_zanotti_value']}")
        print(f"verdict: {doc['verdict']}")
        print(f"LP verdict: {doc['lp_verdict']} (measure {doc['lp_measure']})")
    if not doc["agree"]:
        print("error: closed-form criterion and LP disagree", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_extract_hv(args) -> int:
    system = _load_valid(args.path)
    try:
        result = analyze(system, args.max_slots)
    except CapacityError as exc:
        raise CommandError(EXIT_CAPACITY, f"capacity exceeded: K={exc.slots} slots, cap {exc.cap}") from None
    consistent, _ = is_consistently_connected(system)
    # consistent and noncontextual: the optimal witness agrees on every connection with probability 1
    coupling = result.witness if consistent and result.noncontextual else None
    if coupling is None:
        reason = "not consistently connected" if not consistent else "contextual"
        print(
            f"{args.path}: no hidden-variable model ({reason}); measure = {format_rational(result.measure)}",
            file=sys.stderr,
        )
        return EXIT_NEGATIVE
    _write(args.out, dump_hv_model(extract(coupling)))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        model = load_hv_model(_read(args.model))
        layout = parse_layout(args.layout) if args.layout else None
    except ParseError as exc:
        raise CommandError(EXIT_PARSE, f"{args.model}:{exc.line}:{exc.column}: {exc.message}") from None
    except ValueError as exc:
        raise CommandError(EXIT_PARSE, f"--layout: {exc}") from None
    try:
        system = realize(model, layout)
    except KeyError as exc:
        raise CommandError(EXIT_NEGATIVE, f"{args.model}: {exc.args[0]}") from None
    except ValueError as exc:
        raise CommandError(EXIT_NEGATIVE, f"{args.model}: {exc}") from None
    _write(args.out, dump_system(system))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbd",
        description="Contextuality analysis of systems of +1/-1 random variables via exact coupling LPs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a system file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="compute delta_max, delta0, the measure and the verdict")
    p.add_argument("paths", nargs="+", metavar="path")
    p.add_argument("--witness", action="store_true", help="include an optimal coupling")
    p.add_argument("--json", action="store_true", help="emit one canonical JSON document")
    p.add_argument("--max-slots", type=int, default=DEFAULT_MAX_SLOTS, metavar="N")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="analyze files in N processes")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("criterion", help="closed-form test for rank-3 cyclic systems")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-slots", type=int, default=DEFAULT_MAX_SLOTS, metavar="N")
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("extract-hv", help="write a hidden-variable model of a noncontextual system")
    p.add_argument("path")
    p.add_argument("-o", "--out", default=None, help="output file (default: stdout)")
    p.add_argument("--max-slots", type=int, default=DEFAULT_MAX_SLOTS, metavar="N")
    p.set_defaults(func=cmd_extract_hv)

    p = sub.add_parser("simulate", help="write the system generated by a hidden-variable model")
    p.add_argument("model")
    p.add_argument("--layout", default=None, help='contexts as "c1=q1,q2;c2=q2,q3" (default: from the model file)')
    p.add_argument("-o", "--out", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
