"""Command-line entry point.

Every subcommand prints a text report on stdout.  With ``--output PATH`` the
text report is also written to ``PATH`` and a JSON report to ``PATH.json``.
Exit status: 0 when all checks pass, 1 on a failed check, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import construction, epistemic, star, symbolic
from .relations import GroundSpace, dumps
from .sweep import MAX_SIZE, sweep

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def load_bundle(path) -> construction.ConstructionBundle:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read bundle {path}: {exc}") from exc
    try:
        return construction.bundle_from_json(doc)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"invalid bundle {path}: {exc}") from exc


def save_bundle(bundle: construction.ConstructionBundle, path) -> None:
    Path(path).write_text(dumps(construction.bundle_to_json(bundle)))


def _parse_blocks(text: str) -> list[list[str]]:
    blocks = [[p.strip() for p in part.split(",") if p.strip()] for part in text.split("|")]
    if any(not b for b in blocks):
        raise InputError(f"empty block in {text!r}")
    return blocks


def _json_arg(text: str):
    path = Path(text)
    try:
        if path.is_file():
            return json.loads(path.read_text())
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not JSON: {text!r}") from exc


def cmd_trace(args):
    events: list | None = [] if args.audit else None
    trace = symbolic.closure_trace(audit=events)
    report = trace.to_json()
    if events is not None:
        report["deletions"] = [str(ev) for ev in events]
    return EXIT_OK, trace.text(), report


def cmd_verify(args):
    if args.size is not None and not 0 <= args.size <= MAX_SIZE:
        raise InputError(f"--size must be within 0..{MAX_SIZE}")
    if args.count < 1:
        raise InputError("--count must be positive")
    result = sweep(args.count, args.seed, args.size, args.audit)
    text = result.text()
    if not result.ok:
        first = result.first_failure()
        text += "first counterexample: " + " ".join(map(str, first)) + "\n"
    return (EXIT_OK if result.ok else EXIT_FAIL), text, result.to_json()


def _fmt_set(states) -> str:
    return "{" + ", ".join(map(str, sorted(states, key=epistemic.natural_key))) + "}"


def cmd_ck(args):
    if not args.input:
        raise InputError("ck needs --input MODEL.json")
    try:
        model = epistemic.read_model(args.input)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"invalid model: {exc}") from exc
    event = model.states if args.event is None else model.event(_json_arg(args.event))
    lines = [f"event A = {_fmt_set(event)}"]
    report: dict = {"event": sorted(event, key=epistemic.natural_key), "knows": {}}
    for agent, p in model.partitions.items():
        k = epistemic.knows(event, p)
        lines.append(f"K[{agent}](A) = {_fmt_set(k)}")
        report["knows"][agent] = sorted(k, key=epistemic.natural_key)
    ek = epistemic.everyone_knows(event, model)
    meet = epistemic.meet_partitions(model)
    ck_meet = epistemic.common_knowledge_meet(event, model)
    ck_iter = epistemic.common_knowledge_iterated(event, model)
    blocks = sorted((sorted(b, key=epistemic.natural_key) for b in meet.blocks), key=lambda b: epistemic.natural_key(b[0]))
    lines.append(f"EK(A) = {_fmt_set(ek)}")
    lines.append("meet = " + " ".join(_fmt_set(b) for b in blocks))
    lines.append(f"CK(A) via meet = {_fmt_set(ck_meet)}")
    lines.append(f"CK(A) via iteration = {_fmt_set(ck_iter)}")
    agree = ck_meet == ck_iter
    lines.append("agreement: " + ("ok" if agree else "FAIL"))
    report.update(
        everyone_knows=sorted(ek, key=epistemic.natural_key),
        meet=blocks,
        common_knowledge_meet=sorted(ck_meet, key=epistemic.natural_key),
        common_knowledge_iterated=sorted(ck_iter, key=epistemic.natural_key),
        agree=agree,
    )
    return (EXIT_OK if agree else EXIT_FAIL), "\n".join(lines) + "\n", report


def cmd_star(args):
    if args.n is None:
        raise InputError("star needs --n")
    try:
        report = star.star_report(args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ok = (
        report["minCover"] == args.n - 1
        and report["familyUnionIsR"]
        and report.get("exhaustiveMinCover", args.n - 1) == args.n - 1
        and report.get("subrelationsMatch", True)
    )
    lines = [f"{k}: {v}" for k, v in report.items()]
    return (EXIT_OK if ok else EXIT_FAIL), "\n".join(lines) + "\n", report


def _bundle_from_args(args):
    if args.input:
        return load_bundle(args.input)
    blocks = _parse_blocks(args.blocks)
    xs = [p for b in blocks for p in b]
    try:
        space = GroundSpace(xs)
        return construction.build_ij(construction.equivalence_from_blocks(space, blocks))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_eval(args):
    if not args.expr:
        raise InputError("eval needs --expr")
    bundle = _bundle_from_args(args)
    expr = symbolic.parse_expr(args.expr)
    value = symbolic.evaluate_on_model(expr, bundle)
    pairs = value.sorted_pairs()
    lines = [f"expr: {symbolic.format_expr(expr) or '(empty)'}", f"pairs: {len(pairs)}"]
    lines += [f"  {a} {b}" for a, b in pairs]
    return EXIT_OK, "\n".join(lines) + "\n", {"expr": symbolic.format_expr(expr), "pairs": [list(p) for p in pairs]}


def cmd_bundle(args):
    bundle = _bundle_from_args(args)
    doc = construction.bundle_to_json(bundle)
    checks = construction.check_identities(bundle)
    lines = [f"|X|={len(bundle.space.x_points)} |Y|={len(bundle.space.y_points)}"]
    lines += [f"{c.name}: {'ok' if c else 'FAIL ' + str(c.counterexample)}" for c in checks]
    return (EXIT_OK if all(checks) else EXIT_FAIL), "\n".join(lines) + "\n", doc


COMMANDS = {
    "trace": cmd_trace,
    "verify": cmd_verify,
    "ck": cmd_ck,
    "star": cmd_star,
    "eval": cmd_eval,
    "bundle": cmd_bundle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="also write the text report here and JSON to OUTPUT.json")
        return p

    p = common(sub.add_parser("trace", help="normal forms of the powers of I ∪ J"))
    p.add_argument("--audit", action="store_true", help="record every subsumption deletion")

    p = common(sub.add_parser("verify", help="random sweep against concrete semantics"))
    p.add_argument("--size", type=int, help="|X| for every instance (default: random in 1..6)")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--audit", action="store_true", help="check every deletion concretely")

    p = common(sub.add_parser("ck", help="knowledge and common knowledge on a model file"))
    p.add_argument("--input", help="model JSON file")
    p.add_argument("--event", help="JSON list of states, or a file holding one (default: all states)")

    p = common(sub.add_parser("star", help="cover analysis of the star relation"))
    p.add_argument("--n", type=int)

    for name, help_text in (("eval", "evaluate an expression on a bundle"), ("bundle", "build and export a bundle")):
        p = common(sub.add_parser(name, help=help_text))
        p.add_argument("--input", help="bundle JSON file")
        p.add_argument("--blocks", default="x1,x2|x3", help="classes of E, e.g. 'a,b|c' (when no --input)")
        if name == "eval":
            p.add_argument("--expr", help="expression such as \"GHG'\"")
    return parser


def dispatch(args) -> int:
    try:
        status, text, report = COMMANDS[args.command](args)
    except (InputError, symbolic.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    if args.output:
        Path(args.output).write_text(text)
        Path(f"{args.output}.json").write_text(dumps(report))
    if status == EXIT_FAIL:
        print("check failed", file=sys.stderr)
    return status


def main(argv=None) -> int:
    return dispatch(build_parser().parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
