"""Command-line front end.

Exit codes: 0 for a decisive verdict whose certificates replayed, 2 for an
inconclusive outcome (unknown, truncated, exhausted) and 1 for usage or
input errors.  ``--json`` prints one structured report; its keys are
``command``, ``verdict``, ``result``, ``certificate``, ``replayed``,
``budgets``, ``hypotheses``, ``exit_code`` and ``timing``.  Everything
except ``timing`` is a deterministic function of the inputs and budgets.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import appendix, library, polyca
from .automata import CellularAutomaton, image_presentation
from .core import GeneratedConfig, Interval, PeriodicConfig
from .dynamics import (
    Chain,
    LimitWitness,
    Nilpotent,
    NilpotencyBudget,
    PeriodicWitness,
    chain_recurrence_certificate,
    limit_set,
    nilpotency,
    omega_in_fixed_points,
)
from .errors import FormatError, LimitSetError
from .formats import load, serialize_graph
from .shifts import Sft, canonical_presentation, check_mixing, periodic_points, presentation
from .spacetime import build, check_commutation, starred_grid

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"budgets must be positive, got {value}")
    return value


# --------------------------------------------------------------------------
# Inputs
# --------------------------------------------------------------------------

BUILTIN_RULES = {
    "identity": library.identity_rule,
    "shift": library.shift_rule,
    "xor": library.xor_rule,
    "and": library.and_rule,
    "constant0": lambda: library.constant_rule(0),
    "constant1": lambda: library.constant_rule(1),
}


def load_rule(arg: str) -> CellularAutomaton:
    """A rule file, a builtin name, ``eca:<n>`` or ``binary:<n>``."""
    if Path(arg).is_file():
        return load(arg, "rule")
    name = Path(arg).stem if arg.endswith(".rule") else arg
    if name in BUILTIN_RULES:
        return BUILTIN_RULES[name]()
    kind, _, number = name.partition(":")
    if kind in ("eca", "binary") and number.isdigit():
        n = int(number)
        try:
            return library.elementary_rule(n) if kind == "eca" else library.binary_rule(n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError(f"no rule file or builtin rule named {arg!r}")


def load_shift(arg: str | None, graph: str | None, ca: CellularAutomaton | None):
    if graph is not None:
        return load(graph, "graph")
    arg = arg or "full"
    if Path(arg).is_file():
        return load(arg, "sft")
    if arg == "full":
        return Sft.full(ca.source if ca is not None else library.BINARY)
    if arg == "golden":
        return library.golden_mean()
    if arg == "path":
        return library.path_sft()
    raise UsageError(f"no SFT file or builtin shift named {arg!r}")


def parse_config(text: str, alphabet) -> PeriodicConfig:
    names = text.split() if any(c.isspace() for c in text.strip()) else list(text.strip())
    return PeriodicConfig(alphabet.encode(names))


def _word(alphabet, values) -> str:
    names = alphabet.decode(values)
    return "".join(names) if all(len(n) == 1 for n in names) else " ".join(names)


def _config(alphabet, x: PeriodicConfig) -> str:
    return f"({_word(alphabet, x.values)})^Z"


def _alphabet_of(X):
    return X.alphabet


def _graph_payload(p) -> dict:
    return {
        "alphabet": list(p.alphabet.symbols),
        "vertices": [str(v) for v in p.vertices],
        "edges": [[str(u), str(v), p.alphabet.name(a)] for u, v, a in p.edges],
    }


def _mixing_payload(m) -> dict:
    return {"mixing": m.mixing, "reason": m.reason, "period": m.period}


# --------------------------------------------------------------------------
# Subcommands; each returns (exit code, report)
# --------------------------------------------------------------------------


def _report(command, verdict, result=None, certificate=None, replayed=None, budgets=None, hypotheses=None):
    return {
        "command": command,
        "verdict": verdict,
        "result": result or {},
        "certificate": certificate,
        "replayed": replayed,
        "budgets": budgets or {},
        "hypotheses": hypotheses or {},
    }


def cmd_limitset(args):
    ca = load_rule(args.rule)
    X = load_shift(args.shift, args.graph, ca)
    rep = limit_set(X, ca, args.budget)
    A = ca.source
    budgets = {"chain_length": args.budget}
    hyp = {"mixing": _mixing_payload(check_mixing(X))}
    if rep.status != "stabilized":
        langs = {str(L): [_word(A, w) for w in wl] for L, wl in rep.languages.items()}
        return EXIT_INCONCLUSIVE, _report("limitset", "Truncated", {"steps": rep.steps, "outer_languages": langs}, budgets=budgets, hypotheses=hyp)
    result = {
        "stabilized_at": rep.steps,
        "omega": _graph_payload(canonical_presentation(rep.omega)),
        "values": [A.name(a) for a in rep.values],
        "finite": rep.finite,
        "finiteness_reason": rep.finiteness_reason,
        "members": [_config(A, x) for x in rep.members] if rep.members is not None else None,
        "singleton": rep.singleton,
    }
    code = EXIT_OK if rep.invariant else EXIT_ERROR
    return code, _report("limitset", "Stabilized", result, {"kind": "invariance", "tau(omega) = omega": rep.invariant}, rep.invariant, budgets, hyp)


def _certificate_payload(verdict, A) -> dict:
    if isinstance(verdict, Nilpotent):
        c = verdict.certificate
        return {"kind": "constant-power", "power": c.power, "terminal": A.name(c.terminal), "window": [c.window.lo, c.window.hi], "words": c.words}
    w = verdict.witness
    if isinstance(w, PeriodicWitness):
        return {"kind": "periodic-witness", "points": [{"config": _config(A, z), "period": k} for z, k in w.points]}
    if isinstance(w, LimitWitness):
        return {"kind": "limit-witness", "omega": _graph_payload(w.omega), "words": [_word(A, u) for u in w.words]}
    return {"kind": type(w).__name__}


def cmd_nilpotency(args):
    ca = load_rule(args.rule)
    X = load_shift(args.shift, args.graph, ca)
    budget = NilpotencyBudget(max_power=args.max_power, chain_length=args.chain_length, max_period=args.max_period)
    v = nilpotency(X, ca, budget)
    A = ca.source
    hyp = {"mixing": _mixing_payload(v.mixing), "notes": list(v.notes)}
    budgets = {"max_power": args.max_power, "chain_length": args.chain_length, "max_period": args.max_period}
    if v.kind == "Unknown":
        return EXIT_INCONCLUSIVE, _report("nilpotency", "Unknown", {"consumed": v.budgets}, budgets=budgets, hypotheses=hyp)
    ok = v.replay(X, ca)
    label = f"Nilpotent({v.power})" if isinstance(v, Nilpotent) else "NonNilpotent"
    result = {"power": v.power, "terminal": A.name(v.terminal)} if isinstance(v, Nilpotent) else {}
    return (EXIT_OK if ok else EXIT_ERROR), _report("nilpotency", label, result, _certificate_payload(v, A), ok, budgets, hyp)


def cmd_image(args):
    ca = load_rule(args.rule)
    X = load_shift(args.shift, args.graph, ca)
    img = canonical_presentation(image_presentation(ca, presentation(X)))
    return EXIT_OK, _report("image", "Image", {"graph": _graph_payload(img), "text": serialize_graph(img)})


def cmd_spacetime(args):
    ca = load_rule(args.rule)
    X = load_shift(args.shift, args.graph, ca)
    sys_ = build(X, ca)
    cells = [(i, j) for i in range(args.i_max + 1) for j in range(args.j_max + 1)]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(lambda ij: check_commutation(sys_, *ij), cells))
    terminal = ca.source.index(args.terminal) if args.terminal is not None else 0
    grid = starred_grid(sys_, terminal, args.i_max, args.j_max)
    rows = []
    for (i, j), r in zip(cells, results):
        rows.append(
            {
                "i": i,
                "j": j,
                "size": len(sys_.cell(i, j)),
                "commutes": r.ok,
                "checked": r.checked,
                "invariant": r.invariant,
                "starred_size": grid.sizes[(i, j)],
            }
        )
    ok = all(r.ok for r in results)
    result = {
        "radius": sys_.radius,
        "cells": rows,
        "terminal": ca.source.name(terminal),
        "starred_first_empty": list(grid.first_empty) if grid.first_empty else None,
    }
    budgets = {"i_max": args.i_max, "j_max": args.j_max}
    return (EXIT_OK if ok else EXIT_ERROR), _report("spacetime check", "Commutes" if ok else "Fails", result, None, ok, budgets)


def cmd_periodic(args):
    ca = load_rule(args.rule) if args.rule else None
    X = load_shift(args.shift, args.graph, ca)
    A = _alphabet_of(X)
    points = periodic_points(X, args.period)
    result = {"period": args.period, "points": [_config(A, x) for x in points]}
    if ca is not None:
        omega = sorted(omega_in_fixed_points(X, ca, args.period), key=lambda x: (x.period, x.values))
        result["omega_fixed"] = [_config(A, x) for x in omega]
    return EXIT_OK, _report("periodic", "Enumerated", result, budgets={"period": args.period})


def cmd_chainrec(args):
    ca = load_rule(args.rule)
    X = load_shift(args.shift, args.graph, ca)
    x = parse_config(args.config, ca.source)
    F = Interval(args.window[0], args.window[1])
    out = chain_recurrence_certificate(ca, x, F, args.budget, X)
    budgets = {"period_bound": args.budget}
    if not isinstance(out, Chain):
        return EXIT_INCONCLUSIVE, _report("chainrec", "Exhausted", {"reason": out.reason}, budgets=budgets)
    ok = out.replay(ca)
    cert = {"kind": "chain", "window": [F.lo, F.hi], "configurations": [_config(ca.source, u) for u in out.configurations]}
    return (EXIT_OK if ok else EXIT_ERROR), _report("chainrec", "ChainRecurrent", {"length": out.length}, cert, ok, budgets)


def cmd_mixing(args):
    X = load_shift(args.shift, args.graph, None)
    m = check_mixing(X)
    return EXIT_OK, _report("mixing", "Mixing" if m.mixing else "NotMixing", _mixing_payload(m))


# examples ------------------------------------------------------------------


def _ex_not_in_image(args):
    cert = polyca.not_in_image_certificate()
    steps = cert.replay()
    witness = polyca.recurrent_witness(GeneratedConfig.constant(1), 1, 1)
    consistent = polyca.witness_outside_image(cert, witness)
    ok = all(steps) and consistent
    result = {"proof": cert.to_text(), "steps_replayed": steps, "recurrent_witness_outside_omega": consistent}
    return ok, "NotInImage", result, {"kind": "proof-object", "steps": len(cert.steps)}


def _ex_square_plus_one(args):
    it = polyca.interval_iteration(polyca.square_plus_one(), B=args.bound)
    ok = it.certified_at is not None
    result = {"lowers": [polyca.format_scalar(a) for a in it.lowers], "certified_at": it.certified_at, "verdict": it.verdict}
    return ok, "EmptyOnProbe", result, {"kind": "interval-enclosures", "bound": args.bound}


def _ex_projective(args):
    rule = polyca.square_plus_one(projective=True)
    it = polyca.interval_iteration(rule, n=6)
    ok = it.omega == (polyca.INF,) and polyca.replay_projective_certificate(rule, it.certificate)
    return ok, "NonNilpotent", {"omega": "inf^Z", "verdict": it.verdict}, dict(it.certificate, kind="projective")


def _ex_density(args):
    c = polyca.from_pattern((1, 2, 3), 0)
    w = polyca.omega_density_witness(c, 0, 3)
    ok = w.verify(0, 2)
    return ok, "Dense", {"target": [1, 2, 3], "window": [0, 2], "depth": 3}, {"kind": "image-ladder", "verified": ok}


def _ex_shifted(args):
    c = GeneratedConfig.constant(1)
    d = polyca.shifted_preimage(c, 1)
    ok = polyca.verify_shifted_preimage(c, d, 1, 0, 5)
    return ok, "Preimage", {"d": [polyca.format_scalar(v) for v in d.block(-2, 4)], "window": [-2, 4]}, {"kind": "forward-check", "verified": ok}


def _ex_recurrent(args):
    w = polyca.recurrent_witness(GeneratedConfig.constant(1), 1, 1)
    checks = w.verify()
    ok = all(p for _, _, p in checks)
    result = {"checks": [{"power": p, "window": [win.lo, win.hi], "passed": ok_} for p, win, ok_ in checks]}
    return ok, "Recurrent", result, {"kind": "forward-check"}


def _ex_fixture(kind):
    def run(args):
        f = appendix.appendix_fixture(kind)
        result = {"kind": kind}
        if kind == "empty_limit":
            N = 50
            probe = f.probe(N, 2 * N, 2 * N)
            ok = not any(v < N for v in probe)
            result.update(probe_min=min(probe), depth=N)
        elif kind == "singleton_not_pointwise":
            probe = f.probe(102, 200, 100)
            ok = probe == {1} and all(f.iterate(2, k) == k + 2 for k in range(50))
            result.update(probe=sorted(probe))
        elif kind == "strict_invariance":
            probe = f.probe(60, 2000, 50)
            ok = probe == {0, 1} and {f(v) for v in probe} == {0}
            result.update(probe=sorted(probe), image=sorted({f(v) for v in probe}))
        else:
            M = 2000
            ok = all(f(f.preimage(m)) == m for m in range(M)) and all(f.steps_to(m, 0, M) is not None for m in range(M))
            result.update(checked=M)
        return ok, "FixtureChecked", result, {"kind": "probe"}

    return run


EXAMPLES = {
    "riccati-not-in-image": _ex_not_in_image,
    "riccati-density": _ex_density,
    "riccati-shifted-preimage": _ex_shifted,
    "riccati-recurrent": _ex_recurrent,
    "square-plus-one": _ex_square_plus_one,
    "square-plus-one-projective": _ex_projective,
    **{k.replace("_", "-"): _ex_fixture(k) for k in appendix.KINDS},
}


def cmd_example(args):
    if args.name == "list" or args.name is None:
        return EXIT_OK, _report("example", "List", {"examples": sorted(EXAMPLES)})
    if args.name not in EXAMPLES:
        raise UsageError(f"unknown example {args.name!r}; try 'example list'")
    ok, verdict, result, cert = EXAMPLES[args.name](args)
    return (EXIT_OK if ok else EXIT_ERROR), _report("example", verdict, result, cert, ok)


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="limitset", description="Limit sets, nilpotency and witnesses for cellular automata.")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print a structured report")
    common.add_argument("--jobs", type=_positive, default=argparse.SUPPRESS, help="worker threads for parallel analyses")
    parser.add_argument("--json", action="store_true", help="print a structured report")
    parser.add_argument("--jobs", type=_positive, default=1, help="worker threads for parallel analyses")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    def shift_args(p, rule=True, rule_required=True):
        if rule:
            p.add_argument("--rule", required=rule_required, help="rule file, builtin name, eca:<n> or binary:<n>")
        p.add_argument("--shift", help="SFT file or one of full, golden, path (default full)")
        p.add_argument("--graph", help="labelled-graph file presenting a sofic shift")

    p = sub.add_parser("limitset", help="image chain and limit set")
    shift_args(p)
    p.add_argument("--budget", type=_positive, default=8, help="image-chain length")
    p.set_defaults(func=cmd_limitset)

    p = sub.add_parser("nilpotency", help="three-valued nilpotency verdict")
    shift_args(p)
    p.add_argument("--max-power", type=_positive, default=8)
    p.add_argument("--chain-length", type=_positive, default=8)
    p.add_argument("--max-period", type=_positive, default=6)
    p.set_defaults(func=cmd_nilpotency)

    p = sub.add_parser("image", help="canonical presentation of the image")
    shift_args(p)
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("spacetime", help="space-time inverse system")
    p.add_argument("action", choices=["check"])
    shift_args(p)
    p.add_argument("--i-max", type=_positive, default=2)
    p.add_argument("--j-max", type=_positive, default=2)
    p.add_argument("--terminal", help="symbol for the starred grid (default: first symbol)")
    p.set_defaults(func=cmd_spacetime)

    p = sub.add_parser("periodic", help="periodic points and the limit set on them")
    shift_args(p, rule_required=False)
    p.add_argument("--period", type=_positive, required=True)
    p.set_defaults(func=cmd_periodic)

    p = sub.add_parser("chainrec", help="chain-recurrence certificate")
    shift_args(p)
    p.add_argument("--config", required=True, help="one period of the configuration, e.g. 01")
    p.add_argument("--window", type=int, nargs=2, default=(0, 0), metavar=("LO", "HI"))
    p.add_argument("--budget", type=_positive, default=6, help="largest spatial period searched")
    p.set_defaults(func=cmd_chainrec)

    p = sub.add_parser("mixing", help="topological mixing of a sofic shift")
    shift_args(p, rule=False)
    p.set_defaults(func=cmd_mixing)

    p = sub.add_parser("example", help="run a named worked example ('list' shows them)")
    p.add_argument("name", nargs="?", default="list")
    p.add_argument("--bound", type=_positive, default=10**6, help="probe bound for square-plus-one")
    p.set_defaults(func=cmd_example)
    return parser


def _format_text(report: dict) -> str:
    lines = [f"{report['command'] or 'limitset'}: {report['verdict']}"]
    for key in ("result", "certificate", "budgets", "hypotheses"):
        value = report.get(key)
        if not value:
            continue
        if isinstance(value, dict):
            for k, v in value.items():
                if isinstance(v, str) and "\n" in v:
                    lines.append(f"{key}.{k}:")
                    lines.extend("  " + s for s in v.rstrip("\n").splitlines())
                else:
                    lines.append(f"{key}.{k}: {json.dumps(v, sort_keys=True)}")
    if report.get("replayed") is not None:
        lines.append(f"replayed: {'yes' if report['replayed'] else 'NO'}")
    return "\n".join(lines) + "\n"


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def loads_report(text: str) -> dict:
    return json.loads(text)


def run(argv=None) -> tuple:
    """Run the CLI and return ``(exit code, report)`` without printing."""
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        code, report = args.func(args)
    except UsageError as exc:
        code, report = EXIT_ERROR, _report(None, "UsageError", {"error": str(exc)})
    except FormatError as exc:
        code, report = EXIT_ERROR, _report(None, "InputError", {"error": str(exc)})
    except LimitSetError as exc:
        code, report = EXIT_ERROR, _report(None, type(exc).__name__, {"error": str(exc)})
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, report = run(argv)
    if "--json" in argv:
        sys.stdout.write(dumps_report(report))
    else:
        stream = sys.stderr if code == EXIT_ERROR and report["command"] is None else sys.stdout
        stream.write(_format_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
