"""``ogc``: compile models, check and enumerate equilibria, simulate, draw.

Exit codes: 0 success, 1 model or profile diagnostics, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    DEFAULT_BUDGET,
    DEFAULT_EPSILON,
    BudgetExceeded,
    backward_eval,
    best_response_dynamics,
    check_equilibrium,
    closed_context,
    enumerate_pure_equilibria,
    onpath_projection,
    profile_space_size,
    random_profile,
)
from .analysis.equilibrium import default_jobs
from .analysis.evaluate import StrategyProfile
from .diagnostics import Diagnostic
from .dot import to_dot
from .dsl import compile_source
from .graph import GameGraph
from .report import (
    dumps_report,
    enumeration_json,
    equilibrium_json,
    graph_summary,
    make_report,
    trajectory_json,
)
from .types import format_value

COMMANDS = ("validate", "check", "enumerate", "simulate", "diagram")
# flags echoed into the report, per command (jobs never is: output must not depend on it)
ECHO = {
    "validate": (),
    "check": ("strategy", "epsilon", "deviations"),
    "enumerate": ("epsilon", "deviations", "budget"),
    "simulate": ("strategy", "epsilon", "max_iters", "seed"),
    "diagram": (),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def _param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"--param expects key=value, got {text!r}")
    try:
        number = int(value)
    except ValueError:
        try:
            number = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"--param {key}: {value!r} is not a number") from None
    return key.strip(), number


def _nonneg_float(text: str) -> float:
    x = float(text)
    if not x >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return x


def _positive_int(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return n


def _nonneg_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("model", help="path to a .og model")
    common.add_argument("--entry", help="game to analyse instead of the declared entry")
    common.add_argument("--param", action="append", default=[], type=_param, metavar="KEY=VALUE")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--strategy", help="strategy profile JSON (check: required; simulate: initial)")
    common.add_argument("--epsilon", type=_nonneg_float, default=DEFAULT_EPSILON)
    common.add_argument("--deviations", choices=("cell", "full"), default="full")
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    common.add_argument("--max-iters", dest="max_iters", type=_nonneg_int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=_positive_int, default=None, help="worker processes (default: $OGC_JOBS or all cores)")

    parser = _Parser(prog="ogc", description="Compositional game models: check, enumerate, simulate, draw.")
    parser.add_argument("--version", action="version", version=f"ogc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "validate": "compile a model and report diagnostics",
        "check": "check whether a strategy profile is an equilibrium",
        "enumerate": "list pure equilibria, one per on-path class",
        "simulate": "run best-response dynamics",
        "diagram": "emit a DOT string diagram",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


def _config(args) -> dict:
    out = {"command": args.command, "entry": args.entry, "params": dict(sorted(args.param))}
    for key in ECHO[args.command]:
        out[key] = getattr(args, key)
    return out


def _read_model(path: str) -> tuple[str | None, list[Diagnostic]]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"ogc: error: model file not found: {path}")
    try:
        return p.read_bytes().decode("utf-8"), []
    except UnicodeDecodeError as exc:
        return None, [Diagnostic("syntax.encoding", f"not valid UTF-8 at byte {exc.start}", subject=path)]


def _load_profile(g: GameGraph, path: str) -> tuple[StrategyProfile | None, list[Diagnostic]]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"ogc: error: strategy file not found: {path}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        return None, [Diagnostic("profile.invalid", f"not a JSON document: {exc}", subject=path)]
    if not isinstance(data, dict) or not all(isinstance(r, dict) for r in data.values()):
        return None, [Diagnostic("profile.invalid", "expected {decision id: {observation: action}}", subject=path)]
    diags = []
    decisions = g.decision_index
    for did in data:
        if did not in decisions:
            diags.append(Diagnostic("profile.unknown-decision", f"no decision {did!r} in the model", subject=did))
    if diags:
        return None, diags
    try:
        profile = StrategyProfile.from_json(g, data)
    except (KeyError, ValueError, TypeError) as exc:
        return None, [Diagnostic("profile.invalid", str(exc).strip("'\""), subject=path)]
    for d in g.decisions:
        missing = [o for o in d.obs_type.values if (d.id, o) not in profile.cells]
        if missing:
            shown = ", ".join(format_value(o) for o in missing[:5]) + (", ..." if len(missing) > 5 else "")
            diags.append(Diagnostic("profile.incomplete", f"decision {d.id} has no action for observation(s) {shown}", subject=d.id))
    return (None, diags) if diags else (profile, [])


def _results(args, g: GameGraph) -> tuple[dict | None, list[Diagnostic]]:
    ctx = closed_context(g)
    if args.command == "validate":
        return graph_summary(g), []
    if args.command == "check":
        profile, diags = _load_profile(g, args.strategy)
        if profile is None:
            return None, diags
        return equilibrium_json(g, check_equilibrium(g, profile, ctx, args.epsilon, args.deviations)), []
    if args.command == "enumerate":
        jobs = args.jobs or default_jobs()
        try:
            space = profile_space_size(g, ctx)
            found = enumerate_pure_equilibria(g, ctx, args.epsilon, args.deviations, args.budget, jobs)
        except BudgetExceeded as exc:
            return None, [Diagnostic("analysis.budget", str(exc))]
        onpath = [onpath_projection(g, profile, ctx) for profile, _ in found]
        return enumeration_json(g, found, onpath, space), []
    if args.command == "simulate":
        if args.strategy:
            init, diags = _load_profile(g, args.strategy)
            if init is None:
                return None, diags
        else:
            init = random_profile(g, args.seed)
        t = best_response_dynamics(g, ctx, init, args.max_iters, args.seed, args.epsilon)
        return trajectory_json(g, t, backward_eval(g, t.final, ctx)), []
    raise AssertionError(args.command)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def execute(args) -> int:
    if args.command == "check" and not args.strategy:
        raise UsageError("ogc check: error: --strategy is required")
    source, diags = _read_model(args.model)
    g = None
    if source is not None:
        g, diags = compile_source(source, args.entry, dict(args.param))
    results = None
    if g is not None:
        if args.command == "diagram":
            _emit(to_dot(g, Path(args.model).stem), args.out)
            return 0
        results, diags = _results(args, g)
    for d in diags:
        print(f"{args.model}: {d}", file=sys.stderr)
    _emit(dumps_report(make_report(args.model, _config(args), diags, results)), args.out)
    return 1 if diags else 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return execute(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
