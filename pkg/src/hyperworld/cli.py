"""Command line: ``hyperworld run|classify|demo``.

Exit codes: 0 ok, 1 usage, 2 scenario or parse error, 3 runtime fault.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .engine import run_scenario, summary_json
from .errors import HyperworldError, IncompleteProfile, ScenarioError, UnknownDemo
from .scenario import DEMOS, load, load_demo
from .script import ScriptError
from .taxonomy import classify, load_profile

EXIT_OK, EXIT_USAGE, EXIT_SCENARIO, EXIT_FAULT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperworld", description="Scriptable hyper-real rigid-body microworld.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--seed", type=_u64, help="override the scenario seed")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("file", type=Path)
    r.add_argument("--out", type=Path, help="trajectory CSV path (default: stdout)")
    r.add_argument("--sample-every", type=int, default=1, metavar="N")
    r.add_argument("--summary", type=Path, help="write the JSON summary here")
    r.add_argument("--lenient", action="store_true", help="drop refused builtin calls silently")

    c = sub.add_parser("classify", help="classify an environment profile")
    c.add_argument("file", help="profile JSON file or bundled profile name")
    c.add_argument("--json", action="store_true", help="print the report as JSON")

    d = sub.add_parser("demo", help="run a bundled demo")
    d.add_argument("name", help=", ".join(DEMOS))
    d.add_argument("--law", choices=("newtonian", "impetus", "aristotelian"))
    d.add_argument("--out", type=Path, default=Path("."), help="output directory")
    d.add_argument("--sample-every", type=int, default=None, metavar="N")
    return p


def _err(message: str) -> None:
    print(f"hyperworld: {message}", file=sys.stderr)


def _simulate(scenario, args, sample_every, strict=True):
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    if sample_every < 1:
        _err("--sample-every must be >= 1")
        return None, None, EXIT_USAGE
    traj, summary = run_scenario(scenario, sample_every, strict=strict)
    code = EXIT_FAULT if summary["faults"] else EXIT_OK
    for fault in summary["faults"]:
        _err(f"runtime fault: {fault}")
    return traj, summary, code


def cmd_run(args) -> int:
    scenario = load(args.file)
    traj, summary, code = _simulate(scenario, args, args.sample_every, strict=not args.lenient)
    if traj is None:
        return code
    if args.out is None:
        sys.stdout.write(traj.to_csv())
    else:
        traj.write_csv(args.out)
    if args.summary is not None:
        args.summary.write_text(summary_json(summary))
    else:
        _print_summary(summary, sys.stderr if args.out is None else sys.stdout)
    return code


def _print_summary(summary: dict, stream) -> None:
    print(
        f"{summary['scenario']}: {summary['steps']} steps, t={summary['sim_time']:.4f} s, "
        f"{summary['collisions']} collisions, mean dilation {summary['mean_dilation']:.4f}, "
        f"momentum drift {summary['momentum_drift']:.3g}",
        file=stream,
    )


def cmd_classify(args) -> int:
    try:
        profile = load_profile(args.file)
    except (IncompleteProfile, FileNotFoundError):
        raise
    except (HyperworldError, ValueError) as exc:
        raise ScenarioError(f"{args.file}: {exc}") from None
    verdict = classify(profile)
    print(verdict.to_json() if args.json else verdict.to_text())
    return EXIT_OK


def cmd_demo(args) -> int:
    scenario = load_demo(args.name)
    if args.law:
        scenario = scenario.with_law(args.law)
    every = args.sample_every or (100 if args.name == "brownian" else 1)
    traj, summary, code = _simulate(scenario, args, every)
    if traj is None:
        return code
    args.out.mkdir(parents=True, exist_ok=True)
    stem = args.name if not args.law else f"{args.name}_{args.law}"
    traj.write_csv(args.out / f"{stem}.csv")
    (args.out / f"{stem}_summary.json").write_text(summary_json(summary))
    _print_summary(summary, sys.stdout)
    print(f"wrote {args.out / (stem + '.csv')}")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_USAGE
    handler = {"run": cmd_run, "classify": cmd_classify, "demo": cmd_demo}[args.command]
    try:
        return handler(args)
    except UnknownDemo as exc:
        _err(f"{exc}; choose from {', '.join(DEMOS)}")
        return EXIT_USAGE
    except IncompleteProfile as exc:
        _err("incomplete profile")
        for name in exc.missing:
            _err(f"  missing field: {name}")
        for name in exc.extra:
            _err(f"  unknown field: {name}")
        return EXIT_SCENARIO
    except ScriptError as exc:
        _err(exc.format())
        return EXIT_SCENARIO
    except (ScenarioError, FileNotFoundError, json.JSONDecodeError) as exc:
        _err(str(exc))
        return EXIT_SCENARIO
    except HyperworldError as exc:
        _err(f"runtime fault: {exc}")
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
