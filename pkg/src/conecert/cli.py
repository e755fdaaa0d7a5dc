"""Command-line front end.

certifier run <scenario.scn> [--out PREFIX] [--seed N] [--threads K]
certifier demo <name>
certifier validate <certificate.json>

Exit codes: 0 the run matched expectations (or the certificate is valid),
1 at least one task failed unexpectedly (or the certificate is invalid),
2 the input could not be parsed or violates scenario invariants.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources

from .errors import ConecertError, ScenarioError
from .report import emit_report, run_scenario, summary_text
from .scenario import parse_scenario
from .serialize import FORMAT_CERT, load_json, validate_certificate


def _fail(msg: str) -> int:
    print(f"certifier: error: {msg}", file=sys.stderr)
    return 2


def _load_doc(path: str):
    try:
        return load_json(path)
    except OSError as e:
        raise _CliExit(_fail(f"cannot read {path}: {e.strerror or e}"))
    except json.JSONDecodeError as e:
        raise _CliExit(_fail(
            f"{path}: parse error at line {e.lineno}, column {e.colno}: "
            f"{e.msg}"))


class _CliExit(Exception):
    def __init__(self, code: int):
        self.code = code


def _cmd_run(args, doc=None, default_prefix: str | None = None) -> int:
    if doc is None:
        doc = _load_doc(args.scenario)
    try:
        scn = parse_scenario(doc)
    except (ScenarioError, ConecertError) as e:
        return _fail(str(e))
    if args.seed is not None:
        scn = replace(scn, seed=args.seed)
    prefix = args.out or default_prefix or scn.output
    try:
        report = run_scenario(scn, threads=args.threads)
    except ConecertError as e:
        return _fail(f"scenario execution failed: {e}")
    try:
        paths = emit_report(report, prefix, figures=not args.no_figures)
    except OSError as e:
        return _fail(f"cannot write outputs at prefix {prefix!r}: "
                     f"{e.strerror or e}")
    print(summary_text(report))
    for p in paths:
        print(f"wrote {p}")
    return report.exit_status


def _bundled_names() -> list[str]:
    base = resources.files("conecert") / "scenarios"
    return sorted(p.name[:-4] for p in base.iterdir()
                  if p.name.endswith(".scn"))


def _cmd_demo(args) -> int:
    base = resources.files("conecert") / "scenarios"
    entry = base / f"{args.name}.scn"
    if not entry.is_file():
        return _fail(f"unknown demo {args.name!r}; available: "
                     + ", ".join(_bundled_names()))
    doc = json.loads(entry.read_text(encoding="utf-8"))
    return _cmd_run(args, doc=doc, default_prefix=f"demo_{args.name}")


def _cmd_validate(args) -> int:
    doc = _load_doc(args.certificate)
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_CERT:
        return _fail(f"{args.certificate}: not a certificate file")
    try:
        result = validate_certificate(doc)
    except (ScenarioError, ConecertError, KeyError, TypeError, ValueError) as e:
        return _fail(f"{args.certificate}: malformed certificate: {e!r}")
    for line in result.lines():
        print(line)
    if result.ok:
        print("certificate is valid")
        return 0
    print("certificate is INVALID")
    return 1


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PREFIX", default=None,
                   help="output path prefix (default: scenario's own)")
    p.add_argument("--seed", type=int, default=None,
                   help="override the scenario seed")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for per-point tasks")
    p.add_argument("--no-figures", action="store_true",
                   help="skip the companion PNG figures")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="certifier",
        description="Certify periodicity of monotone maps on cones.")
    sub = p.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario file")
    run_p.add_argument("scenario", help="path to a .scn JSON file")
    _add_run_options(run_p)
    demo_p = sub.add_parser("demo", help="run a bundled scenario")
    demo_p.add_argument("name", help="bundled scenario name")
    _add_run_options(demo_p)
    val_p = sub.add_parser("validate",
                           help="independently re-check a certificate")
    val_p.add_argument("certificate", help="path to a certificate JSON file")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "demo":
            return _cmd_demo(args)
        return _cmd_validate(args)
    except _CliExit as e:
        return e.code


if __name__ == "__main__":
    sys.exit(main())
