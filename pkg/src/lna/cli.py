"""``lna`` command-line front end.

Errors go to stderr as a single JSON object
``{"error": <kind>, "message": ..., "file": ..., "line": ...}`` with exit
status 1; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .cycles import minimal_cycle_basis
from .graph import GraphError, collapse_trees
from .hierarchy import AbridgmentError, abridge, level_report, topological_distance
from .io import FORMATS, EdgeListError, export_level, parse_edgelist
from .simulator import PROTOCOLS, ScenarioError, SimScenario, simulate


class CliError(Exception):
    def __init__(self, kind: str, message: str, file: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.kind, self.file, self.line = kind, file, line

    def payload(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        if self.file is not None:
            out["file"] = self.file
        if self.line is not None:
            out["line"] = self.line
        return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except FileNotFoundError:
        raise CliError("file-not-found", f"no such file: {path}", path) from None
    except OSError as exc:
        raise CliError("io-error", str(exc), path) from None


def _load_graph(path: str):
    text = _read(path)
    try:
        return parse_edgelist(text, source=path)
    except EdgeListError as exc:
        raise CliError("parse-error", str(exc), path, exc.line) from None
    except GraphError as exc:
        raise CliError("invalid-graph", str(exc), path) from None


def _hierarchy(g, path):
    if g.n == 0:
        raise CliError("invalid-graph", "graph has no vertices", path)
    try:
        return abridge(g)
    except AbridgmentError as exc:
        raise CliError("not-converging", str(exc), path) from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(data, out: Optional[str]):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        try:
            Path(out).write_bytes(data)
        except OSError as exc:
            raise CliError("io-error", str(exc), out) from None


def cmd_analyze(args):
    g = _load_graph(args.edgelist)
    h = _hierarchy(g, args.edgelist)
    report = {
        "L": h.L,
        "D": str(h.D),
        "D_float": float(h.D),
        "n": h.n,
        "m": g.m,
        "levels": level_report(h),
    }
    _emit(_dump(report), args.output)


def cmd_basis(args):
    g = _load_graph(args.edgelist)
    target = collapse_trees(g)[0] if args.core else g
    _emit(_dump(minimal_cycle_basis(target).to_json()), args.output)


def cmd_export(args):
    g = _load_graph(args.edgelist)
    h = _hierarchy(g, args.edgelist)
    if not 0 <= args.level <= h.L:
        raise CliError("unknown-level", f"no level {args.level}; hierarchy has levels 0..{h.L}")
    _emit(export_level(h, args.level, args.format), args.output)


def cmd_simulate(args):
    path = Path(args.scenario)
    text = _read(args.scenario)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("parse-error", f"invalid JSON: {exc.msg}", args.scenario, exc.lineno) from None
    if not isinstance(data, dict):
        raise CliError("invalid-scenario", "scenario must be a JSON object", args.scenario)
    if args.protocol:
        data["protocol"] = args.protocol
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        scenario = SimScenario.from_json(data, path.parent)
    except FileNotFoundError as exc:
        raise CliError("file-not-found", f"no such file: {exc.filename}", exc.filename) from None
    except EdgeListError as exc:
        raise CliError("parse-error", str(exc), exc.source, exc.line) from None
    except (ScenarioError, GraphError) as exc:
        raise CliError("invalid-scenario", str(exc), args.scenario) from None
    try:
        report = simulate(scenario)
    except AbridgmentError as exc:
        raise CliError("not-converging", str(exc), args.scenario) from None
    _emit(report.dumps(), args.output)


def cmd_distance(args):
    g = _load_graph(args.edgelist)
    for v in (args.a, args.b):
        if v not in g:
            raise CliError("unknown-vertex", f"vertex {v} not in graph", args.edgelist)
    h = _hierarchy(g, args.edgelist)
    d = topological_distance(h, args.a, args.b)
    _emit(f"{'cut-separated' if d is None else d}\n", args.output)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lna",
        description="Logical network abridgment: path-diversity hierarchy, metrics and routing simulation.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    def out(sp):
        sp.add_argument("-o", "--output", help="output path (default: stdout)")

    sp = add("analyze", cmd_analyze, "L, D and per-level statistics as JSON")
    sp.add_argument("edgelist")
    out(sp)

    sp = add("basis", cmd_basis, "minimal cycle basis as JSON")
    sp.add_argument("edgelist")
    sp.add_argument("--core", action="store_true", help="collapse trees first")
    out(sp)

    sp = add("export", cmd_export, "one hierarchy level as DOT, GraphML or JSON")
    sp.add_argument("edgelist")
    sp.add_argument("--level", type=int, default=0)
    sp.add_argument("--format", choices=FORMATS, default="json")
    out(sp)

    sp = add("simulate", cmd_simulate, "run a routing scenario and write a JSON report")
    sp.add_argument("scenario")
    sp.add_argument("--protocol", choices=PROTOCOLS, help="override the scenario's protocol")
    sp.add_argument("--seed", type=int, help="override the scenario's seed")
    out(sp)

    sp = add("distance", cmd_distance, "topological distance between two physical vertices")
    sp.add_argument("edgelist")
    sp.add_argument("a", type=int)
    sp.add_argument("b", type=int)
    out(sp)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        sys.stderr.write(json.dumps(exc.payload(), sort_keys=True) + "\n")
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
