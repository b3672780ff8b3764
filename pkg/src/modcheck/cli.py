"""Command-line front-end: check, mod-eval, measure, wall, width.

Reports are deterministic for fixed inputs: stdout carries the result lines
(plain text, or ``key=value`` records with --record), timing goes to stderr.
Exit codes: 0 evaluation completed (the truth value is in the report),
2 usage or parse errors, 3 a search cap was exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .core import (
    Graph,
    LimitExceeded,
    Structure,
    graph_of,
    parse_edge_list,
    parse_structure,
)
from . import grammar, logic, theta as theta_mod, walls as walls_mod, width as width_mod
from .minors import ObstructionSet, named_obstruction_graph
from .theta import (
    NAMED_TARGETS,
    ThetaSentence,
    bridge_depth,
    elimination_distance,
    g_treewidth,
    model_check_theta,
    parametric_measure,
    parse_theta,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAP = 3

ENV_CAP = "MODCHECK_CAP"


@dataclass
class RunReport:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    fields: dict[str, object] = field(default_factory=dict)
    caps: dict[str, int] = field(default_factory=dict)

    def render(self, record: bool) -> str:
        if record:
            lines = [f"command={self.command}"]
            lines += [f"input.{k}={v}" for k, v in sorted(self.inputs.items())]
            lines += [f"cap.{k}={v}" for k, v in sorted(self.caps.items())]
            lines += [f"{k}={_plain(v)}" for k, v in self.fields.items()]
            return "\n".join(lines) + "\n"
        lines = [f"# {self.command}"]
        for k, v in sorted(self.inputs.items()):
            lines.append(f"input {k}: {v}")
        for k, v in self.fields.items():
            lines.append(f"{k}: {_plain(v)}")
        return "\n".join(lines) + "\n"


def _plain(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and math.isinf(v):
        return "unbounded (no feasible deletion set)"
    if isinstance(v, frozenset):
        return " ".join(str(x) for x in sorted(v))
    return str(v)


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


def _read(path: str) -> tuple[Path, str]:
    p = Path(path)
    try:
        return p, p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


class UsageError(Exception):
    pass


def _load_graph(path: str) -> tuple[Path, Graph]:
    p, text = _read(path)
    stripped = text.lstrip()
    try:
        if stripped.startswith("vocab"):
            return p, graph_of(parse_structure(text))
        return p, parse_edge_list(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def _load_structure(path: str) -> tuple[Path, Structure]:
    p, text = _read(path)
    try:
        if text.lstrip().startswith("vocab"):
            return p, parse_structure(text)
        return p, parse_edge_list(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def _load_target(spec: str) -> ThetaSentence:
    if spec in NAMED_TARGETS:
        return NAMED_TARGETS[spec]
    if spec.startswith("excl{") and spec.endswith("}"):
        members = tuple(
            named_obstruction_graph(n.strip())
            for n in spec[len("excl{"):-1].split(",")
            if n.strip()
        )
        return theta_mod.Base(logic.Top(), ObstructionSet(members))
    if os.path.exists(spec):
        _, text = _read(spec)
        try:
            return parse_theta(text.strip())
        except ValueError as exc:
            raise UsageError(f"{spec}: {exc}")
    raise UsageError(
        f"unknown target {spec!r} (named targets: {', '.join(sorted(NAMED_TARGETS))}; "
        "or excl{...}; or a sentence file)"
    )


def _parse_vertex_set(text: str) -> frozenset[int]:
    return frozenset(int(tok) for tok in text.split())


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get(ENV_CAP)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{ENV_CAP} must be an integer, got {env!r}")
    return theta_mod.DEFAULT_MODULATOR_CAP


# ---------------------------------------------------------------------------
# Subcommands


def cmd_check(args) -> RunReport:
    path, structure = _load_structure(args.structure)
    spath, stext = _read(args.sentence)
    report = RunReport("check")
    report.inputs["structure"] = f"{path} sha256:{_digest(path)}"
    report.inputs["sentence"] = f"{spath} sha256:{_digest(spath)}"
    cap = _cap(args)
    report.caps["modulator"] = cap
    text = stext.strip()
    kind = args.kind
    if kind == "auto":
        kind = "theta" if text.startswith(("base", "mod")) else "formula"
    try:
        if kind == "theta":
            sentence = parse_theta(text)
            holds, witness = model_check_theta(structure, sentence, cap=cap)
            report.fields["kind"] = "theta"
            report.fields["holds"] = holds
            if witness is not None and isinstance(witness, dict) and "modulator" in witness:
                report.fields["witness.modulator"] = " ".join(
                    str(v) for v in witness["modulator"]
                )
        else:
            phi = logic.parse_formula(text, structure.vocabulary)
            holds = logic.evaluate(structure, phi)
            report.fields["kind"] = "formula"
            report.fields["holds"] = holds
    except logic.SyntaxIssue as exc:
        raise UsageError(f"{args.sentence}: {exc}")
    return report


def cmd_mod_eval(args) -> RunReport:
    path, g = _load_graph(args.graph)
    report = RunReport("mod-eval")
    report.inputs["graph"] = f"{path} sha256:{_digest(path)}"
    cap = _cap(args)
    report.caps["graph"] = cap
    try:
        w = grammar.parse_mod_string(args.modstring)
    except logic.SyntaxIssue as exc:
        raise UsageError(f"modification string: {exc}")
    holds, script = grammar.eval_mod(
        g, w, cap=cap, enable_contraction=args.enable_contraction
    )
    report.fields["holds"] = holds
    if script is not None:
        report.fields["script"] = _script_text(script)
    return report


def _script_text(script) -> str:
    out = []

    def walk(steps, prefix=""):
        for step in steps:
            if step[0] == "per-component":
                for comp, inner in step[1]:
                    out.append(f"{prefix}component {' '.join(map(str, comp))}:")
                    walk(inner, prefix + "  ")
            elif step[0] in ("both", "first", "second"):
                for branch in step[1:]:
                    walk(branch, prefix)
            else:
                out.append(f"{prefix}{step[0]} {step[1]}")

    walk(script)
    return "; ".join(out) if out else "(nothing to do)"


def cmd_measure(args) -> RunReport:
    path, g = _load_graph(args.graph)
    target = _load_target(args.to)
    report = RunReport("measure")
    report.inputs["graph"] = f"{path} sha256:{_digest(path)}"
    report.inputs["target"] = args.to
    cap = _cap(args)
    report.caps["search"] = cap
    if args.measure == "ed":
        value = elimination_distance(g, target, cap=cap)
    elif args.measure == "bd":
        value = bridge_depth(g, target, cap=cap)
    elif args.measure == "gtw":
        value = g_treewidth(g, target, cap=cap)
    elif args.measure == "pdist":
        value = parametric_measure(g, "size", target, cap=cap)
    else:
        raise UsageError(f"unknown measure {args.measure!r}")
    report.fields["measure"] = args.measure
    report.fields["value"] = value
    return report


def cmd_wall(args) -> RunReport:
    report = RunReport(f"wall {args.wall_command}")
    if args.wall_command == "gen":
        wall = walls_mod.elementary_wall(args.r)
        payload = walls_mod.wall_to_json(wall)
        if args.out:
            Path(args.out).write_text(payload)
            report.fields["written"] = args.out
        else:
            report.fields["wall"] = payload.strip()
        report.fields["vertices"] = len(wall.vertices)
        report.fields["edges"] = len(wall.graph.edges)
        return report

    wpath, wtext = _read(args.wall)
    wall = walls_mod.wall_from_json(wtext)
    report.inputs["wall"] = f"{wpath} sha256:{_digest(wpath)}"
    if args.wall_command == "partition":
        if args.host:
            hpath, host = _load_graph(args.host)
            report.inputs["host"] = f"{hpath} sha256:{_digest(hpath)}"
            apex = _parse_vertex_set(args.apex or "")
            partition = walls_mod.extend_canonical_partition(host, apex, wall)
        else:
            partition = walls_mod.canonical_partition(wall)
        for key in sorted(partition.internal):
            report.fields[f"bag.{key[0]}.{key[1]}"] = partition.internal[key]
        report.fields["bag.external"] = partition.external
        return report
    if args.wall_command == "pseudogrid":
        grid = walls_mod.pseudogrid_from_wall(wall, args.q)
        for i, p in enumerate(grid.horizontal, 1):
            report.fields[f"horizontal.{i}"] = " ".join(map(str, p))
        for i, p in enumerate(grid.vertical, 1):
            report.fields[f"vertical.{i}"] = " ".join(map(str, p))
        return report
    if args.wall_command in ("privileged", "bid"):
        hpath, host = _load_graph(args.host)
        report.inputs["host"] = f"{hpath} sha256:{_digest(hpath)}"
        xpath, xtext = _read(args.removed)
        removed = _parse_vertex_set(xtext)
        report.inputs["removed"] = f"{xpath} sha256:{_digest(xpath)}"
        if args.wall_command == "privileged":
            grid = walls_mod.pseudogrid_from_wall(wall, args.q)
            comps = walls_mod.privileged_components(host, grid, removed)
            report.fields["count"] = len(comps)
            for i, comp in enumerate(comps, 1):
                report.fields[f"component.{i}"] = comp
        else:
            apex = _parse_vertex_set(args.apex or "")
            partition = walls_mod.extend_canonical_partition(host, apex, wall)
            report.fields["bidimensionality"] = walls_mod.bidimensionality(
                removed, partition
            )
        return report
    raise UsageError(f"unknown wall subcommand {args.wall_command!r}")


def cmd_width(args) -> RunReport:
    path, g = _load_graph(args.graph)
    report = RunReport("width")
    report.inputs["graph"] = f"{path} sha256:{_digest(path)}"
    if args.validate:
        tpath, ttext = _read(args.validate)
        td = width_mod.TreeDecomposition.from_text(ttext)
        ok, issues = width_mod.validate_tree_decomposition(g, td)
        report.fields["valid"] = ok
        report.fields["width"] = td.width
        for i, issue in enumerate(issues, 1):
            report.fields[f"violation.{i}"] = issue
        return report
    value, td = width_mod.treewidth_exact(g, limit=args.limit)
    report.fields["treewidth"] = value
    if args.treedepth:
        report.fields["treedepth"] = width_mod.treedepth_exact(g)
    if args.decomposition:
        Path(args.decomposition).write_text(td.to_text())
        report.fields["decomposition"] = args.decomposition
    return report


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modcheck",
        description="Desk-scale workbench for compound modulator/target sentences, "
        "modification strings, widths, and wall combinatorics.",
    )
    parser.add_argument("--record", action="store_true", help="line-delimited key=value output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula or compound sentence on a structure")
    p.add_argument("structure", help="structure file or edge list")
    p.add_argument("sentence", help="file with a formula or a base/mod sentence")
    p.add_argument("--kind", choices=["auto", "formula", "theta"], default="auto")
    p.add_argument("--cap", type=int, default=None, help="modulator search cap")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mod-eval", help="evaluate a modification string on a graph")
    p.add_argument("graph")
    p.add_argument("modstring")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--enable-contraction", action="store_true")
    p.set_defaults(func=cmd_mod_eval)

    p = sub.add_parser("measure", help="modulator measures: ed, bd, gtw, pdist")
    p.add_argument("graph")
    p.add_argument("measure", choices=["ed", "bd", "gtw", "pdist"])
    p.add_argument("--to", required=True, help="named target, excl{...}, or sentence file")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("wall", help="wall generation and reports")
    wall_sub = p.add_subparsers(dest="wall_command", required=True)
    q = wall_sub.add_parser("gen")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_wall)
    for name in ("partition", "pseudogrid", "privileged", "bid"):
        q = wall_sub.add_parser(name)
        q.add_argument("wall", help="wall JSON file")
        if name == "partition":
            q.add_argument("--host")
            q.add_argument("--apex", help="whitespace-separated vertex ids")
        if name == "pseudogrid":
            q.add_argument("--q", type=int, default=None)
        if name in ("privileged", "bid"):
            q.add_argument("--host", required=True)
            q.add_argument("--removed", required=True, help="vertex set file")
            q.add_argument("--q", type=int, default=None)
            q.add_argument("--apex", help="whitespace-separated vertex ids")
        q.set_defaults(func=cmd_wall)

    p = sub.add_parser("width", help="exact treewidth / treedepth and td validation")
    p.add_argument("graph")
    p.add_argument("--treedepth", action="store_true")
    p.add_argument("--decomposition", help="write the witness decomposition here")
    p.add_argument("--validate", help="validate this td file instead of solving")
    p.add_argument("--limit", type=int, default=width_mod.DEFAULT_TREEWIDTH_LIMIT)
    p.set_defaults(func=cmd_width)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    started = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except logic.SyntaxIssue as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"error: {exc} (raise --cap or {ENV_CAP})", file=sys.stderr)
        return EXIT_CAP
    except grammar.ExperimentalFeature as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - started
    sys.stdout.write(report.render(args.record))
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
