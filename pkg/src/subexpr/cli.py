"""Command-line interface: build subexpression graphs, verify connectivity
and cycle-space spanning, emit and replay decomposition certificates, and
reproduce the cycle-length table.

Input is a UTF-8 JSON spec file; infinite Coxeter-matrix entries are the
string "inf".  All outputs are deterministic: fixed orderings everywhere,
sorted JSON keys, and stable float formatting.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from . import coxeter, cyclespace as cs, sweeps
from .coxeter import CoxeterSystem, Element
from .expressions import Expression, build_all_graphs, build_graph

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class SpecError(ValueError):
    pass


@dataclass
class JobSpec:
    """A parsed problem description."""

    matrix: list
    generators: List[str]
    expression: Tuple[int, ...]
    target: Union[str, Tuple[int, ...]]        # "all" or a word
    max_len: Optional[int] = None
    eps: Optional[float] = None

    def system(self) -> CoxeterSystem:
        return CoxeterSystem(self.matrix)


def load_spec(path: str, args) -> JobSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec {path}: {exc}")
    if "coxeter_matrix" in data:
        matrix = data["coxeter_matrix"]
    elif "type" in data:
        matrix = coxeter.coxeter_matrix_for(data["type"], data.get("rank"))
    else:
        raise SpecError("spec needs a coxeter_matrix or a type")
    try:
        matrix = [[math.inf if x == "inf" else int(x) for x in row]
                  for row in matrix]
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad matrix entry: {exc}")
    rank = len(matrix)
    gens = data.get("generators") or [f"s{i+1}" for i in range(rank)]
    if len(gens) != rank:
        raise SpecError("generator label count does not match the rank")
    index = {name: i for i, name in enumerate(gens)}

    def word(names):
        try:
            return tuple(index[n] for n in names)
        except KeyError as exc:
            raise SpecError(f"unknown generator {exc}")

    expression = word(data.get("expression", []))
    target = data.get("target", "all")
    if target != "all":
        target = word(target)
    spec = JobSpec(matrix, list(gens), expression, target,
                   data.get("max_len"), data.get("eps"))
    if args.max_len is not None:
        spec.max_len = args.max_len
    if args.eps is not None:
        spec.eps = args.eps
    if spec.eps is not None:
        coxeter.EPS = float(spec.eps)
    if spec.max_len is not None and len(spec.expression) > spec.max_len:
        raise SpecError(f"expression longer than --max-len {spec.max_len}")
    return spec


def _graphs_of(spec: JobSpec):
    system = spec.system()
    expr = Expression(system, spec.expression)
    if spec.target == "all":
        return expr, build_all_graphs(expr)
    return expr, [build_graph(expr, system.element_from_word(spec.target))]


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")


def _stats(g) -> dict:
    gens = cs.enumerate_generators(g)
    return {"n_vertices": g.n_vertices, "n_edges": g.n_edges,
            "components": g.n_components(), "dim": cs.cycle_space_dim(g),
            "lengths": sorted(c.length for c in gens)}


def cmd_graph(args) -> int:
    spec = load_spec(args.spec, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _, graphs = _graphs_of(spec)
    stats = []
    for idx, g in enumerate(graphs):
        name = f"graph_{idx:03d}.dot"
        (out / name).write_text(g.to_dot(), encoding="utf-8")
        entry = {"index": idx, "dot": name}
        entry.update(_stats(g))
        stats.append(entry)
    _write_json(out / "stats.json", {"expression": list(spec.expression),
                                     "graphs": stats})
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = load_spec(args.spec, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _, graphs = _graphs_of(spec)
    report = {"command": f"verify {args.what}", "classes": []}
    ok = True
    for idx, g in enumerate(graphs):
        entry = {"index": idx, "n_vertices": g.n_vertices,
                 "n_edges": g.n_edges}
        if args.what == "connectivity":
            entry["connected"] = g.n_vertices <= 1 or g.n_components() == 1
            entry["ok"] = entry["connected"]
        elif args.what == "span":
            rep = cs.verify_span(g)
            entry.update(rep)
        else:                                           # decompose
            certs = []
            entry["ok"] = True
            for fc in cs.fundamental_cycles(g):
                pieces = cs.decompose(g, fc)
                cert = cs.certificate(g, pieces)
                if not cs.check_certificate(g, cert, fc):
                    entry["ok"] = False
                certs.append({"target_edges": format(fc, "b"),
                              "cycles": cert})
            _write_json(out / f"certificate_{idx:03d}.json", certs)
        ok = ok and entry["ok"]
        report["classes"].append(entry)
    report["ok"] = ok
    _write_json(out / "report.json", report)
    if not ok:
        first = next(e for e in report["classes"] if not e["ok"])
        print(json.dumps(first, sort_keys=True), file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_table1(args) -> int:
    try:
        rep = sweeps.table1_report(args.type, args.rank, args.max_len,
                                   jobs=args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(rep, sort_keys=True, indent=2)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "table1.json").write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subexpr",
        description="subexpression graphs of Coxeter groups and their cycle spaces")
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker processes for sweeps")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, needs_spec=True):
        if needs_spec:
            p.add_argument("--spec", required=True, help="JSON problem spec")
        p.add_argument("--max-len", type=int, default=None,
                       help="expression length cap")
        p.add_argument("--eps", type=float, default=None,
                       help="numeric tolerance override")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("graph", help="export Sub(s,w) as DOT plus stats")
    common(p)
    p.set_defaults(fn=cmd_graph)

    p = sub.add_parser("verify", help="run a verification")
    p.add_argument("what", choices=["connectivity", "span", "decompose"])
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("table1", help="reproduce a cycle-length table row")
    p.add_argument("type", help="root system type (A1, An, B2, Bn, Dn, F4, G2)")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_table1)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
