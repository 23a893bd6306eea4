"""Command-line front end.

Exit codes: 0 on success, 1 when a verification or replay fails, 2 on bad
input (unparseable files, violated preconditions).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import engine, pipeline
from .algebra import (
    check_ore_condition,
    group_from_permutation_generators,
    is_cancellative,
    monoid_from_table,
    parse_generators,
    submonoid_closure,
)
from .construction import build_for_group, build_modified_cayley, build_top_layer
from .errors import BimorphError, Mismatch, NotAGroup
from .gadgets import GadgetSpec, build_gadget, default_gadget_family
from .graph import Graph, deserialize, dumps_canonical, from_json_obj, serialize, to_dot, to_json_obj
from .ladder import DEFAULT_MARGIN, build_ladder_window, ladder_report, window_dot

log = logging.getLogger("bimorph")


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def load_graph_file(path: str) -> Graph:
    """Plain graph JSON, DOT, or a ``cayley``/``toplayer`` output file."""
    text = Path(path).read_text()
    if text.lstrip()[:1] == "{":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            return deserialize(text, "json")  # re-raises as ParseError with position
        if "graph" in obj:
            return from_json_obj(obj["graph"])
    return deserialize(text)


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    if os.environ.get(engine.WORKERS_ENV):
        return engine.default_workers()
    return os.cpu_count() or 1


# -- subcommands -------------------------------------------------------------------


def cmd_gadget(args) -> int:
    family = default_gadget_family(args.count, args.min_size)
    specs = [g.spec.to_json() for g in family]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "specs.json").write_text(dumps_canonical(specs) + "\n")
        for i, gad in enumerate(family):
            (out / f"gadget_{i}.json").write_text(serialize(gad.graph))
            (out / f"gadget_{i}.dot").write_text(to_dot(gad.graph, name=f"R{i}"))
    summary = {"count": len(family), "sizes": [g.size for g in family], "specs": specs}
    _emit(summary, None)
    return 0


def cmd_algebra(args) -> int:
    if args.action == "validate":
        table = _read_json(args.table)
        if isinstance(table, dict):
            table = table.get("table", table.get("group"))
        m = monoid_from_table(table)
        report = {
            "order": m.order,
            "identity": m.identity,
            "associative": True,
            "cancellative": is_cancellative(m),
            "ore": check_ore_condition(m),
        }
        try:
            pipeline.load_group({"table": table})
            report["group"] = True
        except NotAGroup:
            report["group"] = False
        _emit(report, args.out)
        return 0 if report["group"] or not args.group else 1
    # closure
    if args.generators:
        g = group_from_permutation_generators(parse_generators(args.generators))
        obj = {"table": g.to_json(), "labels": [list(p) for p in g.labels]}
        if args.seed is None:
            _emit(obj, args.out)
            return 0
    elif args.table:
        g = pipeline.load_group(args.table)
    else:
        raise SystemExit("algebra closure needs --generators or --table")
    b = submonoid_closure(g, pipeline.parse_seed(args.seed or ""))
    _emit({"order": g.order, "submonoid": list(b.elements)}, args.out)
    return 0


def _min_size(text: str) -> int | None:
    return None if text == "auto" else int(text)


def cmd_cayley(args) -> int:
    grp = pipeline.load_group(args.group)
    base = build_for_group(grp, _min_size(args.min_gadget_size), check_rigid=not args.no_check_rigid)
    specs = [base.gadgets[a].spec.to_json() for a in base.generators]
    obj = {"group": grp.to_json(), "gadget_specs": specs, "graph": to_json_obj(base.graph),
           "vertices": base.graph.n, "edges": base.graph.num_edges}
    _emit(obj, args.out)
    if args.dot:
        Path(args.dot).write_text(to_dot(base.graph, name="Gamma"))
    return 0


def _rebuild_base(obj: dict):
    grp = pipeline.load_group({"table": obj["group"]})
    family = [build_gadget(GadgetSpec.from_json(s)) for s in obj["gadget_specs"]]
    base = build_modified_cayley(grp, family)
    if "graph" in obj and from_json_obj(obj["graph"]) != base.graph:
        raise BimorphError("stored graph does not match the rebuilt modified Cayley graph")
    return base


def cmd_toplayer(args) -> int:
    src = _read_json(args.gamma)
    base = _rebuild_base(src)
    b = submonoid_closure(base.group, pipeline.parse_seed(args.submonoid))
    top = build_top_layer(base, b)
    obj = {"group": src["group"], "gadget_specs": src["gadget_specs"], "submonoid": list(b.elements),
           "graph": to_json_obj(top.graph), "vertices": top.graph.n, "edges": top.graph.num_edges}
    _emit(obj, args.out)
    if args.dot:
        Path(args.dot).write_text(to_dot(top.graph, name="GammaStar"))
    return 0


def cmd_bi(args) -> int:
    g = load_graph_file(args.graph)
    w = _workers(args)
    kw = {"budget": args.budget_vertices, "workers": w}
    if args.mode == "aut":
        maps = engine.enumerate_automorphisms(g, **kw)
    elif args.mode == "mono":
        maps = engine.enumerate_monomorphisms(g, g, **kw)
    else:
        maps = engine.enumerate_bimorphisms(g, **kw)
    mon = engine.monoid_closure(maps, budget=args.budget_closure, n=g.n)
    flags = {"closed": len(mon) == len(maps)}
    if args.mode == "bi":
        flags["bi_equals_aut"] = maps == engine.enumerate_automorphisms(g, **kw)
    if args.oracle:
        if g.n > 8:
            log.warning("oracle skipped: %d vertices is above the brute-force limit of 8", g.n)
        else:
            truth = engine.brute_force_maps(g, preserve_non_edges=args.mode == "aut")
            flags["oracle_match"] = maps == truth
    cert = {
        "mode": args.mode,
        "vertices": g.n,
        "edges": g.num_edges,
        "count": len(maps),
        "maps": [list(m.images) for m in maps],
        "table": [list(r) for r in mon.table],
        "identity": mon.identity,
        "flags": flags,
        "passed": all(flags.values()),
    }
    _emit(cert, args.out)
    return 0 if cert["passed"] else 1


def cmd_ladder(args) -> int:
    report = ladder_report(args.radius, args.target, args.classify)
    _emit(report, args.out)
    if args.dot:
        Path(args.dot).write_text(window_dot(build_ladder_window(args.target)))
    return 0


def _options(args) -> pipeline.PipelineOptions:
    return pipeline.PipelineOptions(
        min_gadget_size=_min_size(args.min_gadget_size),
        budget_vertices=args.budget_vertices,
        budget_closure=args.budget_closure,
        oracle=args.oracle,
        workers=_workers(args),
    )


def _replay(path: str, workers: int) -> int:
    try:
        pipeline.replay(path, workers=workers)
    except Mismatch as exc:
        print(f"replay mismatch in field {exc.field!r}", file=sys.stderr)
        return 1
    print("replay ok")
    return 0


def cmd_verify(args) -> int:
    if args.replay:
        return _replay(args.replay, _workers(args))
    if not args.group or args.submonoid is None:
        raise SystemExit("verify needs --group and --submonoid (or --replay CERT)")
    cert = pipeline.run_pipeline(args.group, args.submonoid, _options(args))
    _write_text(cert.dumps(), args.out)
    status = "PASS" if cert.passed else "FAIL"
    detail = f" ({cert.error})" if cert.error else ""
    print(f"{status}: |Bi(Gamma*)| = {len(cert.bimorphisms)}{detail}", file=sys.stderr)
    return 0 if cert.passed else 1


def cmd_replay(args) -> int:
    return _replay(args.certificate, _workers(args))


def cmd_export(args) -> int:
    g = load_graph_file(args.graph)
    _write_text(serialize(g, args.format), args.out)
    return 0


# -- parser ------------------------------------------------------------------------


def _budget_flags(p: argparse.ArgumentParser, vertices: int) -> None:
    p.add_argument("--budget-vertices", type=int, default=vertices,
                   help="refuse graphs with more vertices (default %(default)s)")
    p.add_argument("--budget-closure", type=int, default=engine.CLOSURE_BUDGET,
                   help="largest monoid closure to build (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bimorph", description=__doc__.splitlines()[0])
    parser.add_argument("--workers", type=int, default=None,
                        help=f"parallel search workers (default ${engine.WORKERS_ENV} or CPU count)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gadget", help="generate a rigid tree gadget family")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--min-size", type=int, required=True)
    p.add_argument("--out", help="directory for specs.json and per-gadget JSON/DOT")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("algebra", help="validate tables or close generators")
    p.add_argument("action", choices=["validate", "closure"])
    p.add_argument("--table", help="JSON table file")
    p.add_argument("--group", action="store_true", help="validate: fail unless the table is a group")
    p.add_argument("--generators", nargs="+", help="closure: permutations, cycle or one-line notation")
    p.add_argument("--seed", help="closure: comma-separated element indices")
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("cayley", help="build the modified Cayley graph")
    p.add_argument("--group", required=True)
    p.add_argument("--min-gadget-size", default="auto")
    p.add_argument("--no-check-rigid", action="store_true")
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("toplayer", help="add the bullet layer for a submonoid")
    p.add_argument("--gamma", required=True)
    p.add_argument("--submonoid", required=True)
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_toplayer)

    p = sub.add_parser("bi", help="enumerate bimorphisms, automorphisms or self-monomorphisms")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=["bi", "aut", "mono"], default="bi")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute force (n <= 8)")
    p.add_argument("--out")
    _budget_flags(p, engine.VERTEX_BUDGET)
    p.set_defaults(func=cmd_bi)

    p = sub.add_parser("ladder", help="classify ladder window maps")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--classify", type=int, default=DEFAULT_MARGIN, metavar="MARGIN")
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("verify", help="full pipeline: certificate that Bi(Gamma*) is B")
    p.add_argument("--group")
    p.add_argument("--submonoid")
    p.add_argument("--min-gadget-size", default="auto")
    p.add_argument("--oracle", action="store_true", help="brute-force engine self-check first")
    p.add_argument("--replay", metavar="CERT", help="replay a certificate instead")
    p.add_argument("--out")
    _budget_flags(p, pipeline.PipelineOptions.budget_vertices)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-derive a certificate and compare")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("export", help="convert a graph file to JSON or DOT")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["json", "dot"], default="dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (BimorphError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
