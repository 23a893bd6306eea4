"""Group table + submonoid seed -> verified certificate that Bi(Γ*) ≅ B."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

from . import engine
from .algebra import FiniteGroup, group_from_permutation_generators, group_from_table, \
    parse_generators, submonoid_closure
from .construction import build_modified_cayley, build_top_layer, degree_profile, \
    expected_top_layer_counts
from .errors import BimorphError, Mismatch
from .gadgets import default_gadget_family
from .graph import dumps_canonical

VOLATILE_FIELDS = ("wall_clock_seconds",)


@dataclass
class PipelineOptions:
    min_gadget_size: int | None = None
    budget_vertices: int = 1024
    budget_closure: int = engine.CLOSURE_BUDGET
    budget_monoid: int = engine.MONOID_BUDGET
    oracle: bool = False
    workers: int | None = None

    def budgets(self) -> dict:
        return {
            "min_gadget_size": self.min_gadget_size,
            "budget_vertices": self.budget_vertices,
            "budget_closure": self.budget_closure,
            "budget_monoid": self.budget_monoid,
            "oracle": self.oracle,
        }

    @classmethod
    def from_budgets(cls, d: dict, workers: int | None = None) -> PipelineOptions:
        known = {k: d[k] for k in cls().budgets() if k in d}
        return cls(**known, workers=workers)


def digest(obj) -> str:
    return hashlib.sha256(dumps_canonical(obj).encode()).hexdigest()


def load_group(source) -> FiniteGroup:
    """Group from a FiniteGroup, a 2-D table, a JSON file, or a dict with
    ``table`` or ``generators`` (permutation strings)."""
    if isinstance(source, FiniteGroup):
        return source
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text())
    if isinstance(source, dict):
        if "table" in source:
            return group_from_table(source["table"])
        if "generators" in source:
            return group_from_permutation_generators(parse_generators(source["generators"]))
        if "group" in source:
            return group_from_table(source["group"])
        raise ValueError("group JSON needs 'table' or 'generators'")
    return group_from_table(source)


def parse_seed(spec) -> list[int]:
    if isinstance(spec, str):
        return [int(x) for x in spec.replace(" ", "").split(",") if x]
    return [int(x) for x in spec]


@dataclass
class VerificationCertificate:
    inputs: dict = field(default_factory=dict)
    digests: dict = field(default_factory=dict)
    graph_stats: dict = field(default_factory=dict)
    gamma_bimorphisms: list = field(default_factory=list)
    bimorphisms: list = field(default_factory=list)
    monoid_table: list = field(default_factory=list)
    isomorphism_to_B: list | None = None
    clauses: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    error: str | None = None
    passed: bool = False
    wall_clock_seconds: float = 0.0

    def to_json(self) -> dict:
        out = asdict(self)
        out["canonical_digest"] = digest(self.canonical())
        return out

    def canonical(self) -> dict:
        d = asdict(self)
        for k in VOLATILE_FIELDS:
            d.pop(k, None)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"


def run_pipeline(group_file, submonoid_spec: str | Iterable[int],
                 options: PipelineOptions | None = None) -> VerificationCertificate:
    """Build gadgets, Γ and Γ*, enumerate bimorphisms and check every clause.

    Errors from the constructions are recorded in the certificate (``error``,
    ``passed = False``) instead of propagating.
    """
    opts = options or PipelineOptions()
    t0 = time.perf_counter()
    cert = VerificationCertificate(budgets=opts.budgets())
    try:
        _run(cert, group_file, submonoid_spec, opts)
    except BimorphError as exc:
        cert.error = f"{type(exc).__name__}: {exc}"
        cert.passed = False
    cert.wall_clock_seconds = round(time.perf_counter() - t0, 3)
    return cert


def _run(cert: VerificationCertificate, group_file, submonoid_spec, opts: PipelineOptions) -> None:
    grp = load_group(group_file)
    seed = parse_seed(submonoid_spec)
    cert.inputs = {"group_table": grp.to_json(), "submonoid_seed": seed}
    cert.digests = {"group": digest(cert.inputs["group_table"]), "seed": digest(seed)}

    B = submonoid_closure(grp, seed)
    cert.inputs["submonoid"] = list(B.elements)
    cert.digests["submonoid"] = digest(list(B.elements))
    clauses = cert.clauses

    if opts.oracle:
        summary = engine.oracle_self_check()
        cert.reports["oracle"] = summary
        clauses["engine_oracle"] = summary["passed"]

    n = grp.order
    floor = n if opts.min_gadget_size is None else max(n, opts.min_gadget_size)
    # group-size precondition first so the refusal names the real problem
    if n <= 3:
        from .errors import GroupTooSmall
        raise GroupTooSmall(f"group order must exceed 3, got {n}")
    if len(B) < 2:
        from .errors import SubmonoidTooSmall
        raise SubmonoidTooSmall(f"submonoid {list(B.elements)} has fewer than 2 elements")

    family = default_gadget_family(n - 1, floor)
    specs = [g.spec.to_json() for g in family]
    cert.inputs["gadget_specs"] = specs
    cert.digests["gadget_specs"] = digest(specs)

    base = build_modified_cayley(grp, family)
    top = build_top_layer(base, B)
    cert.graph_stats = {
        "gamma": {"vertices": base.graph.n, "edges": base.graph.num_edges,
                  "expected": list(base.expected_counts())},
        "gamma_star": {"vertices": top.graph.n, "edges": top.graph.num_edges,
                       "expected": list(expected_top_layer_counts(top))},
        "gadget_sizes": [g.size for g in family],
    }
    clauses["counts_gamma"] = (base.graph.n, base.graph.num_edges) == base.expected_counts()
    clauses["counts_gamma_star"] = (top.graph.n, top.graph.num_edges) == expected_top_layer_counts(top)
    prof = degree_profile(top)
    cert.reports["degree_profile"] = prof
    clauses["degree_profile"] = all(prof["checks"].values())

    kw = {"budget": opts.budget_vertices, "workers": opts.workers}

    # bottom layer: Bi(Γ) = Aut(Γ) ≅ G
    bi_g = engine.enumerate_bimorphisms(base.graph, **kw)
    aut_g = engine.enumerate_automorphisms(base.graph, **kw)
    cert.gamma_bimorphisms = [list(m.images) for m in bi_g]
    clauses["gamma_bi_equals_aut"] = bi_g == aut_g
    clauses["gamma_order"] = len(bi_g) == n
    mon_g = engine.monoid_closure(bi_g, budget=opts.budget_closure, n=base.graph.n)
    clauses["gamma_closed"] = len(mon_g) == len(bi_g)
    clauses["gamma_isomorphic_to_G"] = engine.is_isomorphic_monoid(
        mon_g, grp, budget=opts.budget_monoid) is not None
    rep_g = engine.check_regular_left_action(mon_g, base, grp)
    cert.reports["gamma_action"] = rep_g.to_json()
    clauses["gamma_left_action"] = rep_g.passed
    blk_g = engine.check_block_preservation(mon_g, base)
    clauses["gamma_blocks"] = not blk_g

    # top layer: Bi(Γ*) ≅ B
    bi_t = engine.enumerate_bimorphisms(top.graph, **kw)
    aut_t = engine.enumerate_automorphisms(top.graph, **kw)
    cert.bimorphisms = [list(m.images) for m in bi_t]
    clauses["gamma_star_bi_equals_aut"] = bi_t == aut_t
    clauses["gamma_star_order"] = len(bi_t) == len(B)
    mon_t = engine.monoid_closure(bi_t, budget=opts.budget_closure, n=top.graph.n)
    clauses["gamma_star_closed"] = len(mon_t) == len(bi_t)
    cert.monoid_table = [list(r) for r in mon_t.table]
    iso = engine.is_isomorphic_monoid(mon_t, B.as_monoid(), budget=opts.budget_monoid)
    # witness as parent-group elements
    cert.isomorphism_to_B = None if iso is None else [B.elements[i] for i in iso]
    clauses["gamma_star_isomorphic_to_B"] = iso is not None
    rep_t = engine.check_regular_left_action(mon_t, top, B)
    cert.reports["gamma_star_action"] = rep_t.to_json()
    for k, v in rep_t.clauses.items():
        clauses[f"gamma_star_{k}"] = v
    blk_t = engine.check_block_preservation(mon_t, top)
    clauses["gamma_star_blocks"] = not blk_t
    cert.reports["block_failures"] = {"gamma": blk_g, "gamma_star": blk_t}

    cert.passed = all(clauses.values())


def replay(cert_file, workers: int | None = None) -> bool:
    """Re-derive a certificate from its recorded inputs and budgets.

    Raises :class:`Mismatch` naming the first canonical field that differs.
    """
    if isinstance(cert_file, (str, Path)):
        data = json.loads(Path(cert_file).read_text())
    else:
        data = dict(cert_file)
    inputs = data.get("inputs") or {}
    if "group_table" not in inputs:
        raise Mismatch("inputs")
    opts = PipelineOptions.from_budgets(data.get("budgets", {}), workers=workers)
    fresh = run_pipeline({"table": inputs["group_table"]}, inputs.get("submonoid_seed", []), opts)
    want = fresh.canonical()
    for key in sorted(want):
        if dumps_canonical(data.get(key)) != dumps_canonical(want[key]):
            raise Mismatch(key, data.get(key), want[key])
    if "canonical_digest" in data and data["canonical_digest"] != digest(want):
        raise Mismatch("canonical_digest", data["canonical_digest"], digest(want))
    return True
