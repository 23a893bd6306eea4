"""Modified Cayley graphs and their top-layer extensions.

Vertex numbering is fixed: group vertices ``0..|G|-1`` first, then for each
``g`` and each generator ``a`` (ascending) the connector ``(g, a)`` followed by
the gadget block ``(g, R_a)`` in gadget vertex order.  Top-layer bullets come
last, one per group element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .algebra import FiniteGroup, Submonoid
from .errors import (
    ConstructionError,
    GadgetCountMismatch,
    GadgetNotRigid,
    GadgetSizeTooSmall,
    GroupTooSmall,
    SubmonoidNotInGroup,
    SubmonoidTooSmall,
)
from .gadgets import Gadget, default_gadget_family, verify_rigid
from .graph import Graph, VertexRole, is_tree


@dataclass(frozen=True)
class ModifiedCayleyGraph:
    graph: Graph
    group: FiniteGroup
    generators: tuple[int, ...]
    gadgets: dict[int, Gadget] = field(repr=False)
    group_vertex: tuple[int, ...] = field(repr=False)
    connector: dict[tuple[int, int], int] = field(repr=False)
    blocks: dict[tuple[int, int], tuple[int, ...]] = field(repr=False)

    def p_vertex(self, g: int, a: int) -> int:
        return self.blocks[(g, a)][self.gadgets[a].p]

    def q_vertex(self, g: int, a: int) -> int:
        return self.blocks[(g, a)][self.gadgets[a].q]

    def expected_counts(self) -> tuple[int, int]:
        n = self.group.order
        sizes = [self.gadgets[a].size for a in self.generators]
        nv = n + n * sum(s + 1 for s in sizes)
        ne = 3 * n * len(sizes) + n * sum(s - 1 for s in sizes)
        return nv, ne

    def six_cycle(self, g: int) -> list[int]:
        """g, (g,g^-1), (g,p_{g^-1}), e, (e,g), (e,p_g): a closed walk of length 6."""
        grp = self.group
        e = grp.identity
        gi = grp.inverse[g]
        return [
            self.group_vertex[g],
            self.connector[(g, gi)],
            self.p_vertex(g, gi),
            self.group_vertex[e],
            self.connector[(e, g)],
            self.p_vertex(e, g),
        ]


@dataclass(frozen=True)
class TopLayerGraph:
    base: ModifiedCayleyGraph
    submonoid: Submonoid
    graph: Graph
    bullet_vertex: tuple[int, ...] = field(repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    @property
    def group_vertex(self) -> tuple[int, ...]:
        return self.base.group_vertex

    @property
    def blocks(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return self.base.blocks

    @property
    def gadgets(self) -> dict[int, Gadget]:
        return self.base.gadgets


def build_modified_cayley(group: FiniteGroup, gadgets: Sequence[Gadget], *,
                          check_rigid: bool = True) -> ModifiedCayleyGraph:
    """Replace every labelled Cayley edge g -> ga (a != e) by g - (g,a) - (g,p_a) - ga
    with the gadget R_a hanging off (g,p_a)."""
    n = group.order
    if n <= 3:
        raise GroupTooSmall(f"group order must exceed 3, got {n}")
    gens = tuple(x for x in range(n) if x != group.identity)
    if len(gadgets) != len(gens):
        raise GadgetCountMismatch(f"need {len(gens)} gadgets, got {len(gadgets)}")
    ordered = sorted(gadgets, key=lambda gd: gd.size)
    sizes = [gd.size for gd in ordered]
    if len(set(sizes)) != len(sizes):
        raise ConstructionError(f"gadget sizes must be pairwise distinct, got {sizes}")
    for gd in ordered:
        if gd.size <= n:
            raise GadgetSizeTooSmall(f"gadget of size {gd.size} is not larger than |G| = {n}")
        if not is_tree(gd.graph):
            raise ConstructionError("gadgets must be trees")
        if check_rigid and not verify_rigid(gd):
            raise GadgetNotRigid(f"gadget {gd.spec.levels} has non-trivial automorphisms")
    assign = dict(zip(gens, ordered))

    roles: list[VertexRole] = [VertexRole.group(g) for g in range(n)]
    group_vertex = tuple(range(n))
    connector: dict[tuple[int, int], int] = {}
    blocks: dict[tuple[int, int], tuple[int, ...]] = {}
    edges: list[tuple[int, int]] = []
    for g in range(n):
        for a in gens:
            gd = assign[a]
            c = len(roles)
            roles.append(VertexRole.connector(g, a))
            connector[(g, a)] = c
            base = len(roles)
            for r in gd.graph.roles:
                roles.append(VertexRole.gadget(g, a, r.path))
            block = tuple(range(base, base + gd.size))
            blocks[(g, a)] = block
            p = block[gd.p]
            edges += [(g, c), (c, p), (p, group.table[g][a])]
            edges += [(block[u], block[v]) for u, v in gd.graph.edges]
    return ModifiedCayleyGraph(Graph(roles, edges), group, gens, assign, group_vertex,
                               connector, blocks)


def build_for_group(group: FiniteGroup, min_gadget_size: int | None = None,
                    check_rigid: bool = True) -> ModifiedCayleyGraph:
    """Modified Cayley graph using the default gadget family (sizes > max(|G|, min))."""
    floor = group.order if min_gadget_size is None else max(group.order, min_gadget_size)
    family = default_gadget_family(group.order - 1, floor)
    return build_modified_cayley(group, family, check_rigid=check_rigid)


def _same_group(a: FiniteGroup, b: FiniteGroup) -> bool:
    return a.table == b.table and a.identity == b.identity


def build_top_layer(base: ModifiedCayleyGraph, submonoid: Submonoid, *,
                    allow_trivial: bool = False) -> TopLayerGraph:
    """Add a bullet (g, •) above every group vertex and a clique on B × {•}.

    ``allow_trivial`` exists for the negative control with |B| = 1 only.
    """
    if not _same_group(submonoid.parent, base.group):
        raise SubmonoidNotInGroup("submonoid belongs to a different group table")
    if any(not 0 <= x < base.group.order for x in submonoid.elements):
        raise SubmonoidNotInGroup("submonoid element outside the group")
    if len(submonoid) < 2 and not allow_trivial:
        raise SubmonoidTooSmall("need |B| >= 2; with B = {e} the bullets are uniform pendants")
    g0 = base.graph
    n = base.group.order
    roles = list(g0.roles) + [VertexRole.bullet(g) for g in range(n)]
    bullet = tuple(range(g0.n, g0.n + n))
    edges = list(g0.edges)
    edges += [(base.group_vertex[g], bullet[g]) for g in range(n)]
    members = sorted(submonoid.elements)
    edges += [(bullet[x], bullet[y]) for i, x in enumerate(members) for y in members[i + 1:]]
    return TopLayerGraph(base, submonoid, Graph(roles, edges), bullet)


def expected_top_layer_counts(top: TopLayerGraph) -> tuple[int, int]:
    n = top.group.order
    return top.base.graph.n + n, top.base.graph.num_edges + n + comb(len(top.submonoid), 2)


def degree_profile(x: ModifiedCayleyGraph | TopLayerGraph) -> dict:
    """Degree facts by role class, plus pass/fail for the expected values."""
    g = x.graph
    deg = g.degrees
    base = x.base if isinstance(x, TopLayerGraph) else x
    gens = base.generators
    group_deg = [deg[v] for v in base.group_vertex]
    conn_deg = sorted({deg[v] for v in base.connector.values()})
    p_deg = sorted({deg[base.p_vertex(h, a)] for h in range(base.group.order) for a in gens})
    prof = {
        "group_min_degree": min(group_deg),
        "group_degrees": sorted(set(group_deg)),
        "connector_degrees": conn_deg,
        "p_degrees": p_deg,
    }
    checks = {
        "group_min_degree_ge_3": prof["group_min_degree"] >= max(3, len(gens)),
        "connectors_degree_2": conn_deg == [2],
        "p_degree_3": p_deg == [3],
    }
    if isinstance(x, TopLayerGraph):
        inside = set(x.submonoid.elements)
        b_in = sorted({deg[x.bullet_vertex[h]] for h in inside})
        b_out = sorted({deg[x.bullet_vertex[h]] for h in range(x.group.order) if h not in inside})
        prof["bullet_in_B_degrees"] = b_in
        prof["bullet_outside_B_degrees"] = b_out
        expect_in = len(inside)  # one pendant edge plus |B| - 1 clique edges
        checks["bullets_in_B_degree"] = b_in == [expect_in]
        checks["bullets_outside_B_degree_1"] = b_out in ([], [1])
    prof["checks"] = checks
    return prof
