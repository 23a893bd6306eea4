"""Finite rigid rooted trees used as edge gadgets.

A tree is grown from an edge ``p - q``.  Level 1 hangs ``m`` children off
``q``; each later level gives every vertex of the previous level its own
branching count.  A count of 0 ends that branch, so finite trees can be
asymmetric (full levels always end in interchangeable sibling leaves).
Within one level the positive counts must be pairwise distinct.

Rigidity of a finite truncation is not automatic, so every gadget handed out
by :func:`default_gadget_family` has been checked by exhaustive search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import engine
from .errors import GenerationFailed, InvalidSpec
from .graph import Graph, VertexRole, find_isomorphism

SPEC_BUDGET = 20000


@dataclass(frozen=True)
class GadgetSpec:
    """Branching counts level by level.

    ``levels[0] == (m,)`` is the number of children of ``q``; ``levels[i]``
    lists one count per vertex created at level ``i``, in creation order.
    """

    levels: tuple[tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def size(self) -> int:
        return 2 + sum(sum(lv) for lv in self.levels)

    def validate(self) -> None:
        lv = self.levels
        if len(lv) < 1 or len(lv[0]) != 1 or lv[0][0] < 1:
            raise InvalidSpec("first level must be a single positive count (children of q)")
        for i in range(1, len(lv)):
            width = sum(lv[i - 1])
            if len(lv[i]) != width:
                raise InvalidSpec(f"level {i + 1} has {len(lv[i])} counts for {width} vertices")
        for i, counts in enumerate(lv):
            if any(c < 0 for c in counts):
                raise InvalidSpec(f"negative branching count at level {i + 1}")
            pos = [c for c in counts if c > 0]
            if len(pos) != len(set(pos)):
                raise InvalidSpec(f"repeated branching count at level {i + 1}: {counts}")

    def to_json(self) -> list[list[int]]:
        return [list(x) for x in self.levels]

    @classmethod
    def from_json(cls, obj) -> GadgetSpec:
        if isinstance(obj, dict):
            obj = obj["levels"]
        return cls(tuple(tuple(int(c) for c in lv) for lv in obj))

    @classmethod
    def of(cls, *levels: Sequence[int]) -> GadgetSpec:
        return cls(tuple(tuple(lv) for lv in levels))


@dataclass(frozen=True)
class Gadget:
    graph: Graph
    p: int
    q: int
    spec: GadgetSpec

    @property
    def size(self) -> int:
        return self.graph.n

    def paths(self) -> list[tuple[int, ...] | None]:
        return [r.path for r in self.graph.roles]


def build_gadget(spec: GadgetSpec, *, g: int | None = None, a: int | None = None) -> Gadget:
    """Grow the tree for ``spec``; ``p`` is vertex 0 and ``q`` vertex 1."""
    spec.validate()
    roles = [VertexRole.gadget(g, a, None), VertexRole.gadget(g, a, ())]
    edges = [(0, 1)]
    frontier = [(1, ())]
    for counts in spec.levels:
        nxt = []
        for (parent, path), c in zip(frontier, counts):
            for k in range(c):
                vid = len(roles)
                child = path + (k,)
                roles.append(VertexRole.gadget(g, a, child))
                edges.append((parent, vid))
                nxt.append((vid, child))
        frontier = nxt
    return Gadget(Graph(roles, edges), 0, 1, spec)


def _as_graph(x) -> Graph:
    return x.graph if isinstance(x, Gadget) else x


def verify_rigid(gadget: Gadget | Graph) -> bool:
    auts = engine.enumerate_automorphisms(_as_graph(gadget), workers=1, budget=1 << 20)
    return len(auts) == 1


def verify_bimorphism_rigid(gadget: Gadget | Graph) -> bool:
    bims = engine.enumerate_bimorphisms(_as_graph(gadget), workers=1, budget=1 << 20)
    return len(bims) == 1


def check_bimorphism_equivalent(g: Gadget | Graph, h: Gadget | Graph) -> bool:
    """True iff bijective homomorphisms exist in both directions."""
    g, h = _as_graph(g), _as_graph(h)
    return (engine.find_bijective_homomorphism(g, h) is not None
            and engine.find_bijective_homomorphism(h, g) is not None)


# -- spec search -------------------------------------------------------------------


def _level_options(prev: tuple[int, ...], remaining: int, first: bool) -> Iterator[tuple[int, ...]]:
    """Count tuples for the children of ``prev``'s vertices, smallest counts first.

    Two childless siblings are always interchangeable, so at most one zero is
    allowed per sibling group, and none among the children of ``q`` (a
    childless child of ``q`` would be interchangeable with ``p``).
    """
    group_of = [i for i, c in enumerate(prev) for _ in range(c)]
    width = len(group_of)
    acc: list[int] = []
    used: set[int] = set()
    zero_groups: set[int] = set()

    def rec(i: int, total: int):
        if i == width:
            yield tuple(acc)
            return
        grp = group_of[i]
        for c in range(0, remaining - total + 1):
            if c == 0:
                if first or grp in zero_groups:
                    continue
                zero_groups.add(grp)
                acc.append(0)
                yield from rec(i + 1, total)
                acc.pop()
                zero_groups.discard(grp)
            elif c not in used:
                used.add(c)
                acc.append(c)
                yield from rec(i + 1, total + c)
                acc.pop()
                used.discard(c)

    yield from rec(0, 0)


def candidate_specs(size: int) -> Iterator[GadgetSpec]:
    """Admissible specs with exactly ``size`` vertices, in deterministic order."""

    def rec(levels: list[tuple[int, ...]], n: int):
        last = levels[-1]
        if sum(last) == 0:
            if n == size:
                yield GadgetSpec(tuple(levels[:-1]))
            return
        for opt in _level_options(last, size - n, len(levels) == 1):
            levels.append(opt)
            yield from rec(levels, n + sum(opt))
            levels.pop()

    for m in range(1, size - 1):
        yield from rec([(m,)], 2 + m)


def find_rigid_spec(size: int, budget: int = SPEC_BUDGET) -> tuple[GadgetSpec | None, int]:
    """First spec of the given size whose tree is rigid; also returns candidates tried."""
    tried = 0
    for spec in candidate_specs(size):
        tried += 1
        if verify_rigid(build_gadget(spec)):
            return spec, tried
        if tried >= budget:
            raise GenerationFailed(f"no rigid spec of size {size} within {budget} candidates")
    return None, tried


def default_gadget_family(k: int, min_size: int, budget: int = SPEC_BUDGET) -> list[Gadget]:
    """``k`` rigid gadgets with strictly increasing sizes, all above ``min_size``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    family: list[Gadget] = []
    size = min_size + 1
    spent = 0
    while len(family) < k:
        if spent >= budget:
            raise GenerationFailed(f"spec budget {budget} exhausted after {len(family)} gadgets")
        spec, tried = find_rigid_spec(size, budget - spent) if size >= 2 else (None, 0)
        spent += tried
        if spec is not None:
            gad = build_gadget(spec)
            if not verify_bimorphism_rigid(gad):
                raise AssertionError(f"rigid tree {spec} has a non-trivial bimorphism")
            family.append(gad)
        size += 1
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if find_isomorphism(family[i].graph, family[j].graph) is not None:
                raise AssertionError("gadget family contains isomorphic members")
    return family


def family_to_json(family: Sequence[Gadget]) -> str:
    return json.dumps([g.spec.to_json() for g in family], separators=(",", ":"))
