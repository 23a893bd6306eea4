"""Enumerate bimorphisms, automorphisms and monomorphisms of finite graphs.

A bimorphism is a bijective self-map that sends edges to edges; it may turn
non-edges into edges.  Maps are compared and ordered by their image tuples,
and every enumeration is returned sorted, so results do not depend on the
search schedule or on the number of workers.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._search import Search
from .algebra import FiniteMonoid, associativity_witness, element_signature
from .errors import BudgetExceeded, ClosureBudgetExceeded
from .graph import PLAIN, Graph

VERTEX_BUDGET = 256
MONOID_BUDGET = 720
CLOSURE_BUDGET = 5000
WORKERS_ENV = "BIMORPH_WORKERS"


@dataclass(frozen=True, order=True)
class VertexMap:
    """A vertex map given by its image tuple: vertex ``v`` goes to ``images[v]``."""

    images: tuple[int, ...]

    def __call__(self, v: int) -> int:
        return self.images[v]

    def __len__(self) -> int:
        return len(self.images)

    def after(self, other: VertexMap) -> VertexMap:
        """``self`` composed after ``other`` (apply ``other`` first)."""
        return VertexMap(tuple(self.images[i] for i in other.images))

    @classmethod
    def identity(cls, n: int) -> VertexMap:
        return cls(tuple(range(n)))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def _run_pinned(args) -> list[tuple[int, ...]]:
    src, dst, pne, surj, max_nodes, pin = args
    return list(Search(src, dst, preserve_non_edges=pne, surjective=surj,
                       max_nodes=max_nodes).solutions(pin))


def _enumerate(src: Graph, dst: Graph, *, preserve_non_edges: bool, surjective: bool,
               budget: int, workers: int | None, max_nodes: int | None) -> list[VertexMap]:
    biggest = max(src.n, dst.n)
    if biggest > budget:
        raise BudgetExceeded(f"graph has {biggest} vertices, vertex budget is {budget}")
    search = Search(src, dst, preserve_non_edges=preserve_non_edges, surjective=surjective,
                    max_nodes=max_nodes)
    workers = default_workers() if workers is None else workers
    if workers > 1:
        v, cands = search.root_choice()
        if len(cands) > 1:
            jobs = [(src, dst, preserve_non_edges, surjective, max_nodes, (v, w)) for w in cands]
            with ProcessPoolExecutor(max_workers=min(workers, len(cands))) as pool:
                found = [img for part in pool.map(_run_pinned, jobs) for img in part]
            return sorted(VertexMap(img) for img in found)
    return sorted(VertexMap(img) for img in search.solutions())


def _preserves_non_edges(g: Graph, m: VertexMap) -> bool:
    image = {tuple(sorted((m.images[u], m.images[v]))) for u, v in g.edges}
    return image == set(g.edges)


def enumerate_bimorphisms(g: Graph, *, budget: int = VERTEX_BUDGET, workers: int | None = None,
                          max_nodes: int | None = None) -> list[VertexMap]:
    """All bijective edge-preserving self-maps of ``g``, sorted.

    The search itself only enforces edge preservation.  Afterwards each result
    is confirmed to preserve non-edges too, which must hold on a finite graph
    (a bijection cannot map |E| edges into more than |E| edges).
    """
    maps = _enumerate(g, g, preserve_non_edges=False, surjective=True, budget=budget,
                      workers=workers, max_nodes=max_nodes)
    for m in maps:
        if not _preserves_non_edges(g, m):
            raise AssertionError(f"bimorphism {m.images} of a finite graph is not an automorphism")
    return maps


def enumerate_automorphisms(g: Graph, *, budget: int = VERTEX_BUDGET, workers: int | None = None,
                            max_nodes: int | None = None) -> list[VertexMap]:
    return _enumerate(g, g, preserve_non_edges=True, surjective=True, budget=budget,
                      workers=workers, max_nodes=max_nodes)


def enumerate_monomorphisms(g: Graph, h: Graph, *, budget: int = VERTEX_BUDGET,
                            workers: int | None = None, max_nodes: int | None = None) -> list[VertexMap]:
    """All injective edge-preserving maps ``g -> h``, sorted."""
    return _enumerate(g, h, preserve_non_edges=False, surjective=False, budget=budget,
                      workers=workers, max_nodes=max_nodes)


def find_bijective_homomorphism(g: Graph, h: Graph, *, max_nodes: int | None = None) -> VertexMap | None:
    img = Search(g, h, preserve_non_edges=False, surjective=True, max_nodes=max_nodes).first()
    return None if img is None else VertexMap(img)


def find_monomorphism(g: Graph, h: Graph, *, max_nodes: int | None = None) -> VertexMap | None:
    img = Search(g, h, preserve_non_edges=False, surjective=False, max_nodes=max_nodes).first()
    return None if img is None else VertexMap(img)


def brute_force_maps(g: Graph, *, preserve_non_edges: bool, limit: int = 9) -> list[VertexMap]:
    """Filter all |V|! bijections directly; only for tiny graphs."""
    n = g.n
    if n > limit:
        raise BudgetExceeded(f"brute force refused for {n} > {limit} vertices")
    if n == 0:
        return [VertexMap(())]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    adj = np.zeros((n, n), dtype=bool)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = True
    keep = np.ones(len(perms), dtype=bool)
    for u, v in g.edges:
        keep &= adj[perms[:, u], perms[:, v]]
    if preserve_non_edges:
        for u, v in itertools.combinations(range(n), 2):
            if not adj[u, v]:
                keep &= ~adj[perms[:, u], perms[:, v]]
    return sorted(VertexMap(tuple(int(x) for x in p)) for p in perms[keep])


def random_graph(n: int, p: float, rng) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph([PLAIN] * n, edges)


def oracle_corpus(count: int = 200, max_n: int = 8, seed: int = 0,
                  probabilities: Sequence[float] = (0.3, 0.5, 0.7)) -> list[Graph]:
    """Deterministic corpus of random small graphs for engine cross-checks."""
    import random

    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        out.append(random_graph(n, probabilities[i % len(probabilities)], rng))
    return out


def oracle_self_check(count: int = 40, seed: int = 0) -> dict:
    """Cross-check the engine against brute force; returns a summary dict."""
    bad = []
    for i, g in enumerate(oracle_corpus(count, seed=seed)):
        bi = enumerate_bimorphisms(g, workers=1)
        aut = enumerate_automorphisms(g, workers=1)
        if bi != brute_force_maps(g, preserve_non_edges=False) or \
                aut != brute_force_maps(g, preserve_non_edges=True) or bi != aut:
            bad.append(i)
    return {"graphs": count, "seed": seed, "mismatches": bad, "passed": not bad}


# -- monoids of maps -------------------------------------------------------------


@dataclass(frozen=True)
class MapMonoid:
    """Self-maps closed under composition.

    ``table[i][j]`` is the index of ``elements[i]`` composed after
    ``elements[j]``.
    """

    elements: tuple[VertexMap, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def as_finite_monoid(self) -> FiniteMonoid:
        return FiniteMonoid(self.table, self.identity)


def monoid_closure(maps: Iterable[VertexMap], *, budget: int = CLOSURE_BUDGET,
                   n: int | None = None) -> MapMonoid:
    """Close ``maps`` (plus the identity) under composition.

    Elements are sorted by image tuple; the table is verified associative.
    """
    maps = list(maps)
    if n is None:
        if not maps:
            raise ValueError("cannot infer the vertex count of an empty map list")
        n = len(maps[0])
    if any(len(m) != n for m in maps):
        raise ValueError("maps act on different vertex sets")
    ident = VertexMap.identity(n)
    members = {ident}
    gens = sorted(set(maps) | {ident})
    todo = deque(gens)
    members.update(gens)
    while todo:
        x = todo.popleft()
        for s in gens:
            for y in (x.after(s), s.after(x)):
                if y not in members:
                    if len(members) >= budget:
                        raise ClosureBudgetExceeded(f"closure exceeds {budget} maps")
                    members.add(y)
                    todo.append(y)
    elements = tuple(sorted(members))
    index = {m: i for i, m in enumerate(elements)}
    table = []
    for a in elements:
        row = []
        for b in elements:
            c = a.after(b)
            if c not in index:
                raise AssertionError("closure is not closed")
            row.append(index[c])
        table.append(tuple(row))
    table = tuple(table)
    if associativity_witness(np.asarray(table, dtype=np.int64)) is not None:
        raise AssertionError("composition table is not associative")
    return MapMonoid(elements, table, index[ident])


def _generators(m: FiniteMonoid) -> list[int]:
    """Greedy generating set, preferring elements with the largest cyclic span."""
    gen_set: list[int] = []
    span = {m.identity}
    order = sorted(m.elements(), key=lambda x: (-sum(element_signature(m, x)), x))
    for x in order:
        if x in span:
            continue
        gen_set.append(x)
        span = _span(m, gen_set)
        if len(span) == m.order:
            break
    return gen_set


def _span(m: FiniteMonoid, gens: list[int]) -> set[int]:
    seen = {m.identity}
    todo = deque([m.identity])
    while todo:
        x = todo.popleft()
        for s in gens:
            y = m.table[x][s]
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def is_isomorphic_monoid(m1: MapMonoid | FiniteMonoid, m2: FiniteMonoid, *,
                         budget: int = MONOID_BUDGET) -> tuple[int, ...] | None:
    """A table-preserving bijection ``m1 -> m2`` (as an image tuple), or None.

    Generators of ``m1`` are mapped by backtracking; the identity is pinned to
    the identity and the rest of the map is forced by words in the generators.
    """
    if isinstance(m1, MapMonoid):
        m1 = m1.as_finite_monoid()
    n = m1.order
    if max(n, m2.order) > budget:
        raise BudgetExceeded(f"monoid order exceeds budget {budget}")
    if n != m2.order:
        return None
    sig1 = [element_signature(m1, x) for x in range(n)]
    sig2 = [element_signature(m2, x) for x in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    gens = _generators(m1)
    # breadth-first words: each non-identity element is parent * generator
    word: dict[int, tuple[int, int]] = {}
    bfs = [m1.identity]
    seen = {m1.identity}
    for x in bfs:
        for k, s in enumerate(gens):
            y = m1.table[x][s]
            if y not in seen:
                seen.add(y)
                word[y] = (x, k)
                bfs.append(y)
    cand = [[y for y in range(n) if sig2[y] == sig1[s] and y != m2.identity] for s in gens]

    for choice in itertools.product(*cand):
        phi = [-1] * n
        phi[m1.identity] = m2.identity
        for y in bfs[1:]:
            x, k = word[y]
            phi[y] = m2.table[phi[x]][choice[k]]
        if len(set(phi)) != n:
            continue
        if all(phi[m1.table[a][b]] == m2.table[phi[a]][phi[b]] for a in range(n) for b in range(n)):
            return tuple(phi)
    return None


# -- verification against the constructions -------------------------------------------


@dataclass
class ActionReport:
    """Outcome of checking that bimorphisms act as left multiplications."""

    clauses: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, list] = field(default_factory=dict)
    multipliers: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    def to_json(self) -> dict:
        return {
            "clauses": dict(self.clauses),
            "witnesses": {k: v for k, v in self.witnesses.items() if v},
            "multipliers": list(self.multipliers),
            "passed": self.passed,
        }


def _target_elements(target) -> set[int]:
    if hasattr(target, "elements") and not callable(target.elements):
        return set(target.elements)
    return set(range(target.order))


def check_regular_left_action(bims: MapMonoid | Sequence[VertexMap], layered, target) -> ActionReport:
    """Check bimorphisms of a layered graph against left multiplication.

    Clauses:
      fixes_group_vertices: each map sends group vertices to group vertices.
      left_multiplication: on group vertices each map is g -> x*g with x in target.
      bijective_onto_target: map -> x is a bijection onto the target.
      no_forbidden_moves: no map sends g to h when h*g^-1 is outside the target.
    """
    elements = bims.elements if isinstance(bims, MapMonoid) else tuple(bims)
    grp = layered.group
    gv = layered.group_vertex
    vertex_to_g = {v: g for g, v in enumerate(gv)}
    allowed = _target_elements(target)
    rep = ActionReport()

    bad = [i for i, m in enumerate(elements) if any(m(v) not in vertex_to_g for v in gv)]
    rep.clauses["fixes_group_vertices"] = not bad
    rep.witnesses["fixes_group_vertices"] = bad

    bad = []
    mults = []
    for i, m in enumerate(elements):
        img_e = m(gv[grp.identity])
        x = vertex_to_g.get(img_e)
        ok = x is not None and x in allowed and all(
            m(gv[g]) == gv[grp.table[x][g]] for g in range(grp.order))
        mults.append(-1 if x is None else x)
        if not ok:
            bad.append(i)
    rep.multipliers = mults
    rep.clauses["left_multiplication"] = not bad
    rep.witnesses["left_multiplication"] = bad

    rep.clauses["bijective_onto_target"] = sorted(mults) == sorted(allowed)
    rep.witnesses["bijective_onto_target"] = [] if rep.clauses["bijective_onto_target"] else mults

    forbidden = []
    for m in elements:
        for g in range(grp.order):
            h = vertex_to_g.get(m(gv[g]))
            if h is not None and grp.table[h][grp.inverse[g]] not in allowed:
                forbidden.append([g, h])
    rep.clauses["no_forbidden_moves"] = not forbidden
    rep.witnesses["no_forbidden_moves"] = forbidden
    return rep


def check_block_preservation(bims: MapMonoid | Sequence[VertexMap], layered) -> list[list[int]]:
    """Failures of ``(g, R_a) -> (g', R_a)`` setwise, where g' is the image of g.

    Returns ``[map index, g, a]`` triples; empty means every block lands on
    the block of the same gadget above the image group element.
    """
    elements = bims.elements if isinstance(bims, MapMonoid) else tuple(bims)
    gv = layered.group_vertex
    vertex_to_g = {v: g for g, v in enumerate(gv)}
    failures = []
    for i, m in enumerate(elements):
        for (g, a), block in sorted(layered.blocks.items()):
            h = vertex_to_g.get(m(gv[g]))
            target = layered.blocks.get((h, a)) if h is not None else None
            if target is None or {m(v) for v in block} != set(target):
                failures.append([i, g, a])
    return failures
