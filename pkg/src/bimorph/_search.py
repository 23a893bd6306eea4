"""Backtracking search for injective edge-preserving vertex maps.

One routine covers every map class the package needs:

=====================  ===================  ==========
class                  preserve_non_edges   surjective
=====================  ===================  ==========
isomorphism / aut      True                 True
bijective hom / bi     False                True
monomorphism           False                False
=====================  ===================  ==========

Domains are int bitmasks over target vertices.  The next source vertex is the
one with the fewest remaining candidates (ties: higher degree, then lower id);
candidates are tried in ascending target id.
"""

from __future__ import annotations

import sys
from typing import Iterator

from .errors import BudgetExceeded
from .graph import Graph


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Search:
    def __init__(self, src: Graph, dst: Graph, *, preserve_non_edges: bool, surjective: bool,
                 max_nodes: int | None = None):
        self.src = src
        self.dst = dst
        self.preserve_non_edges = preserve_non_edges
        self.surjective = surjective
        self.max_nodes = max_nodes
        self.nodes = 0

        n, m = src.n, dst.n
        self.feasible = (n == m) if surjective else (n <= m)
        if surjective and self.feasible:
            if preserve_non_edges:
                self.feasible = src.num_edges == dst.num_edges
            else:
                self.feasible = src.num_edges <= dst.num_edges

        sd, dd = src.degrees, dst.degrees
        self.src_deg = sd
        self.nb_src = src.adjacency
        self.nb_dst = dst.masks
        full = (1 << m) - 1
        self.full = full
        if preserve_non_edges:
            self.non_nb_dst = tuple(full & ~mk & ~(1 << w) for w, mk in enumerate(dst.masks))
        exact = preserve_non_edges and surjective
        by_deg: dict[int, int] = {}
        for w, d in enumerate(dd):
            by_deg[d] = by_deg.get(d, 0) | (1 << w)
        init = []
        for v in range(n):
            mask = 0
            for d, mk in by_deg.items():
                if d == sd[v] or (not exact and d > sd[v]):
                    mask |= mk
            init.append(mask)
        self.init_domains = init

        # Hall-type counting on degrees: a target of degree d can only be hit
        # by a source of degree <= d, so a bijection needs, for each t,
        # #unused targets of degree <= t  <=  #unused sources of degree <= t.
        self.hall = surjective and not preserve_non_edges
        top = max(list(sd) + list(dd) + [0]) + 1
        self.src_cnt = [0] * top
        self.dst_cnt = [0] * top
        for d in sd:
            self.src_cnt[d] += 1
        for d in dd:
            self.dst_cnt[d] += 1
        self.dst_deg = dd

        need = 2 * n + 200
        if sys.getrecursionlimit() < need:
            sys.setrecursionlimit(need)

    def _hall_ok(self) -> bool:
        cs = cd = 0
        for a, b in zip(self.src_cnt, self.dst_cnt):
            cs += a
            cd += b
            if cd > cs:
                return False
        return True

    def _select(self, dom: list[int], img: list[int], free: int):
        best = -1
        best_c = 0
        best_d = 0
        deg = self.src_deg
        for v in range(len(img)):
            if img[v] >= 0:
                continue
            d = dom[v] & free
            c = d.bit_count()
            if c == 0:
                return -1, 0
            if best < 0 or c < best_c or (c == best_c and deg[v] > deg[best]):
                best, best_c, best_d = v, c, d
                if c == 1:
                    break
        return best, best_d

    def root_choice(self) -> tuple[int, list[int]]:
        """The first branching decision: (source vertex, candidate targets)."""
        if not self.feasible or self.src.n == 0:
            return -1, []
        if self.hall and not self._hall_ok():
            return -1, []
        img = [-1] * self.src.n
        v, d = self._select(list(self.init_domains), img, self.full)
        return v, list(iter_bits(d)) if v >= 0 else []

    def solutions(self, pin: tuple[int, int] | None = None) -> Iterator[tuple[int, ...]]:
        """Yield image tuples in search order.  ``pin`` fixes one assignment."""
        if not self.feasible:
            return
        n = self.src.n
        if n == 0:
            yield ()
            return
        if self.hall and not self._hall_ok():
            return
        img = [-1] * n
        dom = list(self.init_domains)
        free = self.full
        if pin is not None:
            v, w = pin
            if not dom[v] >> w & 1:
                return
            dom[v] = 1 << w
        yield from self._rec(dom, img, free, 0)

    def _rec(self, dom, img, free, depth) -> Iterator[tuple[int, ...]]:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"search exceeded {self.max_nodes} nodes")
        n = len(img)
        if depth == n:
            yield tuple(img)
            return
        v, cands = self._select(dom, img, free)
        if v < 0:
            return
        nbs = self.nb_src[v]
        nb_dst = self.nb_dst
        for w in iter_bits(cands):
            nfree = free & ~(1 << w)
            ndom = dom[:]
            ndom[v] = 1 << w
            ok = True
            if self.preserve_non_edges:
                nbw = nb_dst[w]
                nnw = self.non_nb_dst[w]
                nbset = set(nbs)
                for u in range(n):
                    if img[u] >= 0 or u == v:
                        continue
                    r = ndom[u] & (nbw if u in nbset else nnw)
                    if not r & nfree:
                        ok = False
                        break
                    ndom[u] = r
            else:
                nbw = nb_dst[w]
                for u in nbs:
                    if img[u] >= 0:
                        continue
                    r = ndom[u] & nbw
                    if not r & nfree:
                        ok = False
                        break
                    ndom[u] = r
            if not ok:
                continue
            if not self.hall:
                img[v] = w
                try:
                    yield from self._rec(ndom, img, nfree, depth + 1)
                finally:
                    img[v] = -1
                continue
            self.src_cnt[self.src_deg[v]] -= 1
            self.dst_cnt[self.dst_deg[w]] -= 1
            try:
                if self._hall_ok():
                    img[v] = w
                    yield from self._rec(ndom, img, nfree, depth + 1)
            finally:
                img[v] = -1
                self.src_cnt[self.src_deg[v]] += 1
                self.dst_cnt[self.dst_deg[w]] += 1

    def first(self) -> tuple[int, ...] | None:
        return next(iter(self.solutions()), None)
