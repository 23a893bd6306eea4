"""Finite monoids and groups as multiplication tables.

Elements are indices ``0..n-1``; ``table[a][b]`` is the product ``a*b``.  For
permutation groups the product is composition ``(a*b)(x) = a(b(x))``.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlgebraError,
    NoIdentity,
    NotAGroup,
    NotAssociative,
    OrderBudgetExceeded,
)

logger = logging.getLogger(__name__)

ORDER_BUDGET = 5000

Perm = tuple[int, ...]


@dataclass(frozen=True)
class FiniteMonoid:
    table: tuple[tuple[int, ...], ...]
    identity: int
    labels: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def elements(self) -> range:
        return range(len(self.table))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.table]


@dataclass(frozen=True)
class FiniteGroup(FiniteMonoid):
    inverse: tuple[int, ...] = ()

    def inv(self, a: int) -> int:
        return self.inverse[a]


@dataclass(frozen=True)
class Submonoid:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.elements)

    @property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def as_monoid(self) -> FiniteMonoid:
        """The submonoid as a standalone table, in ascending parent-index order."""
        idx = {x: i for i, x in enumerate(self.elements)}
        t = self.parent.table
        table = tuple(tuple(idx[t[x][y]] for y in self.elements) for x in self.elements)
        return FiniteMonoid(table, idx[self.parent.identity], labels=self.elements)


# -- validation ---------------------------------------------------------------


def _as_array(table) -> np.ndarray:
    try:
        arr = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise AlgebraError(f"table is not a rectangular integer array: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise AlgebraError(f"table must be a non-empty square array, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise AlgebraError(f"table entries must lie in 0..{n - 1}")
    return arr


def associativity_witness(arr: np.ndarray) -> tuple[int, int, int] | None:
    """First triple (a, b, c) with (ab)c != a(bc), or None."""
    for a in range(arr.shape[0]):
        lhs = arr[arr[a]]          # lhs[b, c] = (ab)c
        rhs = arr[a][arr]          # rhs[b, c] = a(bc)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def monoid_from_table(table, labels=None) -> FiniteMonoid:
    arr = _as_array(table)
    n = arr.shape[0]
    ids = np.arange(n)
    e = None
    for x in range(n):
        if np.array_equal(arr[x], ids) and np.array_equal(arr[:, x], ids):
            e = x
            break
    if e is None:
        raise NoIdentity("no two-sided identity in table")
    w = associativity_witness(arr)
    if w is not None:
        raise NotAssociative(w)
    return FiniteMonoid(tuple(map(tuple, arr.tolist())), e, labels)


def group_from_table(table, labels=None) -> FiniteGroup:
    m = monoid_from_table(table)
    return _group_from_monoid(m, labels)


def _group_from_monoid(m: FiniteMonoid, labels=None) -> FiniteGroup:
    n = m.order
    inverse = []
    for x in range(n):
        row = m.table[x]
        if len(set(row)) != n or len({m.table[y][x] for y in range(n)}) != n:
            raise NotAGroup(f"row/column of element {x} is not a permutation")
        y = row.index(m.identity)
        if m.table[y][x] != m.identity:
            raise NotAGroup(f"element {x} has no two-sided inverse")
        inverse.append(y)
    return FiniteGroup(m.table, m.identity, labels if labels is not None else m.labels,
                       tuple(inverse))


def is_cancellative(m: FiniteMonoid) -> bool:
    n = m.order
    rows = all(len(set(r)) == n for r in m.table)
    cols = all(len({m.table[a][b] for a in range(n)}) == n for b in range(n))
    return rows and cols


def check_ore_condition(m: FiniteMonoid) -> bool:
    """True iff aM and bM intersect for every pair a, b."""
    n = m.order
    ind = np.zeros((n, n), dtype=np.int64)
    for a, row in enumerate(m.table):
        ind[a, list(row)] = 1
    return bool(((ind @ ind.T) > 0).all())


def left_mult_permutation(g: FiniteGroup, x: int) -> Perm:
    """The permutation ``h -> x*h`` of the group's elements."""
    return tuple(g.table[x])


# -- permutations ---------------------------------------------------------------


def compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int | None = None) -> Perm:
    """Parse cycle notation ``(0 1 2)(3 4)`` or one-line image notation ``[1, 2, 0]``.

    Cycle notation needs ``degree`` unless the largest moved point should
    decide it.
    """
    s = text.strip()
    if s.startswith("("):
        if _CYCLE.sub("", s).strip():
            raise ValueError(f"bad cycle notation {text!r}")
        cycles = [[int(x) for x in re.split(r"[\s,]+", c.strip()) if x] for c in _CYCLE.findall(s)]
        pts = [x for c in cycles for x in c]
        if len(pts) != len(set(pts)) or any(x < 0 for x in pts):
            raise ValueError(f"cycles in {text!r} are not disjoint non-negative points")
        size = max(pts, default=-1) + 1
        if degree is not None:
            if degree < size:
                raise ValueError(f"{text!r} moves points beyond degree {degree}")
            size = degree
        img = list(range(size))
        for c in cycles:
            for i, x in enumerate(c):
                img[x] = c[(i + 1) % len(c)]
        return tuple(img)
    body = s.strip("[]")
    img = tuple(int(x) for x in re.split(r"[\s,]+", body.strip()) if x)
    if not is_permutation(img):
        raise ValueError(f"{text!r} is not a permutation of 0..{len(img) - 1}")
    if degree is not None and degree != len(img):
        if degree < len(img):
            raise ValueError(f"{text!r} has more than {degree} points")
        img = img + tuple(range(len(img), degree))
    return img


def parse_generators(texts: Iterable[str]) -> list[Perm]:
    """Parse several permutations onto a common point set."""
    raw = [parse_permutation(t) for t in texts]
    deg = max((len(p) for p in raw), default=0)
    return [p + tuple(range(len(p), deg)) for p in raw]


def _closure(gens: list[Perm], identity: Perm, budget: int):
    elements = [identity]
    index = {identity: 0}
    parent: list[tuple[int, int] | None] = [None]
    right: list[list[int]] = []
    todo = deque([0])
    while todo:
        i = todo.popleft()
        x = elements[i]
        row = []
        for s_i, s in enumerate(gens):
            y = compose(x, s)
            j = index.get(y)
            if j is None:
                if len(elements) >= budget:
                    raise OrderBudgetExceeded(f"closure exceeds {budget} elements")
                j = len(elements)
                index[y] = j
                elements.append(y)
                parent.append((i, s_i))
                todo.append(j)
            row.append(j)
        right.append(row)
    return elements, parent, right


def group_from_permutation_generators(gens: Sequence[Sequence[int]], budget: int = ORDER_BUDGET) -> FiniteGroup:
    """Close permutations under composition; element 0 is the identity.

    Elements are numbered in breadth-first order over the generators.
    """
    gens = [tuple(p) for p in gens]
    for p in gens:
        if not is_permutation(p):
            raise ValueError(f"{p} is not a permutation")
    deg = max((len(p) for p in gens), default=0)
    gens = [p + tuple(range(len(p), deg)) for p in gens]
    identity = tuple(range(deg))
    elements, parent, right = _closure(gens, identity, budget)
    n = len(elements)
    r = np.asarray(right, dtype=np.int64).reshape(n, len(gens))
    # column j of the table: x*j, built from j = parent*s as (x*parent)*s
    cols = np.zeros((n, n), dtype=np.int64)
    cols[:, 0] = np.arange(n)
    for j in range(1, n):
        pj, s = parent[j]
        cols[:, j] = r[cols[:, pj], s]
    table = tuple(map(tuple, cols.tolist()))
    inverse = [0] * n
    for x in range(n):
        inverse[x] = table[x].index(0)
    return FiniteGroup(table, 0, tuple(elements), tuple(inverse))


def submonoid_closure(g: FiniteGroup, seed: Iterable[int]) -> Submonoid:
    """Smallest product-closed subset containing ``seed`` and the identity."""
    members = {g.identity}
    todo = deque()
    for x in seed:
        if not 0 <= x < g.order:
            raise AlgebraError(f"{x} is not an element of the group")
        if x not in members:
            members.add(x)
            todo.append(x)
    gens = sorted(members)
    while todo:
        x = todo.popleft()
        for s in gens:
            for y in (g.table[x][s], g.table[s][x]):
                if y not in members:
                    members.add(y)
                    todo.append(y)
                    gens.append(y)
    if len(members) > 1:
        logger.warning("submonoid of a finite group is a subgroup (order %d)", len(members))
    return Submonoid(g, tuple(sorted(members)))


# -- standard examples -------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_table([[(a + b) % n for b in range(n)] for a in range(n)])


def symmetric_group(k: int) -> FiniteGroup:
    if k <= 1:
        return group_from_permutation_generators([])
    gens = [parse_permutation("(0 1)", k)]
    if k > 2:
        gens.append(parse_permutation("(" + " ".join(map(str, range(k))) + ")", k))
    return group_from_permutation_generators(gens)


def direct_product(g: FiniteMonoid, h: FiniteMonoid) -> FiniteGroup | FiniteMonoid:
    """Pairs (a, b) indexed as ``a*|h| + b``."""
    m = h.order
    pairs = list(product(range(g.order), range(m)))
    table = [[g.table[a][c] * m + h.table[b][d] for (c, d) in pairs] for (a, b) in pairs]
    mon = monoid_from_table(table, labels=tuple(pairs))
    try:
        return _group_from_monoid(mon)
    except NotAGroup:
        return mon


def left_zero_with_identity(k: int = 2) -> list[list[int]]:
    """Table of the left-zero semigroup on ``k`` points with an identity 0 adjoined."""
    n = k + 1
    return [[b if a == 0 else a for b in range(n)] for a in range(n)]


def element_signature(m: FiniteMonoid, x: int) -> tuple[int, int]:
    """(index, period) of the power sequence x, x^2, ... (isomorphism invariant)."""
    seen: dict[int, int] = {}
    y, k = x, 1
    while y not in seen:
        seen[y] = k
        y = m.table[y][x]
        k += 1
    return seen[y], k - seen[y]
