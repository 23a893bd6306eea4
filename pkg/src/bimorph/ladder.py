"""Finite windows of the two-rail ladder on Z x {0, 1}, and the ray.

Adjacency on the full ladder:

* ``(a,0) ~ (b,1)``  iff ``a == b``           (rungs)
* ``(a,0) ~ (b,0)``  iff ``|a - b| == 1``      (bottom rail)
* ``(a,1) ~ (b,1)``  iff ``a, b <= 0`` and ``|a - b| == 1``   (top rail, left half only)

The window of radius ``n`` keeps the vertices with ``-n <= a <= n``.  Windows
cannot carry bijective shifts, so the finite stand-in for a bimorphism is an
injective edge-preserving map from a window into a larger window, judged on
the interior ``|a| <= n - margin``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import engine
from .errors import InvalidRadius, TargetTooSmall
from .graph import PLAIN, Graph, to_dot

Coord = tuple[int, int]

DEFAULT_MARGIN = 2


def ladder_adjacent(u: Coord, v: Coord) -> bool:
    (a, x), (b, y) = u, v
    if x != y:
        return a == b
    if x == 0:
        return abs(a - b) == 1
    return a <= 0 and b <= 0 and abs(a - b) == 1


@dataclass(frozen=True)
class LadderWindow:
    radius: int
    graph: Graph = field(repr=False)
    coords: tuple[Coord, ...] = field(repr=False)

    def vid(self, a: int, x: int) -> int:
        return 2 * (a + self.radius) + x

    def contains(self, c: Coord) -> bool:
        return -self.radius <= c[0] <= self.radius and c[1] in (0, 1)


def build_ladder_window(n: int) -> LadderWindow:
    if n < 1:
        raise InvalidRadius(f"radius must be at least 1, got {n}")
    coords = tuple((a, x) for a in range(-n, n + 1) for x in (0, 1))
    vid = {c: i for i, c in enumerate(coords)}
    edges = [(vid[(a, 0)], vid[(a, 1)]) for a in range(-n, n + 1)]
    edges += [(vid[(a, 0)], vid[(a + 1, 0)]) for a in range(-n, n)]
    edges += [(vid[(a, 1)], vid[(a + 1, 1)]) for a in range(-n, 0)]
    return LadderWindow(n, Graph([PLAIN] * len(coords), edges), coords)


@dataclass(frozen=True, order=True)
class WindowMap:
    """Injective map from the radius-``source`` window into the radius-``target`` window."""

    source: int
    target: int
    images: tuple[Coord, ...]

    def __call__(self, c: Coord) -> Coord:
        a, x = c
        return self.images[2 * (a + self.source) + x]

    def then(self, other: WindowMap) -> WindowMap:
        """Apply ``self`` first, then ``other``."""
        if other.source != self.target:
            raise ValueError("composition needs matching window radii")
        return WindowMap(self.source, other.target, tuple(other(c) for c in self.images))

    def is_valid(self) -> bool:
        """Injective, inside the target window, and edge-preserving."""
        if len(set(self.images)) != len(self.images):
            return False
        if any(not (-self.target <= a <= self.target) for a, _ in self.images):
            return False
        src = build_ladder_window(self.source)
        return all(ladder_adjacent(self.images[u], self.images[v])
                   for u, v in src.graph.edges)


def shift_window_map(n: int, m: int, k: int) -> WindowMap:
    """``(a, x) -> (a - k, x)`` from window ``n`` into window ``m``."""
    if k < 0:
        raise ValueError("shift must be non-negative")
    if m < n + k:
        raise TargetTooSmall(f"window {m} cannot hold window {n} shifted by {k}")
    src = build_ladder_window(n)
    wm = WindowMap(n, m, tuple((a - k, x) for a, x in src.coords))
    if not wm.is_valid():
        raise AssertionError(f"shift by {k} is not an injective homomorphism")
    return wm


def enumerate_window_maps(n: int, m: int, *, budget: int = engine.VERTEX_BUDGET,
                          workers: int | None = None) -> list[WindowMap]:
    """Every injective edge-preserving map from window ``n`` into window ``m``."""
    if m < n:
        raise TargetTooSmall(f"target radius {m} is smaller than source radius {n}")
    src, dst = build_ladder_window(n), build_ladder_window(m)
    maps = engine.enumerate_monomorphisms(src.graph, dst.graph, budget=budget, workers=workers)
    return [WindowMap(n, m, tuple(dst.coords[i] for i in vm.images)) for vm in maps]


def classify_as_shift(wm: WindowMap, interior_margin: int = DEFAULT_MARGIN) -> int | None:
    """The shift ``k`` the map agrees with on ``|a| <= n - margin``, or None."""
    r = wm.source - interior_margin
    if r < 0:
        return None
    a0, x0 = wm((0, 0))
    if x0 != 0:
        return None
    k = -a0
    for a in range(-r, r + 1):
        for x in (0, 1):
            if wm((a, x)) != (a - k, x):
                return None
    return k


def window_dot(w: LadderWindow) -> str:
    labels = [f"({a},{x})" for a, x in w.coords]
    return to_dot(w.graph, name="ladder", labels=labels, positions=[(a, x) for a, x in w.coords])


def ladder_report(n: int, m: int, margin: int = DEFAULT_MARGIN) -> dict:
    maps = enumerate_window_maps(n, m)
    rows = []
    for wm in maps:
        rows.append({
            "images": [list(c) for c in wm.images],
            "shift": classify_as_shift(wm, margin),
        })
    shifts = sorted({r["shift"] for r in rows if r["shift"] is not None})
    return {
        "radius": n,
        "target": m,
        "margin": margin,
        "count": len(rows),
        "unclassified": sum(r["shift"] is None for r in rows),
        "shifts": shifts,
        "maps": rows,
    }


# -- the ray ---------------------------------------------------------------------


def build_ray(n: int) -> Graph:
    """Path 0 - 1 - ... - (n-1)."""
    if n < 2:
        raise InvalidRadius(f"ray window needs at least 2 vertices, got {n}")
    return Graph([PLAIN] * n, [(i, i + 1) for i in range(n - 1)])


def verify_ray_rigid_window(n: int) -> dict:
    """Bimorphisms of a finite path: only identity and reversal, endpoints kept as a pair."""
    g = build_ray(n)
    bims = engine.enumerate_bimorphisms(g, workers=1)
    ends = {0, n - 1}
    ends_ok = all({m(0), m(n - 1)} == ends for m in bims)
    return {
        "vertices": n,
        "bimorphisms": len(bims),
        "maps": [list(m.images) for m in bims],
        "endpoints_to_endpoints": ends_ok,
        "passed": len(bims) == 2 and ends_ok,
    }
