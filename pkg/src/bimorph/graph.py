"""Finite simple undirected graphs with role-tagged vertices.

Vertex ids are dense ordinals ``0..n-1``.  Roles are metadata for assertions
and export only; every structural search in the package ignores them.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DanglingEndpoint, DuplicateEdge, LoopEdge, ParseError, UnknownVertex

__all__ = [
    "VertexRole",
    "PLAIN",
    "Graph",
    "build_graph",
    "degree",
    "is_tree",
    "find_isomorphism",
    "induced_subgraph",
    "serialize",
    "deserialize",
]

ROLE_KINDS = ("plain", "group", "connector", "gadget", "bullet")

ROLE_COLORS = {
    "plain": "black",
    "group": "blue",
    "connector": "darkgreen",
    "gadget": "red",
    "bullet": "orange",
}


@dataclass(frozen=True, order=True)
class VertexRole:
    """What a vertex stands for in a construction.

    ``g`` and ``a`` are group-element indices.  For gadget vertices ``path`` is
    the branch-index sequence below ``q`` (``()`` is ``q`` itself) and
    ``None`` marks the pendant vertex ``p``.  Standalone gadgets leave ``g``
    and ``a`` unset.
    """

    kind: str = "plain"
    g: int | None = None
    a: int | None = None
    path: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ROLE_KINDS:
            raise ValueError(f"unknown role kind {self.kind!r}")

    @classmethod
    def group(cls, g: int) -> VertexRole:
        return cls("group", g)

    @classmethod
    def connector(cls, g: int, a: int) -> VertexRole:
        return cls("connector", g, a)

    @classmethod
    def gadget(cls, g: int | None, a: int | None, path: tuple[int, ...] | None) -> VertexRole:
        return cls("gadget", g, a, None if path is None else tuple(path))

    @classmethod
    def bullet(cls, g: int) -> VertexRole:
        return cls("bullet", g)

    @property
    def is_p(self) -> bool:
        return self.kind == "gadget" and self.path is None

    @property
    def is_q(self) -> bool:
        return self.kind == "gadget" and self.path == ()

    def text(self, vid: int | None = None) -> str:
        """Human-readable label used in DOT output."""
        if self.kind == "plain":
            return "" if vid is None else str(vid)
        if self.kind == "group":
            return f"g{self.g}"
        if self.kind == "connector":
            return f"({self.g},a{self.a})"
        if self.kind == "bullet":
            return f"({self.g},•)"
        if self.path is None:
            local = f"p_{self.a}" if self.a is not None else "p"
        else:
            sub = ".".join(map(str, self.path))
            base = "q" if self.a is None else f"q_{self.a}"
            local = base if not sub else f"{base}[{sub}]"
        return local if self.g is None else f"({self.g},{local})"

    def code(self) -> str:
        """Compact lossless encoding, used as the DOT ``role`` attribute."""
        if self.kind == "plain":
            return "plain"
        if self.kind in ("group", "bullet"):
            return f"{self.kind}:{self.g}"
        if self.kind == "connector":
            return f"connector:{self.g}:{self.a}"
        g = "" if self.g is None else str(self.g)
        a = "" if self.a is None else str(self.a)
        path = "p" if self.path is None else ".".join(map(str, self.path))
        return f"gadget:{g}:{a}:{path}"

    @classmethod
    def from_code(cls, code: str) -> VertexRole:
        parts = code.split(":")
        kind = parts[0]
        try:
            if kind == "plain" and len(parts) == 1:
                return PLAIN
            if kind in ("group", "bullet") and len(parts) == 2:
                return cls(kind, int(parts[1]))
            if kind == "connector" and len(parts) == 3:
                return cls.connector(int(parts[1]), int(parts[2]))
            if kind == "gadget" and len(parts) == 4:
                g = int(parts[1]) if parts[1] else None
                a = int(parts[2]) if parts[2] else None
                if parts[3] == "p":
                    path = None
                elif parts[3] == "":
                    path = ()
                else:
                    path = tuple(int(x) for x in parts[3].split("."))
                return cls.gadget(g, a, path)
        except ValueError:
            pass
        raise ValueError(f"bad role code {code!r}")

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.g is not None:
            out["g"] = self.g
        if self.a is not None:
            out["a"] = self.a
        if self.kind == "gadget":
            out["path"] = None if self.path is None else list(self.path)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> VertexRole:
        kind = obj.get("kind", "plain")
        if kind == "gadget":
            path = obj.get("path")
            return cls.gadget(obj.get("g"), obj.get("a"), None if path is None else tuple(path))
        return cls(kind, obj.get("g"), obj.get("a"))


PLAIN = VertexRole()


class Graph:
    """Immutable finite simple graph.

    Attributes:
        roles: one :class:`VertexRole` per vertex id.
        edges: sorted tuple of ``(u, v)`` pairs with ``u < v``.
        adjacency: per-vertex sorted neighbor tuples.
    """

    def __init__(self, roles: Sequence[VertexRole], edges: Iterable[tuple[int, int]]):
        roles = tuple(roles)
        n = len(roles)
        seen: set[tuple[int, int]] = set()
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise DanglingEndpoint(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
            if u == v:
                raise LoopEdge(f"loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(f"edge {key} given twice")
            seen.add(key)
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.roles = roles
        self.edges = tuple(sorted(seen))
        self.adjacency = tuple(tuple(sorted(x)) for x in nbrs)

    @property
    def n(self) -> int:
        return len(self.roles)

    def __len__(self) -> int:
        return len(self.roles)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(len(self.roles))

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check(v)
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbor sets as int bitmasks (bit ``w`` set iff ``w`` adjacent)."""
        out = []
        for nb in self.adjacency:
            m = 0
            for w in nb:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.adjacency)

    def vertices_of_kind(self, kind: str) -> list[int]:
        return [v for v, r in enumerate(self.roles) if r.kind == kind]

    def _check(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < len(self.roles)):
            raise UnknownVertex(v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.roles == other.roles and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.roles, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def build_graph(vertex_roles: Sequence[VertexRole] | int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Validate and build a graph.  An int stands for that many plain vertices."""
    if isinstance(vertex_roles, int):
        vertex_roles = [PLAIN] * vertex_roles
    return Graph(vertex_roles, edges)


def degree(g: Graph, v: int) -> int:
    g._check(v)
    return len(g.adjacency[v])


def _connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    todo = deque([0])
    while todo:
        u = todo.popleft()
        for w in g.adjacency[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == g.n


def is_tree(g: Graph) -> bool:
    return g.n > 0 and g.num_edges == g.n - 1 and _connected(g)


def find_isomorphism(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """First isomorphism ``g -> h`` in search order, as an image tuple, or None."""
    from ._search import Search

    if g.n != h.n or g.num_edges != h.num_edges:
        return None
    if sorted(g.degrees) != sorted(h.degrees):
        return None
    return Search(g, h, preserve_non_edges=True, surjective=True).first()


def induced_subgraph(g: Graph, vs: Iterable[int]) -> Graph:
    """Subgraph on ``vs`` (relabelled densely in ascending id order)."""
    keep = sorted(set(vs))
    for v in keep:
        g._check(v)
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph([g.roles[v] for v in keep], edges)


# -- serialization -----------------------------------------------------------


def to_json_obj(g: Graph) -> dict:
    return {
        "vertices": [{"id": v, "role": r.to_json()} for v, r in enumerate(g.roles)],
        "edges": [list(e) for e in g.edges],
    }


def from_json_obj(obj) -> Graph:
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise ParseError("graph JSON needs 'vertices' and 'edges'")
    verts = obj["vertices"]
    roles: list[VertexRole | None] = [None] * len(verts)
    for entry in verts:
        try:
            vid = entry["id"]
            roles[vid] = VertexRole.from_json(entry.get("role", {}))
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ParseError(f"bad vertex entry {entry!r}: {exc}") from None
    if any(r is None for r in roles):
        raise ParseError("vertex ids are not dense 0..n-1")
    try:
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad edge list: {exc}") from None
    return Graph(roles, edges)


def dumps_canonical(obj) -> str:
    """Byte-stable JSON text: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def to_dot(g: Graph, name: str = "G", labels: Sequence[str] | None = None,
           positions: Sequence[tuple[float, float]] | None = None) -> str:
    lines = [f"graph {name} {{"]
    for v, r in enumerate(g.roles):
        label = labels[v] if labels is not None else r.text(v)
        attrs = [
            f'label="{label}"',
            f'color="{ROLE_COLORS[r.kind]}"',
            f'role="{r.code()}"',
        ]
        if positions is not None:
            x, y = positions[v]
            attrs.append(f'pos="{x:g},{y:g}!"')
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_HEAD = re.compile(r"^\s*(?:strict\s+)?graph\s+\w*\s*\{\s*$")
_DOT_NODE = re.compile(r"^\s*(\d+)\s*\[(.*)\]\s*;?\s*$")
_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;?\s*$")
_DOT_ATTR = re.compile(r'(\w+)\s*=\s*"([^"]*)"')


def from_dot(text: str) -> Graph:
    lines = text.splitlines()
    body = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if not body or not _DOT_HEAD.match(body[0][1]):
        ln = body[0][0] if body else 1
        raise ParseError("expected 'graph NAME {'", ln, 1)
    if body[-1][1].strip() != "}":
        raise ParseError("missing closing '}'", body[-1][0], 1)
    roles: dict[int, VertexRole] = {}
    edges = []
    for lineno, ln in body[1:-1]:
        m = _DOT_EDGE.match(ln)
        if m:
            edges.append((int(m.group(1)), int(m.group(2))))
            continue
        m = _DOT_NODE.match(ln)
        if m:
            attrs = dict(_DOT_ATTR.findall(m.group(2)))
            try:
                roles[int(m.group(1))] = VertexRole.from_code(attrs.get("role", "plain"))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, m.start(2) + 1) from None
            continue
        raise ParseError(f"cannot parse DOT statement {ln.strip()!r}", lineno,
                         len(ln) - len(ln.lstrip()) + 1)
    n = len(roles)
    if sorted(roles) != list(range(n)):
        raise ParseError("node ids are not dense 0..n-1")
    return Graph([roles[v] for v in range(n)], edges)


def serialize(g: Graph, format: str = "json") -> str:
    if format == "json":
        return dumps_canonical(to_json_obj(g)) + "\n"
    if format == "dot":
        return to_dot(g)
    raise ValueError(f"unknown format {format!r}")


def deserialize(text: str, format: str | None = None) -> Graph:
    """Parse JSON or DOT text; the format is sniffed when not given."""
    if format is None:
        format = "json" if text.lstrip()[:1] in ("{", "[") or not text.strip() else "dot"
    if format == "dot":
        return from_dot(text)
    if format != "json":
        raise ValueError(f"unknown format {format!r}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_json_obj(obj)
