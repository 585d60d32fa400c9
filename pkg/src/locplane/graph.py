"""Edge-colored bipartite graphs, walks and bit-string helpers.

Vertices are opaque non-negative integer ids.  Edges are stored as
``(a_vertex, b_vertex)`` pairs, colors are integers in ``1..d``.  Bit strings
are ``str`` objects over ``"01"`` whose first character is position 1, so
lexicographic order on equal-length strings is numeric order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

A = "A"
B = "B"


class GraphError(ValueError):
    """Malformed graph input."""


class ColoringError(GraphError):
    """The edge coloring is not proper or uses a color outside 1..d."""


class WalkError(ValueError):
    """A vertex sequence is not a non-backtracking walk of the graph."""


def other_side(side: str) -> str:
    if side == A:
        return B
    if side == B:
        return A
    raise ValueError(f"unknown side {side!r}")


@dataclass(frozen=True, eq=False)
class ColoredBipartiteGraph:
    """Immutable bipartite graph with a proper edge coloring into ``1..d``.

    ``color`` maps each edge ``(a, b)`` with ``a`` in ``side_a`` and ``b`` in
    ``side_b`` to its color.  ``labels`` optionally attaches a bit string to
    vertices (the hypercube construction uses it for coordinates).
    """

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    color: Mapping[tuple[int, int], int]
    d: int
    labels: Mapping[int, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "side_a", tuple(sorted(self.side_a)))
        object.__setattr__(self, "side_b", tuple(sorted(self.side_b)))
        object.__setattr__(self, "color", dict(sorted(self.color.items())))
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(sorted(self.labels.items())))
        self._validate()

    def _validate(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise GraphError(f"d must be a positive integer, got {self.d!r}")
        sa, sb = set(self.side_a), set(self.side_b)
        if len(sa) != len(self.side_a) or len(sb) != len(self.side_b):
            raise GraphError("duplicate vertex id")
        if sa & sb:
            raise GraphError("sides are not disjoint")
        ids = self.side_a + self.side_b
        if not all(isinstance(v, (int, np.integer)) for v in ids) or min(ids, default=0) < 0:
            raise GraphError("vertex ids must be non-negative integers")
        self._validate_edges()
        if self.labels is not None:
            for v in self.labels:
                if v not in sa and v not in sb:
                    raise GraphError(f"label for unknown vertex {v}")

    def _validate_edges(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise GraphError(f"d must be a positive integer, got {self.d!r}")
        side = self._side
        seen = set()
        for (a, b), c in self.color.items():
            if side.get(a) != A or side.get(b) != B:
                raise GraphError(f"edge ({a}, {b}) does not join side A to side B")
            if not 1 <= c <= self.d:
                raise ColoringError(f"color {c} of edge ({a}, {b}) outside 1..{self.d}")
            for v in (a, b):
                if (v, c) in seen:
                    raise ColoringError(f"vertex {v} has two edges of color {c}")
                seen.add((v, c))

    def derive(self, color: Mapping[tuple[int, int], int], d: int) -> "ColoredBipartiteGraph":
        """Same vertex sets and labels, new edges; only the edges are re-validated."""
        h = object.__new__(ColoredBipartiteGraph)
        object.__setattr__(h, "side_a", self.side_a)
        object.__setattr__(h, "side_b", self.side_b)
        object.__setattr__(h, "color", dict(sorted(color.items())))
        object.__setattr__(h, "d", d)
        object.__setattr__(h, "labels", self.labels)
        for name in ("_side", "vertices", "vertex_index"):
            h.__dict__[name] = getattr(self, name)
        h._validate_edges()
        return h

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.side_a) + len(self.side_b)

    @property
    def num_edges(self) -> int:
        return len(self.color)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.color)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.side_a + self.side_b))

    @cached_property
    def _side(self) -> dict[int, str]:
        side = {v: A for v in self.side_a}
        side.update({v: B for v in self.side_b})
        return side

    def side_of(self, v: int) -> str:
        return self._side[v]

    @cached_property
    def adj(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """Vertex -> ``((color, neighbour), ...)`` sorted by color."""
        out: dict[int, list[tuple[int, int]]] = {}
        for (a, b), c in self.color.items():
            out.setdefault(a, []).append((c, b))
            out.setdefault(b, []).append((c, a))
        empty = ()
        return {v: tuple(sorted(out[v])) if v in out else empty for v in self.vertices}

    @cached_property
    def _undirected(self) -> dict[tuple[int, int], int]:
        both = dict(self.color)
        both.update({(b, a): c for (a, b), c in self.color.items()})
        return both

    def edge_color(self, u: int, v: int) -> int:
        """Color of the edge ``uv`` regardless of orientation."""
        try:
            return self._undirected[(u, v)]
        except KeyError:
            raise WalkError(f"{u}-{v} is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._undirected

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def vertex_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(a_index, b_index, color)`` arrays in sorted edge order.

        Endpoints are positions in :attr:`vertices`, not raw ids.
        """
        idx = self.vertex_index
        m = self.num_edges
        ea = np.fromiter((idx[a] for a, _ in self.color), dtype=np.int64, count=m)
        eb = np.fromiter((idx[b] for _, b in self.color), dtype=np.int64, count=m)
        ec = np.fromiter(self.color.values(), dtype=np.int64, count=m)
        return ea, eb, ec

    def __repr__(self):
        return (
            f"ColoredBipartiteGraph(|A|={len(self.side_a)}, |B|={len(self.side_b)}, "
            f"|E|={self.num_edges}, d={self.d})"
        )

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "a": list(self.side_a),
            "b": list(self.side_b),
            "edges": [{"a": a, "b": b, "color": c} for (a, b), c in self.color.items()],
        }
        if self.labels is not None:
            out["labels"] = {str(v): s for v, s in self.labels.items()}
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ColoredBipartiteGraph":
        color: dict[tuple[int, int], int] = {}
        for e in data["edges"]:
            key = (int(e["a"]), int(e["b"]))
            if key in color:
                raise GraphError(f"duplicate edge {key}")
            color[key] = int(e["color"])
        labels = data.get("labels")
        if labels is not None:
            labels = {int(v): str(s) for v, s in labels.items()}
        return cls(
            side_a=tuple(int(v) for v in data["a"]),
            side_b=tuple(int(v) for v in data["b"]),
            color=color,
            d=int(data["d"]),
            labels=labels,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"


def build_graph(a_count: int, b_count: int, colored_edge_list: Iterable, d: int | None = None,
                labels: Mapping[int, str] | None = None) -> ColoredBipartiteGraph:
    """Build a graph on ``a_count + b_count`` vertices from ``(i, j, color)`` triples.

    ``i`` indexes side A (``0 <= i < a_count``) and ``j`` indexes side B
    (``0 <= j < b_count``).  Side A gets ids ``0..a_count-1`` and side B gets
    ids ``a_count..a_count+b_count-1``.  ``d`` defaults to the largest color
    used (1 for an edgeless graph).
    """
    color: dict[tuple[int, int], int] = {}
    for i, j, c in colored_edge_list:
        if not (0 <= i < a_count and 0 <= j < b_count):
            raise GraphError(f"edge ({i}, {j}) references a missing vertex")
        key = (i, a_count + j)
        if key in color:
            raise GraphError(f"duplicate edge ({i}, {j})")
        color[key] = int(c)
    if d is None:
        d = max(color.values(), default=1)
    return ColoredBipartiteGraph(
        side_a=tuple(range(a_count)),
        side_b=tuple(range(a_count, a_count + b_count)),
        color=color,
        d=d,
        labels=labels,
    )


def latin_square_graph(d: int) -> ColoredBipartiteGraph:
    """``K_{d,d}`` colored by ``(i + j) mod d + 1``: every vertex has degree ``d``."""
    return build_graph(d, d, ((i, j, (i + j) % d + 1) for i in range(d) for j in range(d)), d=d)


def subgraph(g: ColoredBipartiteGraph, edge_subset: Iterable[tuple[int, int]]) -> ColoredBipartiteGraph:
    """Same vertex sets, restricted edges, inherited colors, ``d`` and labels."""
    color = {}
    for e in edge_subset:
        e = (int(e[0]), int(e[1]))
        if e not in g.color:
            raise GraphError(f"{e} is not an edge of the host graph")
        color[e] = g.color[e]
    return g.derive(color, g.d)


def recolor(g: ColoredBipartiteGraph, color: Mapping[tuple[int, int], int], d: int) -> ColoredBipartiteGraph:
    """Subgraph on the keys of ``color`` with the given new coloring."""
    for e in color:
        if e not in g.color:
            raise GraphError(f"{e} is not an edge of the host graph")
    return g.derive(color, d)


def load_graph(path) -> ColoredBipartiteGraph:
    return ColoredBipartiteGraph.from_dict(json.loads(Path(path).read_text()))


def save_graph(g: ColoredBipartiteGraph, path) -> None:
    Path(path).write_text(g.to_json())


# -- walks -------------------------------------------------------------------


def walk_coloring(g: ColoredBipartiteGraph, walk: Iterable[int]) -> tuple[int, ...]:
    """Color sequence of a non-backtracking walk given by its vertices."""
    vs = tuple(walk)
    if len(vs) < 2:
        raise WalkError("a walk needs at least one edge")
    for i in range(2, len(vs)):
        if vs[i - 2] == vs[i]:
            raise WalkError(f"walk backtracks at position {i}")
    return tuple(g.edge_color(u, v) for u, v in zip(vs, vs[1:]))


def height_function(colors) -> tuple[int, ...]:
    """``h(1) = 0``; each ascent adds one, each descent subtracts one."""
    colors = tuple(colors)
    if not colors:
        raise ValueError("empty color sequence")
    h = [0]
    for prev, cur in zip(colors, colors[1:]):
        if cur == prev:
            raise ValueError("equal adjacent colors")
        h.append(h[-1] + 1 if cur > prev else h[-1] - 1)
    return tuple(h)


def enumerate_walks(g: ColoredBipartiteGraph, m: int, start_side: str | None = None) -> Iterator[tuple[int, ...]]:
    """Every non-backtracking walk of length exactly ``m``, depth first.

    Start vertices are visited in increasing id order and neighbours in
    increasing color order.  Memory use is ``O(m)``.
    """
    if m < 1:
        raise ValueError("walk length must be at least 1")
    adj = g.adj
    starts = g.vertices if start_side is None else (g.side_a if start_side == A else g.side_b)
    for s in starts:
        path = [s]
        stack = [iter(adj[s])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                path.pop()
                continue
            w = nxt[1]
            if len(path) >= 2 and path[-2] == w:
                continue
            path.append(w)
            if len(path) == m + 1:
                yield tuple(path)
                path.pop()
            else:
                stack.append(iter(adj[w]))


# -- bit strings -------------------------------------------------------------


def first_difference(a: str, b: str) -> int:
    """Least 1-based position where equal-length bit strings differ."""
    if len(a) != len(b):
        raise ValueError("bit strings of unequal length")
    for i, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return i
    raise ValueError("bit strings are equal")


def to_bits(value: int, t: int) -> str:
    return format(value, f"0{t}b") if t > 0 else ""


def from_bits(bits: str) -> int:
    return int(bits, 2) if bits else 0
