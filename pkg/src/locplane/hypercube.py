"""Middle layer of the hypercube, its two plane realizations, crossing checks.

Coordinates are exact rationals.  Crossing tests run on an integer-scaled
copy of the realization (a homothety, so crossings are unchanged).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Mapping, NamedTuple

from .graph import A, ColoredBipartiteGraph


class PremiseError(ValueError):
    """The unique-maximum or ordering premise of the crossing rule fails."""


class RealizationError(ValueError):
    """Bad realization parameters or a degenerate drawing."""


class ExactPoint(NamedTuple):
    x: Fraction
    y: Fraction


@dataclass(frozen=True)
class MiddleLayerGraph:
    """``G_d``: ``floor(d/2)``-ones strings (side A) vs one more one (side B).

    The edge joining two strings that differ in a single position ``i`` has
    color ``i``.  ``graph.labels`` holds each vertex's bit string.
    """

    graph: ColoredBipartiteGraph
    d: int

    @property
    def b(self) -> int:
        return self.d // 2

    def payload(self, v: int) -> str:
        return self.graph.labels[v]


def build_middle_layer(d: int) -> MiddleLayerGraph:
    if d < 1:
        raise ValueError("d must be at least 1")
    b = d // 2

    def strings(ones):
        out = []
        for pos in combinations(range(d), ones):
            s = ["0"] * d
            for p in pos:
                s[p] = "1"
            out.append("".join(s))
        return sorted(out)

    sa, sb = strings(b), strings(b + 1)
    ids_a = {s: i for i, s in enumerate(sa)}
    ids_b = {s: len(sa) + i for i, s in enumerate(sb)}
    color = {}
    for s, x in ids_a.items():
        for i in range(d):
            if s[i] == "0":
                t = s[:i] + "1" + s[i + 1:]
                color[(x, ids_b[t])] = i + 1
    labels = {v: s for s, v in ids_a.items()}
    labels.update({v: s for s, v in ids_b.items()})
    g = ColoredBipartiteGraph(tuple(ids_a.values()), tuple(ids_b.values()), color, d, labels)
    return MiddleLayerGraph(g, d)


# -- realizations ------------------------------------------------------------


def default_eps(d: int) -> Fraction:
    return Fraction(1, 10 ** (d + 1))


def direction_vectors(d: int, variant: int, eps: Fraction | None = None) -> list[ExactPoint]:
    """Translation vector of color ``i`` at index ``i - 1``."""
    if variant == 1:
        return [ExactPoint(Fraction(10**i), Fraction(i * 10**i)) for i in range(1, d + 1)]
    if variant == 2:
        eps = default_eps(d) if eps is None else Fraction(eps)
        if not 0 < eps < Fraction(1, 10**d):
            raise RealizationError(f"eps must satisfy 0 < eps < 10^-{d}, got {eps}")
        out = []
        for i in range(1, d + 1):
            s = 1 + 10**i * eps
            out.append(ExactPoint(s, eps ** (d + 1 - i) * s))
        return out
    raise RealizationError(f"unknown variant {variant!r}")


@dataclass(frozen=True, eq=False)
class RealizedGraph:
    graph: ColoredBipartiteGraph
    variant: int
    coords: Mapping[int, ExactPoint]
    eps: Fraction | None = None

    @cached_property
    def int_coords(self) -> dict[int, tuple[int, int]]:
        """Coordinates scaled by the common denominator."""
        den = 1
        for p in self.coords.values():
            den = math.lcm(den, p.x.denominator, p.y.denominator)
        return {v: (int(p.x * den), int(p.y * den)) for v, p in self.coords.items()}

    def segment(self, u: int, v: int):
        ic = self.int_coords
        return ic[u], ic[v]


def realize(g, variant: int = 1, eps=None, validate: bool = True) -> RealizedGraph:
    """Place every vertex at the sum of its set bits' direction vectors.

    ``g`` is a :class:`MiddleLayerGraph` or any labelled subgraph of one.
    """
    if isinstance(g, MiddleLayerGraph):
        g = g.graph
    if g.labels is None:
        raise RealizationError("graph has no bit-string labels")
    d = len(next(iter(g.labels.values()))) if g.labels else 0
    if variant == 2:
        eps = default_eps(d) if eps is None else Fraction(eps)
    else:
        eps = None
    vecs = direction_vectors(d, variant, eps)
    coords = {}
    for v in g.vertices:
        bits = g.labels[v]
        x = sum((vecs[i].x for i, ch in enumerate(bits) if ch == "1"), Fraction(0))
        y = sum((vecs[i].y for i, ch in enumerate(bits) if ch == "1"), Fraction(0))
        coords[v] = ExactPoint(x, y)
    rg = RealizedGraph(g, variant, coords, eps)
    if validate:
        validate_realization(rg)
    return rg


def _orient(p, q, r) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _strictly_inside(p, q, r) -> bool:
    """``r`` lies in the open segment ``pq`` (all exact)."""
    if _orient(p, q, r) != 0:
        return False
    dot = (r[0] - p[0]) * (q[0] - p[0]) + (r[1] - p[1]) * (q[1] - p[1])
    length2 = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
    return 0 < dot < length2


def validate_realization(rg: RealizedGraph) -> None:
    """Distinct vertex points and no vertex inside a foreign edge."""
    pts = rg.int_coords
    seen = {}
    for v, p in pts.items():
        if p in seen:
            raise RealizationError(f"vertices {seen[p]} and {v} coincide")
        seen[p] = v
    for (a, b) in rg.graph.edges:
        p, q = pts[a], pts[b]
        lox, hix = min(p[0], q[0]), max(p[0], q[0])
        loy, hiy = min(p[1], q[1]), max(p[1], q[1])
        for v, r in pts.items():
            if v == a or v == b:
                continue
            if lox <= r[0] <= hix and loy <= r[1] <= hiy and _strictly_inside(p, q, r):
                raise RealizationError(f"vertex {v} lies on edge ({a}, {b})")


def segments_cross(p1, p2, q1, q2) -> bool:
    """Do the segments share a point interior to both?

    Collinear segments whose interiors overlap count as crossing; a shared
    endpoint alone does not.  Exact for ints and Fractions.
    """
    if tuple(p1) == tuple(p2) or tuple(q1) == tuple(q2):
        raise ValueError("degenerate segment")
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)
    if o1 == o2 == o3 == o4 == 0:
        # compare along an axis the common line is not perpendicular to
        axis = 0 if p1[0] != p2[0] else 1
        a0, a1 = sorted((p1[axis], p2[axis]))
        b0, b1 = sorted((q1[axis], q2[axis]))
        return max(a0, b0) < min(a1, b1)
    return o1 * o2 < 0 and o3 * o4 < 0


def _paths(g: ColoredBipartiteGraph, max_len: int):
    """Simple paths of length ``1..max_len`` as vertex tuples, depth first."""
    adj = g.adj
    for s in g.vertices:
        path = [s]
        on_path = {s}
        stack = [iter(adj[s])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            w = nxt[1]
            if w in on_path:
                continue
            path.append(w)
            yield tuple(path)
            if len(path) - 1 < max_len:
                on_path.add(w)
                stack.append(iter(adj[w]))
            else:
                path.pop()


def is_k_locally_plane(rg: RealizedGraph, k: int) -> tuple[int, ...] | None:
    """A path of length at most ``k`` whose first and last edges cross, or ``None``.

    Every crossing pair inside a short path is the first/last pair of one of
    its subpaths, so checking extreme edges of all paths is complete.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    pts = rg.int_coords
    for path in _paths(rg.graph, k):
        if len(path) < 3:
            continue
        if segments_cross(pts[path[0]], pts[path[1]], pts[path[-2]], pts[path[-1]]):
            return path
    return None


# -- combinatorial crossing rule ----------------------------------------------


def unique_max_premise(colors) -> bool:
    """Every contiguous non-empty subsequence has a strictly unique maximum."""
    c = tuple(colors)
    if not c:
        raise ValueError("empty color sequence")
    for i in range(len(c)):
        top = c[i]
        count = 1
        for j in range(i + 1, len(c)):
            if c[j] > top:
                top, count = c[j], 1
            elif c[j] == top:
                count += 1
            if count > 1:
                return False
    return True


def lemma12_predicted_crossing(colors, start_side: str | None = None) -> bool:
    """Predicted crossing of first and last edge of a walk in ``G_d``.

    True iff the length ``m`` is even and some odd ``1 < j < m`` has
    ``c_1 > c_m > c_j >= c_i`` for all ``1 < i < m``.  Raises
    :class:`PremiseError` when ``c_1 < c_m`` or a subwalk lacks a unique
    maximum color.  ``start_side`` does not affect the answer.
    """
    c = tuple(colors)
    m = len(c)
    if m < 2:
        raise PremiseError("need at least two edges")
    if c[0] < c[-1]:
        raise PremiseError("first color smaller than last")
    if not unique_max_premise(c):
        raise PremiseError("a subwalk has no unique maximum color")
    if m % 2 or m < 4:
        return False
    inner = c[1:-1]
    top = max(inner)
    for j in range(3, m, 2):
        if c[j - 1] == top and c[0] > c[-1] > c[j - 1]:
            return True
    return False


# -- cycles ------------------------------------------------------------------


def shortest_cycle(g: ColoredBipartiteGraph) -> list[int] | None:
    """Vertices of one shortest cycle (first vertex not repeated), or ``None``."""
    best: list[int] | None = None
    adj = g.adj
    for r in g.vertices:
        dist = {r: 0}
        parent = {r: None}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= len(best):
                break
            for _, w in adj[u]:
                if w == parent[u]:
                    continue
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                    continue
                if best is not None and dist[u] + dist[w] + 1 >= len(best):
                    continue
                left, right = [], []
                x = u
                while x is not None:
                    left.append(x)
                    x = parent[x]
                x = w
                while x is not None:
                    right.append(x)
                    x = parent[x]
                cyc = left[::-1] + right[:-1]
                if len(set(cyc)) == len(cyc):
                    best = cyc
    return best


def min_cycle_length(g: ColoredBipartiteGraph) -> float | int:
    """Girth by breadth-first search from every vertex; ``math.inf`` for forests."""
    best = math.inf
    adj = g.adj
    for r in g.vertices:
        dist = {r: 0}
        parent = {r: None}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for _, w in adj[u]:
                if w == parent[u]:
                    continue
                if w in dist:
                    best = min(best, dist[u] + dist[w] + 1)
                else:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
    return best


# -- export ------------------------------------------------------------------


def _frac_dict(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def coords_to_dict(rg: RealizedGraph, coords: Mapping[int, ExactPoint] | None = None) -> dict:
    coords = rg.coords if coords is None else coords
    out = {
        "variant": rg.variant,
        "graph": rg.graph.to_dict(),
        "coords": {str(v): {"x": _frac_dict(p.x), "y": _frac_dict(p.y)} for v, p in sorted(coords.items())},
    }
    if rg.eps is not None:
        out["eps"] = _frac_dict(rg.eps)
    return out


def coords_to_json(rg: RealizedGraph, coords=None) -> str:
    return json.dumps(coords_to_dict(rg, coords), separators=(",", ":")) + "\n"


def realized_from_dict(data: Mapping) -> RealizedGraph:
    def frac(obj):
        return Fraction(int(obj["num"]), int(obj["den"]))

    g = ColoredBipartiteGraph.from_dict(data["graph"])
    coords = {int(v): ExactPoint(frac(p["x"]), frac(p["y"])) for v, p in data["coords"].items()}
    eps = frac(data["eps"]) if "eps" in data else None
    return RealizedGraph(g, int(data["variant"]), coords, eps)


def to_dot(g: ColoredBipartiteGraph) -> str:
    lines = ["graph G {"]
    for v in g.vertices:
        label = g.labels.get(v, str(v)) if g.labels else str(v)
        lines.append(f'  {v} [label="{label}", side="{g.side_of(v)}"];')
    for (a, b), c in g.color.items():
        lines.append(f'  {a} -- {b} [color_index={c}, label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def place_in_disks(rg: RealizedGraph, disk_a, disk_b) -> dict[int, ExactPoint]:
    """Similarity image of the drawing with side A in ``disk_a`` and B in ``disk_b``.

    Disks are ``(cx, cy, r)`` rationals.  The map is ``z -> alpha z + beta`` in
    complex notation sending ``(b, 0)`` and ``(b + 1, 0)`` (where the second
    realization's two sides cluster) to the disk centres; it is a rotation
    plus homothety, so crossings are preserved.  Raises
    :class:`RealizationError` if some vertex lands outside its disk, which
    means ``eps`` is too large for the disks.
    """
    if rg.variant != 2:
        raise RealizationError("disk placement needs the second realization")
    ax, ay, ar = (Fraction(v) for v in disk_a)
    bx, by, br = (Fraction(v) for v in disk_b)
    if ar <= 0 or br <= 0:
        raise RealizationError("disk radii must be positive")
    if (ax, ay) == (bx, by):
        raise RealizationError("disk centres must differ")
    d = len(next(iter(rg.graph.labels.values())))
    half = Fraction(d // 2)
    # alpha = (centre_b - centre_a) / ((half+1) - half) = centre_b - centre_a
    alpha_re, alpha_im = bx - ax, by - ay
    beta_re = ax - (alpha_re * half)
    beta_im = ay - (alpha_im * half)
    out = {}
    for v, p in rg.coords.items():
        x = alpha_re * p.x - alpha_im * p.y + beta_re
        y = alpha_im * p.x + alpha_re * p.y + beta_im
        cx, cy, r = (ax, ay, ar) if rg.graph.side_of(v) == A else (bx, by, br)
        if (x - cx) ** 2 + (y - cy) ** 2 >= r * r:
            raise RealizationError(f"vertex {v} falls outside its disk; use a smaller eps")
        out[v] = ExactPoint(x, y)
    return out
