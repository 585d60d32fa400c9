"""Forbidden colored-walk patterns, shaving and flatness checks.

Every detector is an exhaustive depth-first scan over non-backtracking walks
that prunes on the consecutive-color relations a pattern requires; the full
predicate is re-checked on each candidate before it is reported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .graph import A, B, ColoredBipartiteGraph, height_function, subgraph

PATTERN_KINDS = ("heavy", "fast", "slow", "k-fast", "k-slow")


def _check_proper(colors, length: int | None = None):
    colors = tuple(colors)
    if length is not None and len(colors) != length:
        raise ValueError(f"expected {length} colors, got {len(colors)}")
    for x, y in zip(colors, colors[1:]):
        if x == y:
            raise ValueError("equal adjacent colors")
    return colors


def is_heavy_path(side_of_v0: str, colors) -> bool:
    c1, c2, c3 = _check_proper(colors, 3)
    return side_of_v0 == B and c2 < c1 <= c3


def is_fast_walk(colors) -> bool:
    c1, c2, c3, c4 = _check_proper(colors, 4)
    return c2 < c3 < c4 <= c1


def is_slow_walk(side_of_v0: str, colors) -> bool:
    c1, c2, c3, c4 = _check_proper(colors, 4)
    return side_of_v0 == B and c2 < c3 < c4 and c2 < c1 <= c4


def is_k_fast(colors, k: int) -> bool:
    if k < 2:
        raise ValueError("k must be at least 2")
    c = _check_proper(colors, 2 * k)
    down = all(c[i] > c[i + 1] for i in range(k - 1))
    up = all(c[i] < c[i + 1] for i in range(k - 1, 2 * k - 1))
    return down and up and c[0] >= c[-1]


def k_slow_relations(k: int) -> tuple[str, ...]:
    """Required relation between ``c_i`` and ``c_{i+1}`` for ``i = 1..2k-1``."""
    rel = []
    for i in range(1, 2 * k):
        j = (i + 1) // 2 if i % 2 else i // 2
        if i % 2:
            # c_{2j-1} vs c_{2j}
            rel.append(">" if 2 * j <= k else "<")
        else:
            # c_{2j} vs c_{2j+1}
            rel.append("<" if 2 * j < k else ">")
    return tuple(rel)


def is_k_slow(side_of_v0: str, colors, k: int, target_side: str = B) -> bool:
    if k < 2:
        raise ValueError("k must be at least 2")
    c = _check_proper(colors, 2 * k)
    for i, r in enumerate(k_slow_relations(k)):
        if (r == ">") != (c[i] > c[i + 1]):
            return False
    return c[0] >= c[-1] and side_of_v0 == target_side


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class PatternWitness:
    kind: str
    vertices: tuple[int, ...]
    colors: tuple[int, ...]
    k: int | None = None
    side: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.k is not None:
            out["k"] = self.k
        if self.side is not None:
            out["side"] = self.side
        out["vertices"] = list(self.vertices)
        out["colors"] = list(self.colors)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass(frozen=True)
class Pattern:
    """A forbidden walk shape: length, start side, consecutive relations."""

    kind: str
    length: int
    relations: tuple[str, ...]
    start_side: str | None = None
    k: int | None = None

    def matches(self, side_of_v0: str, colors) -> bool:
        if self.kind == "heavy":
            return is_heavy_path(side_of_v0, colors)
        if self.kind == "fast":
            return is_fast_walk(colors)
        if self.kind == "slow":
            return is_slow_walk(side_of_v0, colors)
        if self.kind == "k-fast":
            return is_k_fast(colors, self.k)
        if self.kind == "k-slow":
            return is_k_slow(side_of_v0, colors, self.k, self.start_side)
        raise ValueError(self.kind)


def pattern(kind: str, k: int | None = None, side: str | None = None) -> Pattern:
    if kind == "heavy":
        return Pattern("heavy", 3, (">", "<"), B)
    if kind == "fast":
        return Pattern("fast", 4, (">", "<", "<"))
    if kind == "slow":
        return Pattern("slow", 4, (">", "<", "<"), B)
    if kind in ("k-fast", "k-slow"):
        if k is None or k < 2:
            raise ValueError(f"{kind} needs k >= 2")
        if kind == "k-fast":
            return Pattern("k-fast", 2 * k, (">",) * (k - 1) + ("<",) * k, None, k)
        side = B if side is None else side
        if side not in (A, B):
            raise ValueError(f"unknown side {side!r}")
        return Pattern("k-slow", 2 * k, k_slow_relations(k), side, k)
    raise ValueError(f"unknown pattern kind {kind!r}")


def _relation_walks(g: ColoredBipartiteGraph, relations, start_side) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Walks of length ``len(relations) + 1`` whose consecutive colors obey ``relations``."""
    length = len(relations) + 1
    adj = g.adj
    starts = g.vertices if start_side is None else (g.side_a if start_side == A else g.side_b)
    for s in starts:
        for c1, v1 in adj[s]:
            verts = [s, v1]
            cols = [c1]
            stack = [iter(adj[v1])]
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    stack.pop()
                    verts.pop()
                    cols.pop()
                    continue
                c, w = nxt
                if w == verts[-2]:
                    continue
                r = relations[len(cols) - 1]
                if (r == "<") != (c > cols[-1]):
                    continue
                if len(cols) + 1 == length:
                    yield tuple(verts) + (w,), tuple(cols) + (c,)
                else:
                    verts.append(w)
                    cols.append(c)
                    stack.append(iter(adj[w]))


def iter_pattern_walks(g: ColoredBipartiteGraph, kind: str, k: int | None = None,
                       side: str | None = None) -> Iterator[PatternWitness]:
    """All walks of ``g`` matching the pattern, in deterministic scan order."""
    pat = pattern(kind, k, side)
    for verts, cols in _relation_walks(g, pat.relations, pat.start_side):
        if pat.matches(g.side_of(verts[0]), cols):
            yield PatternWitness(pat.kind, verts, cols, pat.k, pat.start_side if pat.kind == "k-slow" else None)


def find_pattern(g: ColoredBipartiteGraph, kind: str, k: int | None = None,
                 side: str | None = None) -> PatternWitness | None:
    """First walk of ``g`` matching the pattern, or ``None``."""
    return next(iter_pattern_walks(g, kind, k, side), None)


def validate_witness(g: ColoredBipartiteGraph, w: PatternWitness) -> bool:
    """Re-check a witness against the host graph and its predicate."""
    vs = w.vertices
    if any(vs[i - 2] == vs[i] for i in range(2, len(vs))):
        return False
    if not all(g.has_edge(u, v) for u, v in zip(vs, vs[1:])):
        return False
    cols = tuple(g.edge_color(u, v) for u, v in zip(vs, vs[1:]))
    if cols != tuple(w.colors):
        return False
    side0 = g.side_of(vs[0])
    if w.kind in PATTERN_KINDS:
        return pattern(w.kind, w.k, w.side).matches(side0, cols)
    if w.kind == "flatness-violation":
        return _violates_flatness(cols, w.k)
    if w.kind == "first-max-height-violation":
        return len(cols) <= 2 * w.k + 1 and all(cols[0] >= c for c in cols) and max(height_function(cols)) > 0
    raise ValueError(f"unknown witness kind {w.kind!r}")


# -- shaving -----------------------------------------------------------------


def shave(g: ColoredBipartiteGraph) -> ColoredBipartiteGraph:
    """Delete, simultaneously, the largest-color edge at every non-isolated vertex."""
    marked = set()
    for v, nbrs in g.adj.items():
        if nbrs:
            c, w = nbrs[-1]
            marked.add((v, w) if g.side_of(v) == A else (w, v))
    return subgraph(g, (e for e in g.color if e not in marked))


def k_shave(g: ColoredBipartiteGraph, k: int) -> ColoredBipartiteGraph:
    if k < 0:
        raise ValueError("k must be non-negative")
    for _ in range(k):
        g = shave(g)
    return g


# -- flatness ----------------------------------------------------------------


def _violates_flatness(colors, k: int) -> bool:
    """Does this single walk break the ``k``-flat condition?"""
    m = len(colors)
    if m < 2:
        return False
    h = height_function(colors)
    if any(x >= 0 for x in h[1:]):
        return False
    if m <= 2 * k + 1 or min(h) >= -k:
        return not colors[0] > colors[-1]
    return False


@dataclass(frozen=True)
class FlatnessReport:
    """Outcome of a bounded flatness scan.

    Walks up to length ``2k+1`` are covered completely; the clause for
    longer shallow walks is certified only up to ``max_walk_length``.
    """

    k: int
    max_walk_length: int
    walks_checked: int
    witness: PatternWitness | None = None

    @property
    def complete_up_to(self) -> int:
        return 2 * self.k + 1

    @property
    def passed(self) -> bool:
        return self.witness is None


def certify_k_flat(g: ColoredBipartiteGraph, k: int, max_walk_length: int | None = None) -> FlatnessReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    L = 2 * k + 4 if max_walk_length is None else max_walk_length
    if L < 2 * k + 1:
        raise ValueError(f"max walk length {L} is below 2k+1 = {2 * k + 1}")
    adj = g.adj
    checked = 0
    for s in g.vertices:
        for c1, v1 in adj[s]:
            verts = [s, v1]
            cols = [c1]
            hs = [0]
            mins = [0]
            stack = [iter(adj[v1])]
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    stack.pop()
                    verts.pop()
                    cols.pop()
                    hs.pop()
                    mins.pop()
                    continue
                c, w = nxt
                if w == verts[-2]:
                    continue
                h = hs[-1] + (1 if c > cols[-1] else -1)
                if h >= 0:
                    continue
                m = len(cols) + 1
                lo = min(mins[-1], h)
                if m <= 2 * k + 1 or lo >= -k:
                    checked += 1
                    if not c1 > c:
                        wit = PatternWitness("flatness-violation", tuple(verts) + (w,), tuple(cols) + (c,), k)
                        return FlatnessReport(k, L, checked, wit)
                if m < L and (m + 1 <= 2 * k + 1 or lo >= -k):
                    verts.append(w)
                    cols.append(c)
                    hs.append(h)
                    mins.append(lo)
                    stack.append(iter(adj[w]))
    return FlatnessReport(k, L, checked, None)


def check_k_flat(g: ColoredBipartiteGraph, k: int, max_walk_length: int | None = None) -> PatternWitness | None:
    """Violating walk for ``k``-flatness up to the walk-length bound, or ``None``."""
    return certify_k_flat(g, k, max_walk_length).witness


def check_lemma11(g: ColoredBipartiteGraph, k: int) -> PatternWitness | None:
    """Walk of length at most ``2k+1`` whose first color is maximal but whose height goes positive."""
    if k < 1:
        raise ValueError("k must be at least 1")
    limit = 2 * k + 1
    adj = g.adj
    for s in g.vertices:
        for c1, v1 in adj[s]:
            verts = [s, v1]
            cols = [c1]
            hs = [0]
            stack = [iter(adj[v1])]
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    stack.pop()
                    verts.pop()
                    cols.pop()
                    hs.pop()
                    continue
                c, w = nxt
                if w == verts[-2] or c > c1:
                    continue
                h = hs[-1] + (1 if c > cols[-1] else -1)
                if h > 0:
                    return PatternWitness("first-max-height-violation", tuple(verts) + (w,), tuple(cols) + (c,), k)
                if len(cols) + 1 < limit:
                    verts.append(w)
                    cols.append(c)
                    hs.append(h)
                    stack.append(iter(adj[w]))
    return None


def save_witnesses(witnesses, path) -> None:
    Path(path).write_text(json.dumps([w.to_dict() for w in witnesses], separators=(",", ":")) + "\n")
