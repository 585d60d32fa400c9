"""Randomized thinning of edge-colored bipartite graphs.

Lexicographic thinning removes slow walks, reversed thinning removes fast
walks; both also remove heavy paths.  The recursive drivers alternate
thinning with the type coloring to remove longer slow/fast walks, and
:func:`flat_pipeline` shaves the fast-free result into a ``k``-flat graph.

Randomness comes from ``numpy.random.Generator`` objects.  Within one call the
color map is drawn first and then one label per vertex, indexed by the
vertex's position in sorted id order, so results do not depend on how edges
are iterated.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bounds import TrialStats, triple_t
from .graph import A, B, ColoredBipartiteGraph, other_side, recolor, subgraph, to_bits
from .patterns import find_pattern, k_shave

LEX = "lex"
REV = "rev"
ORDER_MODES = (LEX, REV)


class ColorExhaustionError(ValueError):
    """A recursion level would need to thin a graph with fewer than two colors."""


class ColorTriple(NamedTuple):
    """Element ``(class, type, counter)`` of the triple space; class is a ``t``-bit int."""

    a: int
    i: int
    z: int


def color_chain(d: int, levels: int) -> list[int]:
    """Color counts ``[d, t(d)-1, ...]`` seen by ``levels`` successive thinnings."""
    chain = [d]
    for _ in range(levels):
        if chain[-1] < 2:
            break
        chain.append(triple_t(chain[-1]) - 1)
    return chain


@dataclass(frozen=True)
class TripleSpace:
    t: int
    order_mode: str
    elements: tuple[ColorTriple, ...]

    def __len__(self):
        return len(self.elements)

    def key(self, e: ColorTriple):
        return (e.a, e.i, e.z) if self.order_mode == LEX else (e.a, -e.i, e.z)

    def class_bits(self, e: ColorTriple) -> str:
        return to_bits(e.a, self.t)


def triple_space(d: int, order_mode: str = LEX) -> TripleSpace:
    """All triples for ``d`` colors, sorted in the requested order."""
    if d < 2:
        raise ValueError("thinning needs at least two colors (d=1 is undefined)")
    if order_mode not in ORDER_MODES:
        raise ValueError(f"unknown order mode {order_mode!r}")
    t = triple_t(d)
    elems = []
    for a in range(2**t):
        for i in range(2, t + 1):
            if (a >> (t - i)) & 1:
                continue
            for z in range(1, 2**i + 1):
                elems.append(ColorTriple(a, i, z))
    if order_mode == LEX:
        elems.sort()
    else:
        elems.sort(key=lambda e: (e.a, -e.i, e.z))
    return TripleSpace(t, order_mode, tuple(elems))


@dataclass(frozen=True)
class ColorMap:
    """Strictly increasing identification of colors ``1..d`` with triples."""

    space: TripleSpace
    start: int
    d: int

    def __getitem__(self, color: int) -> ColorTriple:
        if not 1 <= color <= self.d:
            raise IndexError(color)
        return self.space.elements[self.start + color - 1]

    def triples(self) -> tuple[ColorTriple, ...]:
        return self.space.elements[self.start:self.start + self.d]


def sample_color_map(space: TripleSpace, d: int, rng: np.random.Generator) -> ColorMap:
    """``F(1)`` uniform over the first half of the space, ``F(k)`` its successors."""
    if len(space) < 2 * d:
        raise ValueError("triple space too small for d")
    start = int(rng.integers(0, len(space) // 2))
    return ColorMap(space, start, d)


@dataclass(eq=False)
class ThinningOutcome:
    """Everything a single thinning decided, kept for auditing.

    ``b_side`` is the side playing the role of ``B`` in the eligibility rule
    (labels are compared on it).  Per-edge arrays follow ``graph.edges``.
    """

    graph: ColoredBipartiteGraph
    mode: str
    b_side: str
    color_map: ColorMap
    labels: np.ndarray
    edge_class: np.ndarray
    edge_type: np.ndarray
    eligible: np.ndarray
    kept: np.ndarray
    seed: int | None = None

    @property
    def t(self) -> int:
        return self.color_map.space.t

    @property
    def kept_edges(self) -> list[tuple[int, int]]:
        edges = self.graph.edges
        return [edges[i] for i in np.flatnonzero(self.kept)]

    @property
    def num_kept(self) -> int:
        return int(self.kept.sum())

    def label_of(self, v: int) -> int:
        return int(self.labels[self.graph.vertex_index[v]])

    def subgraph(self) -> ColoredBipartiteGraph:
        """Kept edges under the original coloring."""
        return subgraph(self.graph, self.kept_edges)

    def to_audit_dict(self) -> dict:
        t = self.t
        rows = []
        for idx, (a, b) in enumerate(self.graph.edges):
            rows.append({
                "a": a,
                "b": b,
                "color": self.graph.color[(a, b)],
                "class": to_bits(int(self.edge_class[idx]), t),
                "type": int(self.edge_type[idx]),
                "eligible": bool(self.eligible[idx]),
                "kept": bool(self.kept[idx]),
            })
        return {
            "mode": self.mode,
            "b_side": self.b_side,
            "t": t,
            "d": self.graph.d,
            "seed": self.seed,
            "color_map_start": self.color_map.start,
            "labels": {str(v): to_bits(self.label_of(v), t) for v in self.graph.vertices},
            "edges": rows,
        }


def _bit_length_table(t: int) -> np.ndarray:
    return np.array([int(x).bit_length() for x in range(2**t)], dtype=np.int64)


def thin(g: ColoredBipartiteGraph, order_mode: str, rng: np.random.Generator,
         b_side: str = B, seed: int | None = None) -> ThinningOutcome:
    """One lexicographic (``"lex"``) or reversed (``"rev"``) thinning of ``g``.

    An edge ``(x, y)`` with ``y`` on ``b_side`` and triple ``(a, i, z)`` is
    eligible iff ``a == label(y) < label(x)`` and the first difference of
    ``a`` and ``label(x)`` is at position ``i``.  Eligible edges sharing an
    endpoint with another eligible edge of the same type are dropped.
    """
    if g.d < 2:
        raise ValueError("thinning needs d >= 2")
    if b_side not in (A, B):
        raise ValueError(f"unknown side {b_side!r}")
    space = triple_space(g.d, order_mode)
    t = space.t
    cmap = sample_color_map(space, g.d, rng)
    labels = rng.integers(0, 2**t, size=g.n, dtype=np.int64)

    trip = cmap.triples()
    cls_of = np.array([0] + [e.a for e in trip], dtype=np.int64)
    typ_of = np.array([0] + [e.i for e in trip], dtype=np.int64)
    ea, eb, ec = g.edge_arrays
    ecls = cls_of[ec]
    etyp = typ_of[ec]
    yv, xv = (eb, ea) if b_side == B else (ea, eb)
    ax = labels[xv]
    ay = labels[yv]
    pos = t + 1 - _bit_length_table(t)[ecls ^ ax]
    eligible = (ecls == ay) & (ecls < ax) & (pos == etyp)

    width = t + 1
    kx = xv * width + etyp
    ky = yv * width + etyp
    cnt_x = np.bincount(kx[eligible], minlength=g.n * width)
    cnt_y = np.bincount(ky[eligible], minlength=g.n * width)
    kept = eligible & (cnt_x[kx] == 1) & (cnt_y[ky] == 1)
    return ThinningOutcome(g, order_mode, b_side, cmap, labels, ecls, etyp, eligible, kept, seed)


def lemma2_violations(out: ThinningOutcome) -> list[str]:
    """Audit of a thinning outcome against the structural guarantees.

    (a) adjacent kept edges have distinct types; (b) kept edges meeting on the
    ``b_side`` share a class; (c) kept edges meeting on the other side with
    types ``i < i'`` have classes ``a < a'`` first differing at ``i``;
    (d) no heavy path starting on ``b_side``.
    """
    g = out.graph
    t = out.t
    problems: list[str] = []
    at_vertex: dict[int, list[tuple[int, int, tuple[int, int]]]] = {}
    for idx in np.flatnonzero(out.kept):
        a, b = g.edges[idx]
        info = (int(out.edge_type[idx]), int(out.edge_class[idx]), (a, b))
        at_vertex.setdefault(a, []).append(info)
        at_vertex.setdefault(b, []).append(info)
    for v, items in at_vertex.items():
        types = [i for i, _, _ in items]
        if len(set(types)) != len(types):
            problems.append(f"(a) vertex {v}: repeated type among kept edges")
        if g.side_of(v) == out.b_side:
            if len({c for _, c, _ in items}) > 1:
                problems.append(f"(b) vertex {v}: kept edges of different classes")
        else:
            for i1, c1, e1 in items:
                for i2, c2, e2 in items:
                    if e1 != e2 and i1 < i2:
                        if not (c1 < c2 and t + 1 - (c1 ^ c2).bit_length() == i1):
                            problems.append(f"(c) vertex {v}: edges {e1}, {e2} violate class order")
    kept_graph = out.subgraph()
    if out.b_side == B:
        heavy = find_pattern(kept_graph, "heavy")
    else:
        heavy = find_pattern(_swap_sides(kept_graph), "heavy")
    if heavy is not None:
        problems.append(f"(d) heavy path {heavy.vertices}")
    return problems


def color_map_violations(cmap: ColorMap) -> list[str]:
    """Monotonicity facts tying colors to classes and types."""
    problems = []
    trip = cmap.triples()
    for c1 in range(len(trip)):
        for c2 in range(c1 + 1, len(trip)):
            x, y = trip[c1], trip[c2]
            if x.a > y.a:
                problems.append(f"colors {c1 + 1}<{c2 + 1} but class order reversed")
            if x.a == y.a and x.i != y.i:
                ok = x.i < y.i if cmap.space.order_mode == LEX else x.i > y.i
                if not ok:
                    problems.append(f"colors {c1 + 1}<{c2 + 1} have wrong type order")
    return problems


def class_type_multiplicity_violations(g: ColoredBipartiteGraph, cmap: ColorMap) -> list[str]:
    """At most ``2**i`` edges of one class and type ``i`` at any vertex."""
    problems = []
    for v, nbrs in g.adj.items():
        counts: dict[tuple[int, int], int] = {}
        for c, _ in nbrs:
            e = cmap[c]
            counts[(e.a, e.i)] = counts.get((e.a, e.i), 0) + 1
        for (a, i), n in counts.items():
            if n > 2**i:
                problems.append(f"vertex {v}: {n} edges of class {a} type {i}")
    return problems


def _swap_sides(g: ColoredBipartiteGraph) -> ColoredBipartiteGraph:
    return ColoredBipartiteGraph(g.side_b, g.side_a, {(b, a): c for (a, b), c in g.color.items()}, g.d, g.labels)


def type_coloring(out: ThinningOutcome) -> ColoredBipartiteGraph:
    """Kept edges recolored by ``t + 1 - type`` into ``1..t-1``."""
    t = out.t
    g = out.graph
    color = {g.edges[i]: t + 1 - int(out.edge_type[i]) for i in np.flatnonzero(out.kept)}
    return recolor(g, color, t - 1)


def heavy_thin(g: ColoredBipartiteGraph, rng: np.random.Generator) -> ColoredBipartiteGraph:
    """Heavy-path-free subgraph via per-B-vertex class selection.

    With ``s = ceil(sqrt(d))`` an edge has class ``ceil(color / s)``; each B
    vertex picks a class uniformly from ``1..s``; edges whose class matches
    their B endpoint's pick are eligible, and an eligible edge is kept when no
    other eligible edge of its class meets its A endpoint.
    """
    s = math.isqrt(g.d - 1) + 1 if g.d > 1 else 1
    picks = rng.integers(1, s + 1, size=g.n, dtype=np.int64)
    ea, eb, ec = g.edge_arrays
    ecls = (ec + s - 1) // s
    eligible = ecls == picks[eb]
    key = ea * (s + 1) + ecls
    cnt = np.bincount(key[eligible], minlength=g.n * (s + 1))
    kept = eligible & (cnt[key] == 1)
    edges = g.edges
    return subgraph(g, [edges[i] for i in np.flatnonzero(kept)])


# -- recursion ----------------------------------------------------------------


def _require_colors(d: int, k: int, what: str):
    chain = color_chain(d, k - 1)
    if len(chain) < k or any(x < 2 for x in chain[:k - 1]):
        raise ColorExhaustionError(
            f"{what} with k={k} needs {k - 1} thinnings but the color chain is "
            f"{' -> '.join(map(str, chain))}; each level needs at least 2 colors "
            f"(roughly log^({k})(4d) > 2)"
        )


def avoid_slow_recursive(g: ColoredBipartiteGraph, target_side: str, k: int, rng: np.random.Generator,
                         trace: list | None = None) -> ColoredBipartiteGraph:
    """Subgraph with no ``(k', target_side)``-slow walk for ``2 <= k' <= k``, original colors."""
    if k < 2:
        raise ValueError("k must be at least 2")
    _require_colors(g.d, k, "slow-walk avoidance")
    out = thin(g, LEX, rng, b_side=target_side)
    if trace is not None:
        trace.append(out)
    if k == 2:
        return out.subgraph()
    inner = avoid_slow_recursive(type_coloring(out), other_side(target_side), k - 1, rng, trace)
    return subgraph(g, inner.edges)


def avoid_fast_recursive(g: ColoredBipartiteGraph, k: int, rng: np.random.Generator,
                         trace: list | None = None) -> ColoredBipartiteGraph:
    """Subgraph with no ``k'``-fast walk for ``2 <= k' <= k``, original colors."""
    if k < 2:
        raise ValueError("k must be at least 2")
    _require_colors(g.d, k, "fast-walk avoidance")
    out = thin(g, REV, rng)
    if trace is not None:
        trace.append(out)
    if k == 2:
        return out.subgraph()
    inner = avoid_slow_recursive(type_coloring(out), A, k - 1, rng, trace)
    return subgraph(g, inner.edges)


def flat_pipeline(g: ColoredBipartiteGraph, k: int, rng: np.random.Generator,
                  trace: list | None = None) -> ColoredBipartiteGraph:
    """Fast-walk avoidance followed by ``(k-1)``-shaving; the result is ``k``-flat.

    ``trace``, when given, receives the thinning outcomes and then the
    fast-free intermediate graph.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if g.num_edges == 0:
        fast_free = g
    else:
        fast_free = avoid_fast_recursive(g, k, rng, trace)
    if trace is not None:
        trace.append(fast_free)
    return k_shave(fast_free, k - 1)


# -- trials -------------------------------------------------------------------

PROCEDURES = ("lex", "rev", "heavy", "slow", "fast", "flat")


def run_procedure(g: ColoredBipartiteGraph, procedure: str, seed: int, k: int = 2,
                  side: str = B) -> ColoredBipartiteGraph:
    rng = np.random.default_rng(seed)
    if procedure == "lex":
        return thin(g, LEX, rng, seed=seed).subgraph()
    if procedure == "rev":
        return thin(g, REV, rng, seed=seed).subgraph()
    if procedure == "heavy":
        return heavy_thin(g, rng)
    if procedure == "slow":
        return avoid_slow_recursive(g, side, k, rng)
    if procedure == "fast":
        return avoid_fast_recursive(g, k, rng)
    if procedure == "flat":
        return flat_pipeline(g, k, rng)
    raise ValueError(f"unknown procedure {procedure!r}; expected one of {PROCEDURES}")


def best_of_trials(g: ColoredBipartiteGraph, procedure: str, n_trials: int, base_seed: int,
                   k: int = 2, side: str = B, workers: int = 1) -> tuple[ColoredBipartiteGraph, TrialStats]:
    """Run seeds ``base_seed .. base_seed + n_trials - 1``; keep the largest output.

    Ties go to the smallest seed, so the selection does not depend on
    ``workers``.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    seeds = [base_seed + i for i in range(n_trials)]

    def one(seed):
        return run_procedure(g, procedure, seed, k, side)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, seeds))
    else:
        results = [one(s) for s in seeds]
    counts = tuple(r.num_edges for r in results)
    best = max(range(n_trials), key=lambda i: (counts[i], -i))
    stats = TrialStats(procedure, g.d, base_seed, counts, num_edges=g.num_edges, k=k)
    return results[best], stats
