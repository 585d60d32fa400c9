import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import bits, proper_graphs, ref_thin
from locplane.bounds import triple_t
from locplane.graph import A, B, build_graph, latin_square_graph
from locplane.hypercube import build_middle_layer
from locplane.patterns import find_pattern
from locplane.thinning import (LEX, REV, ColorExhaustionError, best_of_trials, class_type_multiplicity_violations,
                               color_chain, color_map_violations, flat_pipeline, heavy_thin, lemma2_violations,
                               run_procedure, sample_color_map, thin, triple_space, type_coloring,
                               avoid_fast_recursive, avoid_slow_recursive)


@pytest.mark.parametrize("d,t", [(2, 2), (4, 2), (5, 3), (16, 3), (17, 4), (64, 4), (256, 5), (257, 6)])
def test_t_formula(d, t):
    assert triple_t(d) == t
    # ceil(log2(d)/2) + 1 compared through 4**(t-2) < d <= 4**(t-1)
    assert d <= 4 ** (t - 1) and (t == 2 or 4 ** (t - 2) < d)


def test_triple_space_d4():
    sp = triple_space(4)
    assert sp.t == 2 and len(sp) == 8
    assert {e.a for e in sp.elements} == {0b00, 0b10}
    assert {e.i for e in sp.elements} == {2}
    assert sorted({e.z for e in sp.elements}) == [1, 2, 3, 4]


def test_triple_space_d16():
    sp = triple_space(16)
    assert sp.t == 3 and len(sp) == 48 >= 32


def test_d1_rejected():
    with pytest.raises(ValueError):
        triple_space(1)
    with pytest.raises(ValueError):
        thin(build_graph(1, 1, [(0, 0, 1)]), LEX, np.random.default_rng(0))


def _brute_space(d, mode):
    t = triple_t(d)
    els = [(a, i, z) for a in range(2**t) for i in range(2, t + 1) for z in range(1, 2**i + 1)
           if bits(a, t)[i - 1] == "0"]
    key = (lambda e: e) if mode == LEX else (lambda e: (e[0], -e[1], e[2]))
    return sorted(els, key=key)


@pytest.mark.parametrize("mode", [LEX, REV])
@pytest.mark.parametrize("d", [2, 3, 4, 7, 16, 17, 64, 100])
def test_triple_space_matches_definition(d, mode):
    sp = triple_space(d, mode)
    assert [tuple(e) for e in sp.elements] == _brute_space(d, mode)
    t = sp.t
    assert len(sp) == 2 ** (2 * t) - 2 ** (t + 1) >= 2 * d


@pytest.mark.parametrize("mode", [LEX, REV])
@given(st.integers(2, 300), st.integers(0, 2**32))
def test_color_map_shape(mode, d, seed):
    sp = triple_space(d, mode)
    cm = sample_color_map(sp, d, np.random.default_rng(seed))
    trip = cm.triples()
    assert len(trip) == d and len(set(trip)) == d
    assert bits(trip[0].a, sp.t)[0] == "0"
    keys = [sp.key(e) for e in trip]
    assert keys == sorted(keys)
    assert sp.elements[cm.start:cm.start + d] == trip
    assert color_map_violations(cm) == []


def test_color_map_d4_first_half():
    sp = triple_space(4)
    seen = {sample_color_map(sp, 4, np.random.default_rng(s))[1] for s in range(200)}
    assert {e.a for e in seen} == {0} and len(seen) == 4


def test_color_map_uniform():
    sp = triple_space(4)
    n = 10_000
    rng = np.random.default_rng(12345)
    counts = Counter(sample_color_map(sp, 4, rng).start for _ in range(n))
    assert sorted(counts) == [0, 1, 2, 3]
    sigma = math.sqrt(n * 0.25 * 0.75)
    for c in counts.values():
        assert abs(c - n / 4) <= 3 * sigma


# -- one thinning --------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(proper_graphs(max_side=5, max_d=8, min_d=2), st.sampled_from([LEX, REV]), st.sampled_from([A, B]),
       st.integers(0, 2**32))
def test_thin_matches_reference(g, mode, side, seed):
    out = thin(g, mode, np.random.default_rng(seed), b_side=side)
    labels = {v: bits(out.label_of(v), out.t) for v in g.vertices}
    assert set(out.kept_edges) == ref_thin(g, out.color_map, labels, side)
    assert lemma2_violations(out) == []


@pytest.mark.parametrize("mode", [LEX, REV])
def test_thin_on_g8_audit(mode):
    g = build_middle_layer(8).graph
    for seed in range(30):
        out = thin(g, mode, np.random.default_rng(seed), seed=seed)
        assert lemma2_violations(out) == []
        assert class_type_multiplicity_violations(g, out.color_map) == []
        kept = out.subgraph()
        assert find_pattern(kept, "heavy") is None
        assert find_pattern(kept, "slow" if mode == LEX else "fast") is None


def test_g8_has_slow_and_fast_walks():
    # the raw graph has both patterns, so the audit above is not vacuous
    g = build_middle_layer(8).graph
    assert find_pattern(g, "slow") is not None and find_pattern(g, "fast") is not None


@pytest.mark.parametrize("d", [4, 16, 64])
def test_type_coloring_is_proper(d):
    g = latin_square_graph(d)
    for seed in range(20):
        out = thin(g, LEX, np.random.default_rng(seed))
        tc = type_coloring(out)
        assert tc.d == out.t - 1
        for e in tc.edges:
            assert tc.color[e] == out.t + 1 - int(out.edge_type[g.edges.index(e)])


def test_audit_dict_roundtrip():
    from locplane.cli import verify_audit

    g = build_middle_layer(6).graph
    out = thin(g, REV, np.random.default_rng(3), seed=3)
    dump = out.to_audit_dict()
    assert verify_audit(g, dump) == []
    flipped = next(r for r in dump["edges"] if not r["kept"])
    flipped["kept"] = True
    assert verify_audit(g, dump)


# -- heavy thinning ------------------------------------------------------------


@pytest.mark.parametrize("d", [4, 9, 16])
def test_heavy_thin_has_no_heavy_path(d):
    g = build_middle_layer(d).graph if d <= 9 else latin_square_graph(d)
    for seed in range(20):
        assert find_pattern(heavy_thin(g, np.random.default_rng(seed)), "heavy") is None


def test_heavy_thin_d1_keeps_everything():
    g = build_graph(3, 3, [(0, 0, 1), (1, 1, 1)], d=1)
    assert heavy_thin(g, np.random.default_rng(0)).num_edges == 2


# -- recursion -----------------------------------------------------------------


def test_color_chain():
    assert color_chain(256, 2) == [256, 4, 1]
    assert color_chain(16, 2) == [16, 2, 1]


def test_k2_is_single_thinning():
    g = build_middle_layer(6).graph
    a = avoid_slow_recursive(g, B, 2, np.random.default_rng(5))
    b = thin(g, LEX, np.random.default_rng(5)).subgraph()
    assert a.to_json() == b.to_json()
    c = avoid_fast_recursive(g, 2, np.random.default_rng(5))
    assert c.to_json() == thin(g, REV, np.random.default_rng(5)).subgraph().to_json()


def test_d16_k3_runs_at_two_colors():
    g = latin_square_graph(16)
    trace = []
    out = avoid_fast_recursive(g, 3, np.random.default_rng(0), trace)
    assert [o.graph.d for o in trace] == [16, 2]
    assert trace[1].t == 2
    assert find_pattern(out, "k-fast", 3) is None


def test_color_exhaustion_message():
    with pytest.raises(ColorExhaustionError, match="16 -> 2 -> 1"):
        avoid_fast_recursive(latin_square_graph(16), 4, np.random.default_rng(0))


def test_flat_pipeline_accounting():
    g = build_middle_layer(8).graph
    for seed in range(10):
        trace = []
        out = flat_pipeline(g, 2, np.random.default_rng(seed), trace)
        fast_free = trace[-1]
        assert out.num_edges >= fast_free.num_edges - fast_free.n
        assert set(out.edges) <= set(fast_free.edges)


def test_flat_pipeline_empty_input():
    g = build_graph(2, 2, [], d=8)
    assert flat_pipeline(g, 2, np.random.default_rng(0)).num_edges == 0


# -- trials --------------------------------------------------------------------


def test_best_of_trials_basics():
    g = build_middle_layer(8).graph
    one, st1 = best_of_trials(g, "lex", 1, 7)
    assert st1.trials == 1 and one.to_json() == run_procedure(g, "lex", 7).to_json()
    best, stats = best_of_trials(g, "rev", 30, 0)
    assert best.num_edges == stats.max >= stats.mean
    assert best.num_edges == max(run_procedure(g, "rev", s).num_edges for s in range(30))
    with pytest.raises(ValueError):
        best_of_trials(g, "lex", 0, 0)


def test_best_of_trials_thread_independent():
    g = build_middle_layer(10).graph
    a, sa = best_of_trials(g, "rev", 16, 3, workers=1)
    b, sb = best_of_trials(g, "rev", 16, 3, workers=4)
    assert a.to_json() == b.to_json() and sa == sb
