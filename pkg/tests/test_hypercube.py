import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import param_cross, proper_graphs
from locplane.graph import A, B, build_graph, enumerate_walks, walk_coloring
from locplane.hypercube import (PremiseError, RealizationError, build_middle_layer, coords_to_json,
                                direction_vectors, is_k_locally_plane, lemma12_predicted_crossing,
                                min_cycle_length, place_in_disks, realize, realized_from_dict, segments_cross,
                                shortest_cycle, to_dot, unique_max_premise)


@pytest.mark.parametrize("d", range(1, 11))
def test_middle_layer_counts(d):
    mg = build_middle_layer(d)
    g = mg.graph
    b = d // 2
    assert len(g.side_a) == math.comb(d, b) and len(g.side_b) == math.comb(d, b + 1)
    assert g.num_edges == math.comb(d, b) * (d - b)
    for v in g.side_a:
        assert mg.payload(v).count("1") == b
    for v in g.side_b:
        assert mg.payload(v).count("1") == b + 1
    for (x, y), c in g.color.items():
        px, py = mg.payload(x), mg.payload(y)
        diff = [i for i in range(d) if px[i] != py[i]]
        assert diff == [c - 1]


def test_middle_layer_small_sizes():
    g = build_middle_layer(4).graph
    assert (len(g.side_a), len(g.side_b), g.num_edges) == (6, 4, 12)
    assert g.num_edges > g.n * 4 / 4
    g8 = build_middle_layer(8).graph
    assert g8.n == 70 + 56 <= 2**8


def _by_label(mg):
    return {mg.payload(v): v for v in mg.graph.vertices}


def test_first_realization_d2():
    mg = build_middle_layer(2)
    rg = realize(mg, 1)
    lab = _by_label(mg)
    assert rg.coords[lab["10"]] == (10, 10)
    assert rg.coords[lab["01"]] == (100, 200)
    assert rg.coords[lab["11"]] == (110, 210)


def test_second_realization_d2():
    mg = build_middle_layer(2)
    eps = Fraction(1, 1000)
    rg = realize(mg, 2, eps)
    p = rg.coords[_by_label(mg)["10"]]
    assert p == (Fraction(101, 100), Fraction(101, 100_000_000))
    # independent evaluation of b_1 = (1 + 10 eps, eps^2 (1 + 10 eps))
    s = 1 + 10 * eps
    assert p == (s, eps * eps * s)


@pytest.mark.parametrize("d", [2, 3])
def test_eps_bound(d):
    with pytest.raises(RealizationError):
        realize(build_middle_layer(d), 2, Fraction(1, 10**d))
    with pytest.raises(RealizationError):
        realize(build_middle_layer(d), 2, Fraction(0))
    realize(build_middle_layer(d), 2, Fraction(1, 10**d + 1))


@pytest.mark.parametrize("variant", [1, 2])
@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_color_classes_are_translates(d, variant):
    rg = realize(build_middle_layer(d), variant)
    vecs = direction_vectors(d, variant, rg.eps)
    for (a, b), c in rg.graph.color.items():
        pa, pb = rg.coords[a], rg.coords[b]
        assert (pb.x - pa.x, pb.y - pa.y) == tuple(vecs[c - 1])


def test_segments_cross_examples():
    assert segments_cross((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))
    assert segments_cross((0, 0), (2, 0), (1, 0), (3, 0))
    assert not segments_cross((0, 0), (1, 0), (1, 0), (3, 0))
    assert not segments_cross((0, 0), (2, 0), (1, 0), (1, 5))  # T-junction
    with pytest.raises(ValueError):
        segments_cross((0, 0), (0, 0), (1, 1), (2, 2))


pts = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@settings(max_examples=400)
@given(pts, pts, pts, pts)
def test_segments_cross_matches_parametric(p1, p2, q1, q2):
    if p1 == p2 or q1 == q2:
        return
    got = segments_cross(p1, p2, q1, q2)
    assert got == param_cross(p1, p2, q1, q2)
    assert got == segments_cross(q1, q2, p1, p2) == segments_cross(p2, p1, q2, q1)


def test_unique_max_examples():
    assert unique_max_premise((3, 1, 2))
    assert not unique_max_premise((2, 1, 2))
    assert not unique_max_premise((1, 3, 2, 3))
    assert unique_max_premise((5, 1, 3, 1))


def test_predicted_crossing_examples():
    assert lemma12_predicted_crossing((5, 1, 3, 4))
    assert not lemma12_predicted_crossing((5, 1, 4, 3))
    assert not lemma12_predicted_crossing((3, 1, 2))
    with pytest.raises(PremiseError):
        lemma12_predicted_crossing((1, 2))
    with pytest.raises(PremiseError):
        lemma12_predicted_crossing((3, 1, 2, 1, 3))


@pytest.mark.parametrize("d", [3, 4])
def test_predicted_crossing_matches_geometry_short(d):
    """Walks of length <= 5; the acceptance suite covers d up to 6 and length 6."""
    rgs = [realize(build_middle_layer(d), v) for v in (1, 2)]
    g = rgs[0].graph
    checked = 0
    for m in range(2, 6):
        for w in enumerate_walks(g, m):
            cols = walk_coloring(g, w)
            if cols[0] < cols[-1] or not unique_max_premise(cols):
                continue
            want = lemma12_predicted_crossing(cols)
            for rg in rgs:
                p = rg.int_coords
                assert segments_cross(p[w[0]], p[w[1]], p[w[-2]], p[w[-1]]) == want, (w, cols)
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("variant", [1, 2])
def test_g4_local_planeness(variant):
    rg = realize(build_middle_layer(4), variant)
    assert is_k_locally_plane(rg, 3) is None
    wit = is_k_locally_plane(rg, 4)
    assert wit is not None and len(wit) - 1 <= 4
    p = rg.int_coords
    assert segments_cross(p[wit[0]], p[wit[1]], p[wit[-2]], p[wit[-1]])


def test_girth_g4():
    g = build_middle_layer(4).graph
    assert min_cycle_length(g) == 6
    cyc = shortest_cycle(g)
    assert len(cyc) == 6
    assert all(g.has_edge(u, v) for u, v in zip(cyc, cyc[1:] + cyc[:1]))


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


@settings(max_examples=80, deadline=None)
@given(proper_graphs(max_side=6, max_d=5))
def test_girth_matches_networkx(g):
    want = nx.girth(_nx(g))
    assert min_cycle_length(g) == want
    cyc = shortest_cycle(g)
    if cyc is None:
        assert want == math.inf
    else:
        assert len(cyc) == want == len(set(cyc))


def test_forest_girth():
    g = build_graph(2, 2, [(0, 0, 1), (1, 0, 2), (1, 1, 1)])
    assert min_cycle_length(g) == math.inf and shortest_cycle(g) is None


@pytest.mark.parametrize("variant", [1, 2])
def test_coords_json_roundtrip(variant):
    rg = realize(build_middle_layer(4), variant)
    text = coords_to_json(rg)
    assert "." not in text.replace('"', "")  # no floats anywhere
    import json
    back = realized_from_dict(json.loads(text))
    assert back.coords == rg.coords and back.eps == rg.eps and back.variant == variant


def test_disk_placement_preserves_crossings():
    rg = realize(build_middle_layer(4), 2, Fraction(1, 10**7))
    disk_a = (Fraction(0), Fraction(0), Fraction(1, 2))
    disk_b = (Fraction(5), Fraction(3), Fraction(1, 2))
    coords = place_in_disks(rg, disk_a, disk_b)
    for v, p in coords.items():
        cx, cy, r = disk_a if rg.graph.side_of(v) == A else disk_b
        assert (p.x - cx) ** 2 + (p.y - cy) ** 2 < r * r
    moved = type(rg)(rg.graph, rg.variant, coords, rg.eps)
    assert is_k_locally_plane(moved, 3) is None
    wit = is_k_locally_plane(rg, 4)
    p = moved.int_coords
    assert segments_cross(p[wit[0]], p[wit[1]], p[wit[-2]], p[wit[-1]])
    with pytest.raises(RealizationError):
        place_in_disks(realize(build_middle_layer(4), 1), disk_a, disk_b)
    with pytest.raises(RealizationError):
        place_in_disks(rg, disk_a, (Fraction(5), Fraction(3), Fraction(1, 10**12)))


def test_dot_export():
    text = to_dot(build_middle_layer(2).graph)
    assert text.startswith("graph") and text.count("--") == 2


@pytest.mark.parametrize("d,k", [(6, 2), (8, 2), (6, 3)])
def test_flat_subgraphs_are_locally_plane(d, k):
    """Non-empty k-flat subgraphs of G_d (built by greedy repair) are (2k+1)-locally plane."""
    from helpers import greedy_flat_subgraph
    from locplane.patterns import check_lemma11

    g = build_middle_layer(d).graph
    assert is_k_locally_plane(realize(g, 1), 2 * k + 1) is not None
    h = greedy_flat_subgraph(g, k, 2 * k + 2)
    assert h.num_edges > g.num_edges // 10
    assert check_lemma11(h, k) is None
    for variant in (1, 2):
        assert is_k_locally_plane(realize(h, variant), 2 * k + 1) is None
    for m in range(1, 2 * k + 2):
        for w in enumerate_walks(h, m):
            assert unique_max_premise(walk_coloring(h, w))
