"""Graph construction: counts, adjacency, canonical addresses, embedding.

Core claims:
    - N_m follows 4 N_{m-1} - 6 exactly; edge count is 6 * 4^m
    - degrees are 6 interior / 3 boundary for m >= 1
    - canonicalization is idempotent and embeds invariantly
    - canonical addresses biject with geometric points (m <= 4, exhaustive)
    - V_{m-1} sits inside V_m as the shorter-word addresses
"""

from collections import Counter

import numpy as np
import pytest

from tetralap import (
    Address,
    LevelCapError,
    build_level,
    canonicalize,
    embed,
    embed_address,
    expected_vertex_count,
    graph_json,
    graph_obj,
    neighbors,
)


def test_vertex_counts_follow_recursion(graphs):
    counts = [graphs(m).n_vertices for m in range(7)]
    assert counts[0] == 4
    for m in range(1, 7):
        assert counts[m] == 4 * counts[m - 1] - 6
    assert counts[:4] == [4, 10, 34, 130]
    assert [expected_vertex_count(m) for m in range(7)] == counts


def test_level1_shape(graphs):
    g = graphs(1)
    assert g.n_vertices == 10
    assert len(g.edges) == 24
    assert len(list(g.interior)) == 6


def test_level2_interior_count(graphs):
    g = graphs(2)
    assert g.n_vertices == 34
    assert len(list(g.interior)) == 30  # 2(4^2 - 1)


def test_edge_count_and_degrees(graphs):
    for m in range(1, 7):
        g = graphs(m)
        assert len(g.edges) == 6 * 4 ** m
        degrees = Counter()
        for u, v in g.edges:
            degrees[u] += 1
            degrees[v] += 1
        hist = Counter(degrees.values())
        assert hist == {3: 4, 6: g.n_vertices - 4}


def test_interior_vertex_set_size(graphs):
    for m in range(1, 6):
        assert len(list(graphs(m).interior)) == 2 * (4 ** m - 1)


def test_level0_is_complete_graph(graphs):
    g = graphs(0)
    assert g.n_vertices == 4
    assert len(g.edges) == 6
    for v in range(4):
        assert sorted(neighbors(g, v)) == [u for u in range(4) if u != v]


def test_adjacency_is_symmetric(graphs):
    g = graphs(3)
    for v in range(g.n_vertices):
        for u in g.neighbors(v):
            assert v in g.neighbors(u)


def test_boundary_neighbors_at_level1(graphs):
    g = graphs(1)
    # P_0 touches the midpoints toward P_1, P_2, P_3
    expected = {
        g.index_of(Address((0,), 1)),
        g.index_of(Address((0,), 2)),
        g.index_of(Address((0,), 3)),
    }
    assert set(g.neighbors(0)) == expected


def test_interior_v1_vertex_has_three_neighbors_per_cell(graphs):
    g = graphs(2)
    v = g.index_of(Address((0,), 1))
    nbrs = set(g.neighbors(v))
    assert len(nbrs) == 6
    touching = [cell for cell in g.cells if v in cell]
    assert len(touching) == 2
    for cell in touching:
        assert len(nbrs & (set(cell) - {v})) == 3


def test_cells_share_vertices_never_edges(graphs):
    g = graphs(2)
    seen = set()
    for cell in g.cells:
        for i in range(4):
            for j in range(i + 1, 4):
                e = tuple(sorted((cell[i], cell[j])))
                assert e not in seen
                seen.add(e)
    assert seen == set(g.edges)


def test_invalid_vertex_index_raises(graphs):
    with pytest.raises(IndexError):
        graphs(1).neighbors(10)


def test_level_cap():
    with pytest.raises(LevelCapError):
        build_level(13)
    with pytest.raises(ValueError):
        build_level(-1)
    assert build_level(3, level_cap=3).level == 3


# --- canonical addresses -------------------------------------------------


def test_canonicalize_spec_cases():
    assert canonicalize(Address((0,), 1)) == Address((0,), 1)
    assert canonicalize(Address((1,), 0)) == Address((0,), 1)
    assert canonicalize(Address((2, 3), 1)) == Address((2, 1), 3)


def test_canonicalize_idempotent():
    import itertools

    for m in range(4):
        for word in itertools.product(range(4), repeat=m):
            for base in range(4):
                once = canonicalize(Address(word, base))
                assert canonicalize(once) == once


def test_canonicalize_preserves_embedding():
    import itertools

    for m in range(4):
        for word in itertools.product(range(4), repeat=m):
            for base in range(4):
                a = Address(word, base)
                # bitwise equality: both rewrites commute with the float ops
                assert np.array_equal(embed_address(a), embed_address(canonicalize(a)))


def test_trailing_collapse():
    # f_j(P_j) = P_j shortens the word; pure letter-sorting would miss this
    assert canonicalize(Address((0, 1), 1)) == Address((0,), 1)
    assert canonicalize(Address((1, 0), 0)) == Address((0,), 1)
    assert canonicalize(Address((2, 2, 2), 2)) == Address((), 2)


def test_canonical_addresses_biject_with_points(graphs):
    for m in range(5):
        g = graphs(m)
        points = {tuple(np.round(embed_address(a), 12)) for a in g.vertices}
        assert len(points) == g.n_vertices


def test_vertex_sets_nest(graphs):
    for m in range(1, 5):
        small = set(graphs(m - 1).vertices)
        large = {a for a in graphs(m).vertices if len(a.word) < m}
        assert small == large


def test_vertex_order_deterministic(graphs):
    g1, g2 = graphs(2), build_level(2)
    assert g1.vertices == g2.vertices
    assert g1.cells == g2.cells


def test_address_string_round_trip():
    for a in (Address((), 2), Address((0, 1), 3), Address((2, 1), 3)):
        assert Address.from_string(str(a)) == a
    with pytest.raises(ValueError):
        Address.from_string("012")
    with pytest.raises(ValueError):
        Address((5,), 0)


# --- embedding ------------------------------------------------------------


def test_embed_level0_corners(graphs):
    for v in embed(graphs(0)):
        assert v.coords == tuple(embed_address(v.address))
    from tetralap import CORNER_COORDS

    assert np.array_equal(embed_address(Address((), 1)), CORNER_COORDS[1])


def test_embed_midpoint_relation_exact(graphs):
    g = graphs(1)
    mid = embed_address(Address((0,), 1))
    p0 = embed_address(Address((), 0))
    p1 = embed_address(Address((), 1))
    assert np.array_equal(mid, (p0 + p1) / 2.0)


def test_embed_level2_composition():
    a = Address((2, 0), 3)
    direct = embed_address(a)
    from tetralap import CORNER_COORDS

    composed = (CORNER_COORDS[3] + CORNER_COORDS[0]) / 2.0
    composed = (composed + CORNER_COORDS[2]) / 2.0
    assert np.array_equal(direct, composed)


def test_cell_midpoint_relation_all_edges(graphs):
    g = graphs(2)
    for word, cell in zip(g.cell_words, g.cells):
        coords = [embed_address(g.vertices[v]) for v in cell]
        for i in range(4):
            for j in range(i + 1, 4):
                mid = embed_address(Address(word + (i,), j))
                assert np.allclose(mid, (coords[i] + coords[j]) / 2.0, atol=1e-15)


# --- exports ---------------------------------------------------------------


def test_graph_json_schema(graphs):
    doc = graph_json(graphs(1))
    assert doc["level"] == 1
    assert len(doc["vertices"]) == 10
    assert len(doc["edges"]) == 24
    first = doc["vertices"][0]
    assert set(first) == {"id", "word", "base", "xyz"}
    assert all(i < j for i, j in doc["edges"])


def test_graph_obj_wireframe(graphs):
    text = graph_obj(graphs(1))
    lines = text.strip().splitlines()
    vs = [l for l in lines if l.startswith("v ")]
    assert len(vs) == 10
    assert sum(1 for l in lines if l.startswith("l ")) == 24
    assert not any(l.startswith("f ") for l in lines)
    # coordinates are plain parseable floats
    for l in vs:
        _, x, y, z = l.split()
        assert np.isfinite([float(x), float(y), float(z)]).all()
