import pytest

from loopon.lattice import (
    DIRECTIONS,
    are_adjacent,
    edge_endpoints,
    format_edge,
    format_hex,
    hex_color,
    hex_neighbors,
    hexagon_edges,
    hexagon_vertices,
    hexcross_neighbors,
    make_edge,
    make_vertex,
    parse_edge,
    parse_hex,
    shift_down,
    shift_up,
    sublattice_neighbors,
    vertex_edges,
    vertex_neighbors,
)


def test_colors_of_neighbors_differ():
    for z in [(0, 0), (3, -2), (-5, 7)]:
        for w in hex_neighbors(z):
            assert hex_color(w) != hex_color(z)
        for w in sublattice_neighbors(z):
            assert hex_color(w) == hex_color(z)


def test_six_directions():
    assert len(DIRECTIONS) == 6 and len(set(DIRECTIONS)) == 6


def test_hexagon_has_six_edges_and_vertices():
    z = (2, -1)
    vs = hexagon_vertices(z)
    es = hexagon_edges(z)
    assert len(set(vs)) == 6 and len(set(es)) == 6
    # consecutive vertices share an edge
    for a, b in zip(vs, vs[1:] + vs[:1]):
        assert make_edge(*sorted(set(a) & set(b))) in es


def test_edge_endpoints_are_vertices_of_both_hexes():
    e = make_edge((0, 0), (1, 0))
    a, b = edge_endpoints(e)
    assert a != b
    for v in (a, b):
        assert set(e) <= set(v)


def test_vertex_has_three_edges_aligned_with_neighbors():
    v = make_vertex((0, 0), (1, 0), (0, 1))
    for e, w in zip(vertex_edges(v), vertex_neighbors(v)):
        assert set(edge_endpoints(e)) == {v, w}


def test_hexcross_degree_six():
    v = make_vertex((0, 0), (1, 0), (0, 1))
    assert len(set(hexcross_neighbors(v))) == 6


def test_shift_up_rotates_colors():
    z = (0, 0)
    assert shift_up(z) == (0, 1)
    assert hex_color(shift_up(z)) == (hex_color(z) + 1) % 3
    assert shift_down(shift_up(z)) == z


def test_shift_acts_on_edges_and_sets():
    e = make_edge((0, 0), (1, 0))
    assert shift_up(e) == make_edge((0, 1), (1, 1))
    s = {e}
    assert shift_down(shift_up(s)) == s


def test_adjacency():
    assert are_adjacent((0, 0), (1, 0))
    assert not are_adjacent((0, 0), (1, 1))
    with pytest.raises(ValueError):
        make_edge((0, 0), (2, 0))


def test_text_roundtrip():
    e = make_edge((0, 0), (-1, 1))
    assert parse_edge(format_edge(e)) == e
    assert parse_hex(format_hex((3, -4))) == (3, -4)
