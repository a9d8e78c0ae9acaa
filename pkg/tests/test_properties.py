import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from loopon.circuits import circuit_of_vertices, domain_of_circuit, interior, merge_circuits, outer_circuit
from loopon.lattice import (
    are_adjacent,
    hex_color,
    hexagon_edges,
    hexagon_vertices,
    hexcross_neighbors,
    shift_down,
    shift_up,
    vertex_neighbors,
)
from loopon.loopcfg import Domain, LoopConfig, loops_of, validate

from oracles import random_circuit, random_vertex_blob

coord = st.integers(-50, 50)
hexes = st.tuples(coord, coord)
hex_sets = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), max_size=12)
seeds = st.integers(0, 2 ** 32 - 1)


def a_vertex(z):
    return hexagon_vertices(z)[0]


@given(hexes)
def test_shift_inverse_and_color(z):
    assert shift_down(shift_up(z)) == z
    assert hex_color(shift_up(z)) == (hex_color(z) + 1) % 3
    v = a_vertex(z)
    assert shift_down(shift_up(v)) == v


@given(hexes)
def test_vertex_triples_are_rainbow_triangles(z):
    for v in hexagon_vertices(z):
        assert sorted(hex_color(w) for w in v) == [0, 1, 2]
        a, b, c = v
        assert are_adjacent(a, b) and are_adjacent(b, c) and are_adjacent(a, c)


@given(hexes)
def test_hexcross_symmetric(z):
    v = a_vertex(z)
    nb = hexcross_neighbors(v)
    assert len(set(nb)) == 6
    assert set(vertex_neighbors(v)) <= set(nb)
    for w in nb:
        assert v in hexcross_neighbors(w)


@given(hex_sets, hex_sets)
def test_symmetric_difference_closure(a, b):
    def cfg(hs):
        edges = set()
        for z in hs:
            edges ^= set(hexagon_edges(z))
        return validate(edges)
    x, y = cfg(a), cfg(b)
    z = validate((x ^ y).edges)
    assert sum(len(l) for l in loops_of(z)) == len(z)


@given(hexes)
def test_shift_preserves_trivial_loop(z):
    omega = LoopConfig(frozenset(hexagon_edges(z)))
    assert shift_up(set(omega.edges)) == set(hexagon_edges(shift_up(z)))


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seeds, st.integers(1, 30))
def test_domain_circuit_roundtrip(seed, size):
    blob = random_vertex_blob(random.Random(seed), size)
    g = outer_circuit(blob)
    H = domain_of_circuit(g)
    assert blob <= H.vertices
    assert H.circuit == g
    assert circuit_of_vertices(H.vertices) == g
    assert Domain(interior(g).int_vertices) == H


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_interior_partitions_edges(seed):
    g = random_circuit(random.Random(seed), 30)
    ie = interior(g)
    assert not ie.int_edges & ie.dual
    for e in ie.dual:
        ends = [v in ie.int_vertices for v in hexagon_vertices(e[0]) if e[1] in v]
        assert sorted(ends) == [False, True]


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_merge_contains_both(seed):
    rng = random.Random(seed)
    a = random_circuit(rng, 20)
    ia = interior(a).int_vertices
    b = random_circuit(rng, 20)
    if not (interior(b).int_vertices & ia):
        return
    m = merge_circuits(a, b)
    im = interior(m).int_vertices
    assert ia <= im and interior(b).int_vertices <= im
    assert set(m) <= set(a) | set(b)
