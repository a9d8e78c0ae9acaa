"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx

from loopon.circuits import Circuit, interior, outer_circuit
from loopon.lattice import (
    connected_components,
    edge_endpoints,
    hex_color,
    hex_neighbors,
    hexagon_edges,
    hexes_of_vertices,
    sublattice_neighbors,
    vertex_neighbors,
    vertices_of_hexes,
)


@dataclass(frozen=True)
class CircuitGarden:
    c: int
    sigma: Circuit
    required: frozenset     # color-c hexagons that must be flowers
    edges: frozenset        # IntEdge sigma together with sigma*
    vertices: frozenset     # endpoints of the garden edges


def all_circuits_avoiding(c: int, hexes) -> list[Circuit]:
    """Every simple cycle of length >= 3 in the triangular lattice restricted to non-c hexagons."""
    G = nx.Graph()
    hs = [z for z in hexes if hex_color(z) != c]
    G.add_nodes_from(hs)
    pool = set(hs)
    for z in hs:
        for w in hex_neighbors(z):
            if w in pool:
                G.add_edge(z, w)
    return [Circuit(cyc) for cyc in nx.simple_cycles(G) if len(cyc) >= 3]


def candidate_gardens(gamma: Circuit) -> list[CircuitGarden]:
    """All circuits that could carry a garden of a configuration inside ``gamma``."""
    ie = interior(gamma)
    window = hexes_of_vertices(ie.int_vertices)
    out = []
    for c in range(3):
        for sigma in all_circuits_avoiding(c, window):
            si = interior(sigma)
            ih = si.int_hexagons
            required = frozenset(z for z in ih if hex_color(z) == c
                                 and any(w not in ih for w in hex_neighbors(z)))
            if not required <= ie.int_hexagons:
                continue
            edges = si.int_edges | si.dual
            verts = frozenset(v for e in edges for v in edge_endpoints(e))
            out.append(CircuitGarden(c, sigma, required, edges, verts))
    return out


def gardens_of(candidates, flowers) -> list[CircuitGarden]:
    return [g for g in candidates if g.required <= flowers]


def clusters_from_gardens(gardens) -> set[frozenset]:
    return {g.edges for g in gardens
            if not any(h.edges != g.edges and g.edges <= h.edges for h in gardens)}


def overlap_law_violations(gardens) -> int:
    bad = 0
    for i, g in enumerate(gardens):
        for h in gardens[i + 1:]:
            if g.c == h.c:
                if g.vertices & h.vertices:
                    union = g.edges | h.edges
                    if not any(k.c == g.c and union <= k.edges for k in gardens):
                        bad += 1
            else:
                if not (g.edges <= h.edges or h.edges <= g.edges or not (g.edges & h.edges)):
                    bad += 1
    return bad


def flowers_inside(omega_edges, gamma: Circuit) -> frozenset:
    ie = interior(gamma)
    inside = omega_edges & ie.int_edges
    return frozenset(z for z in ie.int_hexagons if all(e in inside for e in hexagon_edges(z)))


# --- random geometry ---------------------------------------------------------------

def random_vertex_blob(rng: random.Random, size: int):
    start = ((0, 0), (0, 1), (1, 0))
    blob = {start}
    frontier = [start]
    while len(blob) < size:
        v = rng.choice(frontier)
        w = rng.choice(vertex_neighbors(v))
        if w not in blob:
            blob.add(w)
            frontier.append(w)
    return blob


def random_circuit(rng: random.Random, max_size: int = 40) -> Circuit:
    return outer_circuit(random_vertex_blob(rng, rng.randint(1, max_size)))


def random_typed_circuit(rng: random.Random, c: int, max_size: int = 12) -> Circuit:
    """A circuit avoiding color c: the boundary of V(S) for a random sublattice blob S."""
    z0 = next(z for z in ((0, 0), (0, 1), (0, 2)) if hex_color(z) == c)
    S = {z0}
    target = rng.randint(1, max_size)
    while len(S) < target:
        z = rng.choice(sorted(S))
        S.add(rng.choice(sublattice_neighbors(z)))
    return outer_circuit(vertices_of_hexes(S))


def hexcross_connected(vertices) -> bool:
    vs = set(vertices)
    return len(connected_components(vs, "hexcross")) <= 1
