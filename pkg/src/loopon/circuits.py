"""Circuits in the triangular lattice and the interior/exterior they cut out."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .lattice import (
    Hex,
    Vertex,
    are_adjacent,
    connected_components,
    format_hex,
    hex_color,
    hex_window,
    hexagon_vertices,
    hexes_of_vertices,
    induced_edges,
    make_edge,
    parse_hex,
    vertex_edges,
    vertex_neighbors,
    window_vertices,
)
from .loopcfg import Domain, LoopConfig, NotADomain, PreconditionError

WINDOW_MARGIN = 3


class Circuit:
    """A simple closed path of hexagons, stored in canonical rotation and direction."""

    __slots__ = ("hexagons", "_hash")

    def __init__(self, hexagons: Sequence[Hex]):
        hs = [tuple(z) for z in hexagons]
        m = len(hs)
        if m < 3:
            raise ValueError("a circuit needs at least 3 hexagons")
        if len(set(hs)) != m:
            raise ValueError("circuit hexagons must be distinct")
        for i in range(m):
            if not are_adjacent(hs[i], hs[(i + 1) % m]):
                raise ValueError(f"{hs[i]} and {hs[(i + 1) % m]} are not adjacent")
        self.hexagons: tuple = _canonical(hs)
        self._hash = hash(self.hexagons)

    def __len__(self) -> int:
        return len(self.hexagons)

    def __iter__(self):
        return iter(self.hexagons)

    def __eq__(self, other) -> bool:
        return isinstance(other, Circuit) and self.hexagons == other.hexagons

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Circuit({list(self.hexagons)})"

    def colors(self) -> set[int]:
        return {hex_color(z) for z in self.hexagons}

    def avoids(self, c: int) -> bool:
        return c not in self.colors()

    def to_text(self) -> str:
        return "circuit: " + " ".join(format_hex(z) for z in self.hexagons) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("circuit:"):
                body = line[len("circuit:"):].split()
                return cls([parse_hex(tok) for tok in body])
        raise ValueError("no 'circuit:' line found")


def _canonical(hs: list[Hex]) -> tuple:
    i = hs.index(min(hs))
    rot = hs[i:] + hs[:i]
    rev = [rot[0]] + rot[:0:-1]
    return tuple(rot if rot[1] < rev[1] else rev)


def dual_edges(gamma: Circuit) -> frozenset:
    hs = gamma.hexagons
    return frozenset(make_edge(hs[i], hs[(i + 1) % len(hs)]) for i in range(len(hs)))


@dataclass(frozen=True)
class IntExt:
    int_vertices: frozenset
    int_edges: frozenset
    int_hexagons: frozenset
    dual: frozenset
    # vertices of the finite window that lie outside
    ext_vertices: frozenset

    def is_exterior(self, v: Vertex) -> bool:
        return v not in self.int_vertices

    @property
    def boundary_vertices(self) -> frozenset:
        """Interior vertices with a neighbour outside the interior."""
        iv = self.int_vertices
        return frozenset(v for v in iv if any(w not in iv for w in vertex_neighbors(v)))


@lru_cache(maxsize=4096)
def interior(gamma: Circuit) -> IntExt:
    """Flood-fill the window around ``gamma`` after deleting its dual edges."""
    cut = dual_edges(gamma)
    window = hex_window(gamma.hexagons, WINDOW_MARGIN)
    verts = window_vertices(window)
    comps = _components_avoiding(verts, cut)
    rim = {v for v in verts if any(w not in verts for w in vertex_neighbors(v))}
    inner = [c for c in comps if not (c & rim)]
    outer = [c for c in comps if c & rim]
    if len(inner) != 1 or len(outer) != 1:
        raise ValueError(f"circuit splits its window into {len(inner)} inner and "
                         f"{len(outer)} outer parts")
    iv = frozenset(inner[0])
    ie = frozenset(induced_edges(set(iv)))
    ih = frozenset(z for z in hexes_of_vertices(iv)
                   if all(v in iv for v in hexagon_vertices(z)))
    return IntExt(iv, ie, ih, cut, frozenset(outer[0]))


def _components_avoiding(verts: set[Vertex], cut: frozenset) -> list[set[Vertex]]:
    todo = set(verts)
    comps = []
    for start in sorted(todo):
        if start not in todo:
            continue
        todo.discard(start)
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e, w in zip(vertex_edges(v), vertex_neighbors(v)):
                if w in todo and e not in cut:
                    todo.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def circuit_of_vertices(vertices: Iterable[Vertex]) -> Circuit:
    """The circuit formed by the dual of the edge boundary of a vertex set."""
    vs = frozenset(vertices)
    if not vs:
        raise NotADomain("empty vertex set")
    if len(connected_components(vs)) != 1:
        raise NotADomain("vertex set is not connected")
    adj: dict[Hex, list[Hex]] = {}
    for v in vs:
        for (y, z), w in zip(vertex_edges(v), vertex_neighbors(v)):
            if w not in vs:
                adj.setdefault(y, []).append(z)
                adj.setdefault(z, []).append(y)
    for z, nb in adj.items():
        if len(nb) != 2:
            raise NotADomain(f"boundary is not a simple circuit at hexagon {z}")
    start = min(adj)
    path = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        path.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(path) != len(adj):
        raise NotADomain("boundary splits into several circuits (domain has holes)")
    gamma = Circuit(path)
    if interior(gamma).int_vertices != vs:
        raise NotADomain("vertex set is not the interior of its boundary circuit")
    return gamma


def circuit_of_domain(domain: Domain) -> Circuit:
    return circuit_of_vertices(domain.vertices)


def domain_of_circuit(gamma: Circuit) -> Domain:
    return Domain(interior(gamma).int_vertices, check=False)


def fill_holes(vertices: Iterable[Vertex]) -> frozenset:
    """The set together with every finite component of its complement."""
    vs = frozenset(vertices)
    window = hex_window(hexes_of_vertices(vs), 2)
    outside = window_vertices(window) - vs
    rim = {v for v in outside if any(w not in outside and w not in vs
                                     for w in vertex_neighbors(v))}
    holes = [c for c in connected_components(outside) if not (c & rim)]
    out = set(vs)
    for h in holes:
        out |= h
    return frozenset(out)


def outer_circuit(vertices: Iterable[Vertex]) -> Circuit:
    vs = frozenset(vertices)
    if not vs:
        raise PreconditionError("empty vertex set")
    if len(connected_components(vs)) != 1:
        raise PreconditionError("vertex set is not connected")
    return circuit_of_vertices(fill_holes(vs))


def merge_circuits(sigma: Circuit, sigma2: Circuit) -> Circuit:
    """A circuit inside both duals' union whose interior contains both interiors."""
    if sigma == sigma2:
        return sigma
    i1, i2 = interior(sigma), interior(sigma2)
    if not (i1.dual & i2.dual) and not (i1.int_vertices & i2.int_vertices):
        raise PreconditionError("circuits neither share a dual edge nor overlap")
    # A shared dual edge has one endpoint in each interior, so the union is connected.
    union = i1.int_vertices | i2.int_vertices
    return outer_circuit(union)


def is_vacant(omega: LoopConfig, gamma: Circuit) -> bool:
    return not (omega.edges & dual_edges(gamma))


def ring(z: Hex) -> Circuit:
    """The circuit of the six neighbours of ``z``."""
    from .lattice import hex_neighbors
    return Circuit(hex_neighbors(z))
