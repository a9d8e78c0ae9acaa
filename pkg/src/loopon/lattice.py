"""Integer coordinates for the triangular lattice and its dual hexagonal lattice.

Hexagons (sites of the triangular lattice) are the primitive objects:

* a hexagon is a pair ``(a, b)`` embedded at ``a*(sqrt3, 1) + b*(0, 2)``;
* a vertex of the hexagonal lattice is the sorted triple of the three
  mutually adjacent hexagons around it;
* an edge of the hexagonal lattice is the sorted pair of the two hexagons
  it separates (so an edge *is* its dual triangular-lattice edge).

Tuples compare lexicographically, which gives the canonical order used for
every deterministic iteration and tie-break in the package.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Literal

Hex = tuple[int, int]
Vertex = tuple[Hex, Hex, Hex]
Edge = tuple[Hex, Hex]

# Counter-clockwise around a hexagon, starting at angle 30 degrees.
DIRECTIONS: tuple[Hex, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
# Offsets between nearest hexagons of the same color.
SUBLATTICE_DIRECTIONS: tuple[Hex, ...] = ((1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1))


def hex_color(z: Hex) -> int:
    """Color class of a hexagon; ``(0, 0)`` has color 0 and shift_up adds 1."""
    return (z[1] - z[0]) % 3


def hex_neighbors(z: Hex) -> list[Hex]:
    a, b = z
    return [(a + da, b + db) for da, db in DIRECTIONS]


def sublattice_neighbors(z: Hex) -> list[Hex]:
    a, b = z
    return [(a + da, b + db) for da, db in SUBLATTICE_DIRECTIONS]


def are_adjacent(y: Hex, z: Hex) -> bool:
    return (z[0] - y[0], z[1] - y[1]) in DIRECTIONS


def make_vertex(p: Hex, q: Hex, r: Hex) -> Vertex:
    return tuple(sorted((p, q, r)))  # type: ignore[return-value]


def make_edge(y: Hex, z: Hex) -> Edge:
    if not are_adjacent(y, z):
        raise ValueError(f"hexagons {y} and {z} are not adjacent")
    return (y, z) if y < z else (z, y)


def hexagon_edges(z: Hex) -> list[Edge]:
    """The six edges bordering ``z``, in cyclic order."""
    return [make_edge(z, w) for w in hex_neighbors(z)]


def hexagon_vertices(z: Hex) -> list[Vertex]:
    """The six vertices bordering ``z`` in cyclic order (consecutive ones adjacent)."""
    nb = hex_neighbors(z)
    return [make_vertex(z, nb[i], nb[(i + 1) % 6]) for i in range(6)]


def edge_endpoints(e: Edge) -> tuple[Vertex, Vertex]:
    y, z = e
    common = sorted(set(hex_neighbors(y)) & set(hex_neighbors(z)))
    return make_vertex(y, z, common[0]), make_vertex(y, z, common[1])


def vertex_edges(v: Vertex) -> list[Edge]:
    p, q, r = v
    return [(p, q), (p, r), (q, r)]


def vertex_neighbors(v: Vertex) -> list[Vertex]:
    """The three hexagonal-lattice neighbours of ``v``."""
    p, q, r = v
    out = []
    for x, y, w in ((p, q, r), (p, r, q), (q, r, p)):
        # reflect the third hexagon across the shared edge
        far = (x[0] + y[0] - w[0], x[1] + y[1] - w[1])
        out.append(make_vertex(x, y, far))
    return out


def hexcross_neighbors(v: Vertex) -> list[Vertex]:
    """Neighbours in the lattice augmented by the long diagonals of each hexagon."""
    out = vertex_neighbors(v)
    for i in range(3):
        c = v[i]
        o1, o2 = (v[j] for j in range(3) if j != i)
        out.append(make_vertex(c, (2 * c[0] - o1[0], 2 * c[1] - o1[1]),
                               (2 * c[0] - o2[0], 2 * c[1] - o2[1])))
    return out


def vertex_hexagon_of_color(v: Vertex, c: int) -> Hex:
    for z in v:
        if hex_color(z) == c:
            return z
    raise AssertionError(f"vertex {v} has no hexagon of color {c}")


def edge_colors(e: Edge) -> set[int]:
    return {hex_color(e[0]), hex_color(e[1])}


def in_ground_state(e: Edge, c: int) -> bool:
    """True iff ``e`` borders a hexagon of color ``c`` (so lies on the ground state)."""
    return hex_color(e[0]) == c or hex_color(e[1]) == c


# --- shifts ---------------------------------------------------------------

def _shift_hex(z: Hex, db: int) -> Hex:
    return (z[0], z[1] + db)


def _shift(obj, db: int):
    if isinstance(obj, (set, frozenset)):
        return type(obj)(_shift(o, db) for o in obj)
    if isinstance(obj, list):
        return [_shift(o, db) for o in obj]
    if isinstance(obj[0], int):
        return _shift_hex(obj, db)
    # vertex or edge: shifting preserves sorted order
    return tuple(_shift_hex(z, db) for z in obj)


def shift_up(obj):
    """Shift a hexagon, vertex, edge or a set/list of them by ``(a, b) -> (a, b + 1)``."""
    return _shift(obj, 1)


def shift_down(obj):
    return _shift(obj, -1)


# --- graphs ---------------------------------------------------------------

def connected_components(vertices: Iterable[Vertex],
                         adjacency: Literal["hex", "hexcross"] = "hex") -> list[set[Vertex]]:
    """Components of the induced subgraph, ordered by their smallest vertex."""
    todo = set(vertices)
    nbrs = vertex_neighbors if adjacency == "hex" else hexcross_neighbors
    comps = []
    for start in sorted(todo):
        if start not in todo:
            continue
        todo.discard(start)
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in nbrs(v):
                if w in todo:
                    todo.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def hexes_of_vertices(vertices: Iterable[Vertex]) -> set[Hex]:
    out: set[Hex] = set()
    for v in vertices:
        out.update(v)
    return out


def vertices_of_hexes(hexes: Iterable[Hex]) -> set[Vertex]:
    out: set[Vertex] = set()
    for z in hexes:
        out.update(hexagon_vertices(z))
    return out


def induced_edges(vertices: set[Vertex]) -> set[Edge]:
    out = set()
    for v in vertices:
        for e, w in zip(vertex_edges(v), _edge_partners(v)):
            if w in vertices:
                out.add(e)
    return out


def _edge_partners(v: Vertex) -> list[Vertex]:
    # other endpoints, aligned with vertex_edges(v)
    return vertex_neighbors(v)


def vertex_boundary(vertices: set[Vertex]) -> set[Vertex]:
    """Vertices of the set with a hexagonal-lattice neighbour outside it."""
    return {v for v in vertices if any(w not in vertices for w in vertex_neighbors(v))}


def hex_window(hexes: Iterable[Hex], margin: int) -> set[Hex]:
    """All hexagons of the bounding (a, b) box of ``hexes`` grown by ``margin``."""
    hexes = list(hexes)
    a0 = min(z[0] for z in hexes) - margin
    a1 = max(z[0] for z in hexes) + margin
    b0 = min(z[1] for z in hexes) - margin
    b1 = max(z[1] for z in hexes) + margin
    return {(a, b) for a in range(a0, a1 + 1) for b in range(b0, b1 + 1)}


def window_vertices(window: set[Hex]) -> set[Vertex]:
    """Vertices all of whose three hexagons lie in ``window``."""
    return {v for v in vertices_of_hexes(window) if all(z in window for z in v)}


# --- text ----------------------------------------------------------------

def format_hex(z: Hex) -> str:
    return f"({z[0]},{z[1]})"


def format_edge(e: Edge) -> str:
    y, z = sorted(e)
    return f"{format_hex(y)}-{format_hex(z)}"


def parse_hex(text: str) -> Hex:
    a, b = text.strip().strip("()").split(",")
    return (int(a), int(b))


def parse_edge(text: str) -> Edge:
    text = text.strip()
    head, tail = text.split(")-(")
    return make_edge(parse_hex(head + ")"), parse_hex("(" + tail))
