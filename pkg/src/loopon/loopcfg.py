"""Loop configurations, domains, boundary conditions and model weights."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Union

from .lattice import (
    Edge,
    Hex,
    Vertex,
    connected_components,
    edge_endpoints,
    format_edge,
    hex_color,
    hexagon_edges,
    hexagon_vertices,
    hexes_of_vertices,
    induced_edges,
    parse_edge,
    vertex_boundary,
    vertex_edges,
    vertex_neighbors,
    vertices_of_hexes,
)

INFINITY = math.inf


class ParityError(ValueError):
    def __init__(self, vertex: Vertex):
        super().__init__(f"vertex {vertex} has odd degree")
        self.vertex = vertex


class NotADomain(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class TooLarge(ValueError):
    pass


# --- configurations -------------------------------------------------------

@dataclass(frozen=True)
class LoopConfig:
    """An even subgraph of the hexagonal lattice, stored as a frozen edge set."""

    edges: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __contains__(self, e) -> bool:
        return e in self.edges

    def __xor__(self, other: "LoopConfig") -> "LoopConfig":
        return LoopConfig(self.edges ^ other.edges)

    def __or__(self, other: "LoopConfig") -> "LoopConfig":
        return LoopConfig(self.edges | other.edges)

    def restrict(self, edges: Iterable[Edge]) -> "LoopConfig":
        return LoopConfig(self.edges & frozenset(edges))

    def to_text(self) -> str:
        return "".join(format_edge(e) + "\n" for e in sorted(self.edges))

    @classmethod
    def from_text(cls, text: str) -> "LoopConfig":
        edges = set()
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                edges.add(parse_edge(line))
        return validate(edges)


def degrees(edges: Iterable[Edge]) -> Counter:
    deg: Counter = Counter()
    for e in edges:
        for v in edge_endpoints(e):
            deg[v] += 1
    return deg


def validate(edges: Iterable[Edge]) -> LoopConfig:
    """Return ``edges`` as a LoopConfig, raising ParityError at the first odd vertex."""
    edges = frozenset(edges)
    deg = degrees(edges)
    odd = sorted(v for v, d in deg.items() if d % 2)
    if odd:
        raise ParityError(odd[0])
    return LoopConfig(edges)


def loops_of(omega: LoopConfig | Iterable[Edge]) -> list[list[Edge]]:
    """Split a configuration into loops, each given as a cyclic edge sequence.

    Each loop starts at its smallest edge and loops are sorted by that edge.
    """
    edges = omega.edges if isinstance(omega, LoopConfig) else frozenset(omega)
    at: dict[Vertex, list[Edge]] = {}
    for e in edges:
        for v in edge_endpoints(e):
            at.setdefault(v, []).append(e)
    seen: set[Edge] = set()
    loops = []
    for start in sorted(edges):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        v0, v = edge_endpoints(start)
        prev = start
        while v != v0:
            nxt = [e for e in at[v] if e != prev]
            if len(nxt) != 1:
                raise ParityError(v)
            prev = nxt[0]
            loop.append(prev)
            seen.add(prev)
            a, b = edge_endpoints(prev)
            v = b if a == v else a
        loops.append(loop)
    return loops


def loop_vertices(loop: Iterable[Edge]) -> set[Vertex]:
    out: set[Vertex] = set()
    for e in loop:
        out.update(edge_endpoints(e))
    return out


def is_trivial_loop(loop: list[Edge]) -> bool:
    if len(loop) != 6:
        return False
    common = set(loop[0]).intersection(*map(set, loop[1:]))
    return len(common) == 1


def loop_surrounds(loop: Iterable[Edge], u: Vertex) -> bool:
    """Whether ``u`` lies on the loop or inside the bounded region it encloses.

    A vertex off the loop sits on the same side as its three hexagons, and a
    hexagon is inside iff a vertical ray from its centre crosses the loop an
    odd number of times.
    """
    loop = list(loop)
    if u in loop_vertices(loop):
        return True
    a, b = u[0]
    crossings = sum(1 for y, z in loop if y[0] == a and z[0] == a and y[1] >= b)
    return crossings % 2 == 1


# --- domains ---------------------------------------------------------------

class Domain:
    """A finite connected induced subgraph of the hexagonal lattice without holes."""

    def __init__(self, vertices: Iterable[Vertex], check: bool = True):
        self.vertices: frozenset = frozenset(vertices)
        if check:
            _check_domain(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Domain) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Domain({len(self.vertices)} vertices, {len(self.faces)} faces)"

    @classmethod
    def from_hexes(cls, hexes: Iterable[Hex]) -> "Domain":
        """The domain spanned by the vertices of the given hexagons."""
        return cls(vertices_of_hexes(hexes))

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(induced_edges(set(self.vertices)))

    @cached_property
    def faces(self) -> tuple:
        """Hexagons with all six vertices in the domain, sorted."""
        cands = hexes_of_vertices(self.vertices)
        return tuple(sorted(z for z in cands
                            if all(v in self.vertices for v in hexagon_vertices(z))))

    @cached_property
    def boundary_edges(self) -> frozenset:
        """Edges with exactly one endpoint in the domain (the dual circuit edges)."""
        out = set()
        for v in self.vertices:
            for e, w in zip(vertex_edges(v), vertex_neighbors(v)):
                if w not in self.vertices:
                    out.add(e)
        return frozenset(out)

    @cached_property
    def circuit(self):
        from .circuits import circuit_of_domain
        return circuit_of_domain(self)

    @cached_property
    def inner_boundary(self) -> frozenset:
        return frozenset(vertex_boundary(set(self.vertices)))


def _check_domain(vertices: frozenset) -> None:
    if not vertices:
        raise NotADomain("domain is empty")
    if len(connected_components(vertices)) != 1:
        raise NotADomain("domain is not connected")
    # Complement connectivity: the boundary edges must close into one circuit,
    # which circuit_of_domain verifies; here check holes via a window flood.
    from .lattice import hex_window, window_vertices
    window = hex_window(hexes_of_vertices(vertices), 2)
    outside = window_vertices(window) - vertices
    if len(connected_components(outside)) != 1:
        raise NotADomain("domain complement is not connected")


def single_hexagon_domain(z: Hex = (0, 0)) -> Domain:
    return Domain(hexagon_vertices(z))


def flower_domain(z: Hex = (0, 0)) -> Domain:
    """The seven-hexagon domain: ``z`` together with its six neighbours."""
    from .lattice import hex_neighbors
    return Domain.from_hexes([z, *hex_neighbors(z)])


# --- boundary conditions and parameters -----------------------------------

@dataclass(frozen=True)
class BoundaryCondition:
    kind: str  # "vacant", "ground" or "explicit"
    color: Optional[int] = None
    xi: Optional[LoopConfig] = None

    @classmethod
    def vacant(cls) -> "BoundaryCondition":
        return cls("vacant")

    @classmethod
    def ground(cls, c: int) -> "BoundaryCondition":
        if c not in (0, 1, 2):
            raise ValueError(f"bad color {c}")
        return cls("ground", color=c)

    @classmethod
    def explicit(cls, xi: LoopConfig) -> "BoundaryCondition":
        return cls("explicit", xi=xi)

    @property
    def is_vacant(self) -> bool:
        return self.kind == "vacant" or (self.kind == "explicit" and not self.xi.edges)

    def outside_edges(self, domain: Domain, margin: int = 2) -> frozenset:
        """Edges of the boundary configuration outside E(H), within a window of H."""
        if self.kind == "vacant":
            return frozenset()
        if self.kind == "ground":
            from .lattice import hex_window
            window = hex_window(hexes_of_vertices(domain.vertices), margin)
            gs = ground_state(self.color, window).edges
            return frozenset(gs - domain.edges)
        return frozenset(self.xi.edges - domain.edges)

    def label(self) -> str:
        if self.kind == "ground":
            return f"gnd{self.color}"
        return self.kind


Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class ModelParams:
    n: Number
    x: Number

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError("n must be positive")
        if not self.x > 0:
            raise ValueError("x must be positive or infinite")

    @property
    def infinite(self) -> bool:
        return self.x == INFINITY


class Packed(NamedTuple):
    """Weight at x = infinity: compare by edge count first, then by n**L."""
    o: int
    L: int


# --- observables on configurations ----------------------------------------

def count_edges(omega: LoopConfig, domain: Domain) -> int:
    return len(omega.edges & domain.edges)


def count_loops(omega: LoopConfig, domain: Domain) -> int:
    return sum(1 for loop in loops_of(omega) if any(e in domain.edges for e in loop))


def ground_state(c: int, window: Iterable[Hex]) -> LoopConfig:
    edges: set[Edge] = set()
    for z in window:
        if hex_color(z) == c:
            edges.update(hexagon_edges(z))
    return LoopConfig(frozenset(edges))


def domain_type(domain: Domain) -> set[int]:
    """Colors c such that no ground-state-c edge crosses the domain boundary."""
    return {c for c in range(3)
            if not any(hex_color(y) == c or hex_color(z) == c
                       for y, z in domain.boundary_edges)}


def log_weight(omega: LoopConfig, domain: Domain, params: ModelParams):
    o = count_edges(omega, domain)
    L = count_loops(omega, domain)
    if params.infinite:
        return Packed(o, L)
    return o * math.log(params.x) + L * math.log(params.n)


def is_fully_packed(omega: LoopConfig, domain: Domain) -> bool:
    deg = degrees(omega.edges)
    return all(deg[v] == 2 for v in domain.vertices)


def flood_outside(blocked: set[Vertex], start: Vertex, limit: int) -> bool:
    """True if a path from ``start`` avoiding ``blocked`` gets ``limit`` steps away."""
    seen = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if seen[v] >= limit:
            return True
        for w in vertex_neighbors(v):
            if w not in blocked and w not in seen:
                seen[w] = seen[v] + 1
                queue.append(w)
    return False


def rect_domain(width: int, height: int, c: int = 0) -> Domain:
    """Parallelogram domain of type ``c``: the vertices of the color-``c`` hexagons in the box."""
    hexes = [(a, b) for a in range(width) for b in range(height) if hex_color((a, b)) == c]
    if not hexes:
        raise NotADomain("box contains no hexagon of the requested color")
    return Domain.from_hexes(hexes)
