"""Flowers, gardens, clusters, the repair map and breakups.

Gardens are found constructively.  For a circuit avoiding color ``c`` the
interior vertex set is exactly V(S) for the set S of color-``c`` hexagons it
encloses, and the color-``c`` hexagons on the boundary of its interior
hexagons are the boundary of S in the color-``c`` sublattice.  So a c-garden
is a sublattice-connected, hole-free S whose sublattice boundary consists of
flowers, and the maximal ones are the hole-fillings of the sublattice
components of the c-flowers.  The test-suite checks this against a
brute-force scan over circuits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .circuits import (
    Circuit,
    circuit_of_vertices,
    interior,
    is_vacant,
)
from .lattice import (
    Edge,
    Hex,
    Vertex,
    connected_components,
    edge_endpoints,
    hex_color,
    hex_window,
    hexagon_edges,
    hexagon_vertices,
    hexes_of_vertices,
    shift_down,
    shift_up,
    sublattice_neighbors,
    vertex_edges,
    vertex_hexagon_of_color,
    vertex_neighbors,
    vertices_of_hexes,
    window_vertices,
)
from .loopcfg import LoopConfig, PreconditionError, ground_state, loops_of, validate


class IdentityViolation(AssertionError):
    pass


class InvarianceError(ValueError):
    pass


class WindowError(ValueError):
    pass


def is_flower(omega: LoopConfig | frozenset, z: Hex) -> bool:
    edges = omega.edges if isinstance(omega, LoopConfig) else omega
    return all(e in edges for e in hexagon_edges(z))


@dataclass(frozen=True)
class Garden:
    c: int
    sigma: Circuit
    hexes: frozenset          # color-c hexagons enclosed by sigma
    vertices: frozenset       # IntVert sigma
    edges: frozenset          # IntEdge sigma together with sigma*


def garden_from_hexes(c: int, hexes: Iterable[Hex]) -> Garden:
    S = frozenset(hexes)
    verts = frozenset(vertices_of_hexes(S))
    sigma = circuit_of_vertices(verts)
    edges = set()
    for v in verts:
        edges.update(vertex_edges(v))
    return Garden(c, sigma, S, verts, frozenset(edges))


def _sublattice_components(hexes: set[Hex]) -> list[set[Hex]]:
    todo = set(hexes)
    comps = []
    for start in sorted(todo):
        if start not in todo:
            continue
        todo.discard(start)
        comp = {start}
        queue = deque([start])
        while queue:
            z = queue.popleft()
            for w in sublattice_neighbors(z):
                if w in todo:
                    todo.discard(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def sublattice_fill(K: set[Hex]) -> frozenset:
    """K together with the finite holes of its complement in its color class."""
    c = hex_color(next(iter(K)))
    window = {z for z in hex_window(K, 3) if hex_color(z) == c}
    rest = window - K
    out = set(K)
    for comp in _sublattice_components(rest):
        if not any(w not in window for z in comp for w in sublattice_neighbors(z)):
            out |= comp
    return frozenset(out)


def maximal_gardens(flowers: Iterable[Hex]) -> list[Garden]:
    """Maximal gardens of each color given the set of flower hexagons."""
    by_color: dict[int, set[Hex]] = {0: set(), 1: set(), 2: set()}
    for z in flowers:
        by_color[hex_color(z)].add(z)
    out = []
    for c in range(3):
        fills = [sublattice_fill(K) for K in _sublattice_components(by_color[c])]
        for i, S in enumerate(fills):
            if any(j != i and S < T for j, T in enumerate(fills)):
                continue
            out.append(garden_from_hexes(c, S))
    return out


@dataclass
class ClusterDecomposition:
    gamma: Circuit
    clusters: list
    E: tuple                  # (E0, E1, E2)
    E_bad: frozenset
    E_bar: frozenset
    V: frozenset
    V_prime: frozenset
    dbl: frozenset
    omega_inside: frozenset
    cluster_of: dict = field(repr=False, default_factory=dict)

    @property
    def E0(self) -> frozenset:
        return self.E[0]

    @property
    def E1(self) -> frozenset:
        return self.E[1]

    @property
    def E2(self) -> frozenset:
        return self.E[2]


def clusters_inside(omega: LoopConfig, gamma: Circuit) -> ClusterDecomposition:
    if not is_vacant(omega, gamma):
        raise PreconditionError("circuit is not vacant in the configuration")
    ie = interior(gamma)
    inside = omega.edges & ie.int_edges
    flowers = [z for z in ie.int_hexagons if is_flower(inside, z)]
    gardens = maximal_gardens(flowers)
    clusters = [g for g in gardens
                if not any(h.c != g.c and g.edges <= h.edges for h in gardens)]
    clusters.sort(key=lambda g: (g.c, min(g.hexes)))

    cluster_of: dict[Edge, int] = {}
    E = [set(), set(), set()]
    for i, g in enumerate(clusters):
        for e in g.edges:
            cluster_of[e] = i
        E[g.c] |= g.edges
    E = tuple(frozenset(s) for s in E)
    region = ie.int_edges | ie.dual
    E_bad = region - (E[0] | shift_down(E[1]) | shift_up(E[2]))
    E_bar = region - (E[0] | E[1] | E[2])

    V = set()
    for v in ie.int_vertices:
        ids = {cluster_of.get(e, -1) for e in vertex_edges(v)}
        if len(ids) > 1 or ids == {-1}:
            V.add(v)
    V_prime = frozenset(v for v in V if not any(e in inside for e in vertex_edges(v)))

    dbl = set()
    for zu in hexes_of_vertices(ie.int_vertices):
        z = shift_down(zu)
        if all(e in E[1] for e in hexagon_edges(zu)) and \
                all(e in E[2] for e in hexagon_edges(shift_down(z))):
            dbl.add(z)

    return ClusterDecomposition(gamma, clusters, E, E_bad, E_bar, frozenset(V),
                                V_prime, frozenset(dbl), frozenset(inside), cluster_of)


# --- repair map ----------------------------------------------------------

def _check_repair_pre(omega: LoopConfig, gamma: Circuit) -> None:
    if not gamma.avoids(0):
        raise PreconditionError("repair map needs a circuit avoiding color 0")
    if not omega.edges <= interior(gamma).int_edges:
        raise PreconditionError("configuration has edges outside the circuit interior")


def ground0_on(edges: Iterable[Edge]) -> frozenset:
    return frozenset(e for e in edges if hex_color(e[0]) == 0 or hex_color(e[1]) == 0)


def repair_map(omega: LoopConfig, gamma: Circuit,
               decomposition: Optional[ClusterDecomposition] = None) -> LoopConfig:
    _check_repair_pre(omega, gamma)
    d = decomposition or clusters_inside(omega, gamma)
    w = omega.edges
    out = (w & d.E0) | shift_down(w & d.E1) | shift_up(w & d.E2) | ground0_on(d.E_bad)
    return LoopConfig(frozenset(out))


def repair_pieces(omega: LoopConfig, d: ClusterDecomposition) -> list[frozenset]:
    w = omega.edges
    return [w & d.E0, shift_down(w & d.E1), shift_up(w & d.E2), ground0_on(d.E_bad)]


@dataclass(frozen=True)
class WeightDelta:
    d_o: int
    d_L: int
    V: frozenset
    V_prime: frozenset
    dbl: frozenset


def _loops_count(edges: Iterable[Edge]) -> int:
    return len(loops_of(frozenset(edges)))


def weight_delta(omega: LoopConfig, gamma: Circuit, check: bool = True,
                 decomposition: Optional[ClusterDecomposition] = None) -> WeightDelta:
    d = decomposition or clusters_inside(omega, gamma)
    r = repair_map(omega, gamma, d)
    d_o = len(r.edges) - len(omega.edges)
    d_L = _loops_count(r.edges) - _loops_count(omega.edges)
    if check:
        nV, nVp = len(d.V), len(d.V_prime)
        if d_o != nVp:
            raise IdentityViolation(f"edge gain {d_o} != |V'| = {nVp}")
        bar = _loops_count(omega.edges & d.E_bar)
        if Fraction(d_L) != Fraction(nV, 6) - bar:
            raise IdentityViolation(f"loop gain {d_L} != |V|/6 - {bar} with |V| = {nV}")
        if Fraction(d_L) < Fraction(nV, 15) + Fraction(nVp, 10):
            raise IdentityViolation(f"loop gain {d_L} below |V|/15 + |V'|/10")
    return WeightDelta(d_o, d_L, d.V, d.V_prime, d.dbl)


LoopFunctional = Callable[[list], float]


def functional_value(phi: LoopFunctional, edges: Iterable[Edge]) -> float:
    return sum(phi(loop) for loop in loops_of(frozenset(edges)))


def functional_delta(phi: LoopFunctional, omega: LoopConfig, gamma: Circuit,
                     decomposition: Optional[ClusterDecomposition] = None):
    """phi(R omega) - phi(omega) for an additive loop functional, with the identity checked."""
    for loop in loops_of(omega)[:4]:
        if phi(shift_up(loop)) != phi(loop):
            raise InvarianceError("functional is not invariant under the shift")
    d = decomposition or clusters_inside(omega, gamma)
    r = repair_map(omega, gamma, d)
    delta = functional_value(phi, r.edges) - functional_value(phi, omega.edges)
    hex_value = phi(hexagon_edges((0, 0)))
    expected = Fraction(hex_value) * Fraction(len(d.V), 6) - functional_value(phi, omega.edges & d.E_bar)
    if delta != expected:
        raise IdentityViolation(f"functional change {delta} != {expected}")
    return delta


def bad_vertices(d: ClusterDecomposition) -> frozenset:
    iv = interior(d.gamma).int_vertices
    out = set()
    for e in d.E_bad:
        out.update(v for v in edge_endpoints(e) if v in iv)
    return frozenset(out)


def vbad_identity_check(omega: LoopConfig, gamma: Circuit,
                        decomposition: Optional[ClusterDecomposition] = None):
    d = decomposition or clusters_inside(omega, gamma)
    vb = bad_vertices(d)
    if len(vb) != len(d.V) + 6 * len(d.dbl):
        raise IdentityViolation(f"|V_bad| = {len(vb)} != {len(d.V)} + 6*{len(d.dbl)}")
    return len(vb), len(d.V), len(d.dbl)


# --- breakups --------------------------------------------------------------

@dataclass(frozen=True)
class Breakup:
    component: frozenset
    boundary: frozenset


def breakup(omega: LoopConfig, u: Vertex, window: Iterable[Hex]) -> Breakup:
    """Breakup of ``u`` when ``omega`` is taken to be the 0-ground state off ``window``."""
    window = set(window)
    big = hex_window(window, 3)
    gs = ground_state(0, big).edges

    def inside(e: Edge) -> bool:
        return e[0] in window and e[1] in window

    stray = [e for e in omega.edges if not inside(e) and e not in gs]
    if stray:
        raise WindowError(f"edge {min(stray)} outside the window differs from the 0-phase")
    full = {e for e in omega.edges if inside(e)} | {e for e in gs if not inside(e)}
    verts = window_vertices(big)
    A = set()
    for z in big:
        if hex_color(z) == 0 and is_flower(full, z):
            A.update(hexagon_vertices(z))
    A &= verts
    rim = {v for v in verts if any(w not in verts for w in vertex_neighbors(v))}
    if not rim <= A:
        raise WindowError("window rim is not in the 0-phase")
    B = set()
    for comp in connected_components(A):
        if comp & rim:
            B |= comp
    if u in B:
        return Breakup(frozenset(), frozenset())
    comp = next(c for c in connected_components(verts - B) if u in c)
    if comp & rim:
        raise WindowError("breakup reaches the window rim")
    boundary = {v for v in comp if any(w not in comp for w in vertex_neighbors(v))}
    return Breakup(frozenset(comp), frozenset(boundary))


# --- capturing circuits ------------------------------------------------------

def _on_trivial_loop(omega: LoopConfig, v: Vertex) -> bool:
    return any(is_flower(omega, z) for z in v)


def find_capturing_circuit(omega: LoopConfig, c: int, gamma: Circuit,
                           U: Iterable[Vertex]) -> tuple[int, Circuit]:
    """Descend from ``gamma`` to a vacant circuit whose bad-vertex set contains U and its boundary."""
    U = frozenset(U)
    if not U:
        raise PreconditionError("U is empty")
    if not gamma.avoids(c):
        raise PreconditionError(f"circuit meets color {c}")
    if not is_vacant(omega, gamma):
        raise PreconditionError("circuit is not vacant")
    if not U <= interior(gamma).int_vertices:
        raise PreconditionError("U is not inside the circuit")
    if len(connected_components(U)) != 1:
        raise PreconditionError("U is not connected")
    if any(_on_trivial_loop(omega, v) for v in U):
        raise PreconditionError("a vertex of U lies on a trivial loop")

    while True:
        ie = interior(gamma)
        d = clusters_inside(omega, gamma)
        bnd = ie.boundary_vertices
        if bnd <= d.V:
            if U <= d.V:
                return c, gamma
            ids = {d.cluster_of.get(e) for v in U for e in vertex_edges(v)}
            if len(ids) != 1 or None in ids:
                raise AssertionError("edges at U are not in a single cluster")
            g = d.clusters[ids.pop()]
            c, gamma = g.c, g.sigma
            continue
        u = min(bnd - d.V)
        z = vertex_hexagon_of_color(u, c)
        if not is_flower(omega, z):
            raise AssertionError(f"boundary vertex {u} does not border a {c}-flower")
        rest = ie.int_vertices - set(hexagon_vertices(z))
        comp = next(cc for cc in connected_components(rest) if U <= cc)
        gamma = circuit_of_vertices(comp)


# --- exhaustive identity sweep ------------------------------------------------

FUNCTIONALS: dict[str, LoopFunctional] = {
    "one": lambda loop: 1,
    "length": lambda loop: len(loop),
    "length2": lambda loop: len(loop) ** 2,
}


@dataclass
class SweepReport:
    configs: int = 0
    violations: dict = field(default_factory=dict)
    first_failure: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def record(self, name: str, failed: bool, omega=None) -> None:
        self.violations[name] = self.violations.get(name, 0) + int(failed)
        if failed and self.first_failure is None:
            self.first_failure = (name, omega)


def check_repair_identities(omega: LoopConfig, gamma: Circuit, report: SweepReport) -> None:
    """Run every per-configuration repair-map identity, recording failures in ``report``."""
    ie = interior(gamma)
    d = clusters_inside(omega, gamma)
    r = repair_map(omega, gamma, d)
    pieces = repair_pieces(omega, d)
    disjoint = all(not (pieces[i] & pieces[j]) for i in range(4) for j in range(i + 1, 4)
                   if not (i, j) == (1, 2))
    try:
        validate(r.edges)
        valid = r.edges <= ie.int_edges
    except ValueError:
        valid = False
    report.record("repair-valid", not (valid and disjoint), omega)
    e12 = pieces[1] & pieces[2]
    dbl_edges = frozenset(e for z in d.dbl for e in hexagon_edges(z))
    report.record("double-clustered", e12 != dbl_edges or any(hex_color(z) for z in d.dbl), omega)
    for name, fn in (("weight-delta", lambda: weight_delta(omega, gamma, True, d)),
                     ("vbad", lambda: vbad_identity_check(omega, gamma, d))):
        try:
            fn()
            report.record(name, False)
        except IdentityViolation:
            report.record(name, True, omega)
    for name, phi in FUNCTIONALS.items():
        try:
            functional_delta(phi, omega, gamma, d)
            report.record(f"functional-{name}", False)
        except IdentityViolation:
            report.record(f"functional-{name}", True, omega)


def repair_sweep(domain, cap: int = 16) -> SweepReport:
    """Check the repair-map identities on every vacant-boundary configuration of a type-0 domain."""
    from .exact import enumerate_configs
    gamma = domain.circuit
    if not gamma.avoids(0):
        raise PreconditionError("repair sweep needs a domain of type 0")
    report = SweepReport()
    for omega in enumerate_configs(domain, cap=cap):
        report.configs += 1
        check_repair_identities(omega, gamma, report)
    return report
