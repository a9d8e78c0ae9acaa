"""Exhaustive enumeration of loop configurations on small domains.

Configurations with a fixed boundary condition form a coset of the cycle
space of the domain, which is spanned by the boundaries of its interior
hexagons.  Walking the coset in Gray-code order changes one face per step;
a compiled kernel records (o, L) for every configuration so that
partition functions, marginals and distances are cheap numpy reductions.

Configuration ``i`` of a sweep is ``particular ^ (faces in gray(i))`` with
``gray(i) = i ^ (i >> 1)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Optional

import networkx as nx
import numpy as np
from numba import njit

from .lattice import (
    Edge,
    Hex,
    Vertex,
    edge_endpoints,
    hex_neighbors,
    hexagon_edges,
    vertex_edges,
    vertex_neighbors,
)
from .loopcfg import (
    BoundaryCondition,
    Domain,
    LoopConfig,
    ModelParams,
    PreconditionError,
    TooLarge,
    loop_surrounds,
    loops_of,
)

DEFAULT_CAP = 24


class InconsistentBoundary(ValueError):
    pass


class NoPath(ValueError):
    pass


def gray(i):
    return i ^ (i >> 1)


# --- compiled sweep ----------------------------------------------------------

@njit(cache=True)
def _count_loops(on, inner, ends, vert_edges, stamp, tag):
    L = 0
    for e0 in range(on.shape[0]):
        if not on[e0] or not inner[e0] or stamp[e0] == tag:
            continue
        L += 1
        stamp[e0] = tag
        start = ends[e0, 0]
        v = ends[e0, 1]
        prev = e0
        while v != start:
            nxt = -1
            for k in range(3):
                f = vert_edges[v, k]
                if f >= 0 and f != prev and on[f]:
                    nxt = f
                    break
            if nxt < 0:
                break  # open path; not a loop
            stamp[nxt] = tag
            prev = nxt
            v = ends[nxt, 0] if ends[nxt, 1] == v else ends[nxt, 1]
    return L


@njit(cache=True)
def _sweep(nfaces, face_edges, inner, start_on, ends, vert_edges, out_o, out_L):
    on = start_on.copy()
    stamp = np.zeros(on.shape[0], np.int64)
    o = 0
    for e in range(on.shape[0]):
        if on[e] and inner[e]:
            o += 1
    total = 1 << nfaces
    for i in range(total):
        if i > 0:
            f = 0
            j = i
            while (j & 1) == 0:
                j >>= 1
                f += 1
            for k in range(6):
                e = face_edges[f, k]
                if on[e]:
                    on[e] = False
                    o -= 1
                else:
                    on[e] = True
                    o += 1
        out_o[i] = o
        out_L[i] = _count_loops(on, inner, ends, vert_edges, stamp, i + 1)


# --- domain index --------------------------------------------------------------

class DomainIndex:
    """Dense indexing of a domain plus the frozen outside edges of a boundary condition."""

    def __init__(self, domain: Domain, bc: BoundaryCondition = BoundaryCondition.vacant(),
                 cap: int = DEFAULT_CAP):
        self.domain = domain
        self.bc = bc
        self.faces: tuple = domain.faces
        if len(self.faces) > cap:
            raise TooLarge(f"domain has {len(self.faces)} interior faces; cap is {cap}")
        self.inner_edges = sorted(domain.edges)
        outside = sorted(bc.outside_edges(domain))
        self.outside_edges = outside
        self.edges = self.inner_edges + outside
        self.edge_id = {e: i for i, e in enumerate(self.edges)}
        verts = sorted({v for e in self.edges for v in edge_endpoints(e)})
        self.vertex_id = {v: i for i, v in enumerate(verts)}
        self.vertices = verts
        ne = len(self.edges)
        self.ends = np.array([[self.vertex_id[v] for v in edge_endpoints(e)] for e in self.edges],
                             dtype=np.int64).reshape(ne, 2)
        ve = -np.ones((len(verts), 3), dtype=np.int64)
        fill = np.zeros(len(verts), dtype=np.int64)
        for i, (a, b) in enumerate(self.ends):
            for v in (a, b):
                ve[v, fill[v]] = i
                fill[v] += 1
        self.vert_edges = ve
        self.inner = np.zeros(ne, dtype=np.bool_)
        self.inner[: len(self.inner_edges)] = True
        self.face_edges = np.array([[self.edge_id[e] for e in hexagon_edges(z)] for z in self.faces],
                                   dtype=np.int64).reshape(len(self.faces), 6)
        self.face_masks = [sum(1 << self.edge_id[e] for e in hexagon_edges(z)) for z in self.faces]
        self.particular = self._particular()

    @property
    def nfaces(self) -> int:
        return len(self.faces)

    def _particular(self) -> frozenset:
        """An inner edge set that makes every domain vertex even together with the outside edges."""
        if not self.outside_edges:
            return frozenset()
        deg: dict[Vertex, int] = {}
        for e in self.outside_edges:
            for v in edge_endpoints(e):
                deg[v] = deg.get(v, 0) + 1
        odd = {v for v in self.domain.vertices if deg.get(v, 0) % 2}
        if len(odd) % 2:
            raise InconsistentBoundary("odd number of parity defects on the domain")
        return frozenset(t_join(self.domain.vertices, odd))

    def config_edges(self, code: int) -> frozenset:
        edges = set(self.particular)
        for f in range(self.nfaces):
            if code >> f & 1:
                edges ^= set(hexagon_edges(self.faces[f]))
        return frozenset(edges)

    def full_config(self, code: int) -> LoopConfig:
        return LoopConfig(self.config_edges(code) | frozenset(self.outside_edges))

    @cached_property
    def stats(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays (o, L) indexed by Gray-sweep position."""
        total = 1 << self.nfaces
        out_o = np.zeros(total, dtype=np.int32)
        out_L = np.zeros(total, dtype=np.int32)
        start = np.zeros(len(self.edges), dtype=np.bool_)
        for e in self.particular:
            start[self.edge_id[e]] = True
        start[len(self.inner_edges):] = True
        _sweep(self.nfaces, self.face_edges, self.inner, start, self.ends, self.vert_edges,
               out_o, out_L)
        return out_o, out_L

    @cached_property
    def codes(self) -> np.ndarray:
        i = np.arange(1 << self.nfaces, dtype=np.int64)
        return i ^ (i >> 1)

    def histogram(self) -> dict[tuple[int, int], int]:
        o, L = self.stats
        key = o.astype(np.int64) * 4096 + L
        vals, counts = np.unique(key, return_counts=True)
        return {(int(v) // 4096, int(v) % 4096): int(c) for v, c in zip(vals, counts)}


def t_join(vertices: Iterable[Vertex], odd: set[Vertex]) -> set[Edge]:
    """Edges of a BFS spanning tree whose odd-degree vertices are exactly ``odd``."""
    vs = set(vertices)
    root = min(vs)
    parent: dict[Vertex, Optional[tuple[Vertex, Edge]]] = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e, w in sorted(zip(vertex_edges(v), vertex_neighbors(v)), key=lambda t: t[1]):
            if w in vs and w not in parent:
                parent[w] = (v, e)
                order.append(w)
                queue.append(w)
    need = {v: (v in odd) for v in vs}
    out = set()
    for v in reversed(order):
        if parent[v] is None:
            continue
        if need[v]:
            p, e = parent[v]
            out.add(e)
            need[p] = not need[p]
    return out


# --- enumeration API ----------------------------------------------------------

def enumerate_configs(domain: Domain, bc: BoundaryCondition = BoundaryCondition.vacant(),
                      cap: int = DEFAULT_CAP) -> list[LoopConfig]:
    """All configurations of LoopConf(H, xi), restricted to E(H), in face-code order."""
    idx = DomainIndex(domain, bc, cap)
    return [LoopConfig(idx.config_edges(code)) for code in range(1 << idx.nfaces)]


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _weights(idx: DomainIndex, p: ModelParams) -> np.ndarray:
    """Unnormalised probabilities by sweep position (max-scaled floats)."""
    o, L = idx.stats
    if p.infinite:
        top = o.max()
        w = np.where(o == top, np.power(float(p.n), L.astype(float)), 0.0)
        return w / w.sum()
    lw = o * math.log(float(p.x)) + L * math.log(float(p.n))
    lw -= lw.max()
    w = np.exp(lw)
    return w / w.sum()


def partition_function(domain: Domain, bc: BoundaryCondition, p: ModelParams,
                       cap: int = DEFAULT_CAP) -> float:
    """log Z; at x = infinity the sum runs over the optimally packed configurations only."""
    hist = DomainIndex(domain, bc, cap).histogram()
    if p.infinite:
        top = max(o for o, _ in hist)
        terms = [math.log(c) + L * math.log(p.n) for (o, L), c in hist.items() if o == top]
    else:
        terms = [math.log(c) + o * math.log(p.x) + L * math.log(p.n) for (o, L), c in hist.items()]
    m = max(terms)
    return m + math.log(math.fsum(math.exp(t - m) for t in terms))


def partition_function_exact(domain: Domain, bc: BoundaryCondition, p: ModelParams,
                             cap: int = DEFAULT_CAP) -> Fraction:
    if not _is_exact(p.n) or not (p.infinite or _is_exact(p.x)):
        raise TypeError("exact partition function needs integer or Fraction parameters")
    hist = DomainIndex(domain, bc, cap).histogram()
    n = Fraction(p.n)
    if p.infinite:
        top = max(o for o, _ in hist)
        return sum((c * n ** L for (o, L), c in hist.items() if o == top), Fraction(0))
    x = Fraction(p.x)
    return sum((c * x ** o * n ** L for (o, L), c in hist.items()), Fraction(0))


@dataclass
class EnumeratedMeasure:
    domain: Domain
    bc: BoundaryCondition
    params: ModelParams
    index: DomainIndex
    probs: np.ndarray          # by face code

    def configs(self):
        for code in range(len(self.probs)):
            yield code, LoopConfig(self.index.config_edges(code))

    @property
    def log_Z(self) -> float:
        return partition_function(self.domain, self.bc, self.params)


def measure(domain: Domain, bc: BoundaryCondition, p: ModelParams,
            cap: int = DEFAULT_CAP) -> EnumeratedMeasure:
    idx = DomainIndex(domain, bc, cap)
    w = _weights(idx, p)
    probs = np.zeros_like(w)
    probs[idx.codes] = w
    return EnumeratedMeasure(domain, bc, p, idx, probs)


def exact_weights(domain: Domain, bc: BoundaryCondition, p: ModelParams,
                  cap: int = DEFAULT_CAP) -> dict[int, Fraction]:
    """Exact normalised probabilities keyed by face code (rational parameters only)."""
    idx = DomainIndex(domain, bc, cap)
    o, L = idx.stats
    n = Fraction(p.n)
    if p.infinite:
        top = int(o.max())
        raw = {int(c): (n ** int(l) if oo == top else Fraction(0))
               for c, oo, l in zip(idx.codes, o, L)}
    else:
        x = Fraction(p.x)
        raw = {int(c): x ** int(oo) * n ** int(l) for c, oo, l in zip(idx.codes, o, L)}
    Z = sum(raw.values())
    return {c: w / Z for c, w in raw.items()}


def probability(domain: Domain, bc: BoundaryCondition, p: ModelParams,
                event: Callable[[LoopConfig], bool],
                given: Optional[Callable[[LoopConfig], bool]] = None,
                cap: int = DEFAULT_CAP) -> float:
    """Probability of ``event``, optionally conditioned on ``given``."""
    m = measure(domain, bc, p, cap)
    num = den = 0.0
    for code, omega in m.configs():
        pr = m.probs[code]
        if pr == 0.0:
            continue
        if given is not None and not given(omega):
            continue
        den += pr
        if event(omega):
            num += pr
    if den == 0.0:
        raise ZeroDivisionError("conditioning event has probability zero")
    return num / den


# --- configurations with two odd vertices ---------------------------------------

def lex_bfs_path(edges: Iterable[Edge], u: Vertex, v: Vertex) -> list[Edge]:
    """Shortest u-v path in the edge set, ties broken by visiting neighbours in sorted order."""
    edges = frozenset(edges)
    prev: dict[Vertex, Optional[tuple[Vertex, Edge]]] = {u: None}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        if a == v:
            break
        for e, w in sorted(zip(vertex_edges(a), vertex_neighbors(a)), key=lambda t: t[1]):
            if e in edges and w not in prev:
                prev[w] = (a, e)
                queue.append(w)
    if v not in prev:
        raise NoPath(f"no path between {u} and {v}")
    path = []
    cur = v
    while prev[cur] is not None:
        a, e = prev[cur]
        path.append(e)
        cur = a
    return path[::-1]


def enumerate_odd(domain: Domain, u: Vertex, v: Vertex, cap: int = DEFAULT_CAP) -> list[frozenset]:
    if u == v:
        raise PreconditionError("u and v must differ")
    if u not in domain.vertices or v not in domain.vertices:
        raise PreconditionError("u and v must lie in the domain")
    base = frozenset(lex_bfs_path(domain.edges, u, v))
    idx = DomainIndex(domain, BoundaryCondition.vacant(), cap)
    return [base ^ idx.config_edges(code) for code in range(1 << idx.nfaces)]


def J_factor(lam: Iterable[Edge], u: Vertex, v: Vertex, n) -> float:
    G = nx.Graph()
    for e in lam:
        G.add_edge(*edge_endpoints(e))
    if u in G and v in G and nx.algorithms.connectivity.local_edge_connectivity(G, u, v) >= 3:
        return 3 * n / (n + 2)
    return 1


def reduced_loop_count(lam: Iterable[Edge], u: Vertex, v: Vertex) -> int:
    lam = frozenset(lam)
    rest = lam - frozenset(lex_bfs_path(lam, u, v))
    return len(loops_of(rest))


def spin_spin_ratio(domain: Domain, u: Vertex, v: Vertex, p: ModelParams,
                    cap: int = DEFAULT_CAP) -> float:
    if p.infinite:
        raise PreconditionError("the spin-spin ratio needs finite x")
    n, x = p.n, p.x
    num = 0.0
    for lam in enumerate_odd(domain, u, v, cap):
        num += x ** len(lam) * n ** reduced_loop_count(lam, u, v) * J_factor(lam, u, v, n)
    return num / math.exp(partition_function(domain, BoundaryCondition.vacant(), p, cap))


# --- checks -------------------------------------------------------------------

@dataclass
class PeierlsReport:
    checked: int
    violations: int
    max_ratio: float


def _superset_probs(m: EnumeratedMeasure) -> np.ndarray:
    """P(A subset of omega) for every face code A, by a superset-sum transform on edge masks."""
    idx = m.index
    total = 1 << idx.nfaces
    emask = [int(sum(1 << idx.edge_id[e] for e in idx.config_edges(c))) for c in range(total)]
    out = np.zeros(total)
    for a in range(total):
        ma = emask[a]
        out[a] = sum(m.probs[c] for c in range(total) if emask[c] & ma == ma)
    return out


def peierls_check(domain: Domain, bc: BoundaryCondition, p: ModelParams,
                  cap: int = 16) -> PeierlsReport:
    """Check P(A in omega) <= n^L(A) x^o(A) for every vacant-boundary configuration A."""
    m = measure(domain, bc, p, cap)
    if bc.kind != "vacant":
        raise PreconditionError("the exhaustive Peierls sweep uses vacant boundary conditions")
    sup = _superset_probs(m)
    worst = 0.0
    bad = 0
    for code in range(len(sup)):
        A = m.index.config_edges(code)
        bound = float(p.n) ** len(loops_of(A)) * float(p.x) ** len(A)
        ratio = sup[code] / bound
        worst = max(worst, ratio)
        if sup[code] > bound * (1 + 1e-12):
            bad += 1
    return PeierlsReport(len(sup), bad, worst)


def surrounding_loop_probabilities(domain: Domain, bc: BoundaryCondition, p: ModelParams,
                                   u: Vertex, cap: int = DEFAULT_CAP) -> dict[int, float]:
    """P(some loop of length k surrounds u), for every k that occurs."""
    m = measure(domain, bc, p, cap)
    out: dict[int, float] = {}
    for code, omega in m.configs():
        pr = m.probs[code]
        ks = {len(loop) for loop in loops_of(omega) if loop_surrounds(loop, u)}
        for k in ks:
            out[k] = out.get(k, 0.0) + pr
    return dict(sorted(out.items()))


def small_x_loop_bound(domain: Domain, p: ModelParams, u: Vertex) -> tuple[int, int]:
    """Count (checked, violated) instances of P(length-k loop around u) <= k n (2x)^k."""
    probs = surrounding_loop_probabilities(domain, BoundaryCondition.vacant(), p, u)
    bad = sum(1 for k, pr in probs.items() if pr > k * p.n * (2 * p.x) ** k * (1 + 1e-12))
    return len(probs), bad


def hard_hexagon_compare(domain: Domain, lam: float, n: float, cap: int = DEFAULT_CAP) -> float:
    """Total-variation distance between the loop model at x = (lam/n)^(1/6) and the hard-hexagon gas."""
    idx = DomainIndex(domain, BoundaryCondition.vacant(), cap)
    x = (lam / n) ** (1.0 / 6.0)
    loop = np.zeros(1 << idx.nfaces)
    loop[idx.codes] = _weights(idx, ModelParams(n, x))
    # face codes that are independent sets of hexagons
    adj = [0] * idx.nfaces
    pos = {z: i for i, z in enumerate(idx.faces)}
    for i, z in enumerate(idx.faces):
        for w in hex_neighbors(z):
            if w in pos:
                adj[i] |= 1 << pos[w]
    codes = np.arange(1 << idx.nfaces, dtype=np.int64)
    indep = np.ones(len(codes), dtype=bool)
    for i in range(idx.nfaces):
        has = (codes >> i) & 1 == 1
        indep &= ~(has & ((codes & adj[i]) != 0))
    size = np.array([bin(c).count("1") for c in range(len(codes))])
    lw = size * math.log(lam)
    hc = np.where(indep, np.exp(lw - lw[indep].max()), 0.0)
    hc /= hc.sum()
    return 0.5 * float(np.abs(loop - hc).sum())


def _lip_assignments(free: list[Hex], n: int, depth: dict[Hex, int]):
    """All height functions on ``free`` with every other hexagon pinned to the root."""
    pos = {z: i for i, z in enumerate(free)}
    vals = [0] * len(free)
    values = (0, 1) if n == 1 else None

    def ok(i: int, h: int) -> bool:
        for w in hex_neighbors(free[i]):
            j = pos.get(w)
            hw = 0 if j is None else (vals[j] if j < i else None)
            if hw is None:
                continue
            if n == 2 and abs(h - hw) > 1:
                return False
        return True

    def rec(i: int):
        if i == len(free):
            yield tuple(vals)
            return
        cands = values if n == 1 else range(-depth[free[i]], depth[free[i]] + 1)
        for h in cands:
            if ok(i, h):
                vals[i] = h
                yield from rec(i + 1)

    yield from rec(0)


def height_pushforward_check(domain: Domain, n: int, x, cap: int = 12) -> bool:
    """Exact comparison of the level-line law of random height functions with the loop measure."""
    if n not in (1, 2):
        raise PreconditionError("height representation is implemented for n in {1, 2}")
    free = list(domain.faces)
    if len(free) > cap:
        raise TooLarge(f"{len(free)} free hexagons exceed the cap {cap}")
    xq = Fraction(x)
    # graph distance to the pinned region bounds |height| for n = 2
    depth: dict[Hex, int] = {}
    fs = set(free)
    frontier = deque(z for z in free if any(w not in fs for w in hex_neighbors(z)))
    for z in frontier:
        depth[z] = 1
    while frontier:
        z = frontier.popleft()
        for w in hex_neighbors(z):
            if w in fs and w not in depth:
                depth[w] = depth[z] + 1
                frontier.append(w)
    push: dict[frozenset, Fraction] = {}
    for vals in _lip_assignments(free, n, depth):
        h = dict(zip(free, vals))
        omega = frozenset(e for e in domain.edges if h.get(e[0], 0) != h.get(e[1], 0))
        push[omega] = push.get(omega, Fraction(0)) + xq ** len(omega)
    Zp = sum(push.values())
    loop = exact_weights(domain, BoundaryCondition.vacant(), ModelParams(n, xq))
    idx = DomainIndex(domain)
    for code, pr in loop.items():
        omega = idx.config_edges(code)
        if push.get(omega, Fraction(0)) / Zp != pr:
            return False
    return len(push) == len(loop)


def rectangle_domain(a: int, b: int) -> Domain:
    """The width-(2a+1), height-b block of hexagon columns used for unique packing.

    Columns i = -a..a; columns of the parity of ``a`` hold b+1 hexagons and
    the others hold b, sitting half a hexagon higher.
    """
    hexes = []
    y0 = -b if (b - a) % 2 == 0 else -b - 1
    for i in range(-a, a + 1):
        tall = (i - a) % 2 == 0
        lo = y0 if tall else y0 + 1
        count = b + 1 if tall else b
        for k in range(count):
            y = lo + 2 * k
            hexes.append((i, (y - i) // 2))
    return Domain.from_hexes(hexes)


def optimal_configs(domain: Domain, cap: int = DEFAULT_CAP) -> list[frozenset]:
    idx = DomainIndex(domain, BoundaryCondition.vacant(), cap)
    o, _ = idx.stats
    top = o.max()
    return [idx.config_edges(int(c)) for c in idx.codes[o == top]]


def unique_packing_check(domain_or_ab, cap: int = DEFAULT_CAP) -> bool:
    domain = (rectangle_domain(*domain_or_ab) if isinstance(domain_or_ab, tuple)
              else domain_or_ab)
    return len(optimal_configs(domain, cap)) == 1
