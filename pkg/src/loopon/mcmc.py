"""Single-face Metropolis (Glauber) dynamics for the loop O(n) model.

Randomness comes from numpy's PCG64 generator; ``run`` with the same seed,
domain, boundary condition and parameters reproduces a trajectory bit for
bit.  Independent chains use child seeds from ``numpy.random.SeedSequence``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .exact import DomainIndex
from .lattice import Hex, Vertex, hex_color, hexagon_edges
from .loopcfg import (
    BoundaryCondition,
    Domain,
    LoopConfig,
    ModelParams,
    PreconditionError,
    loop_surrounds,
    loops_of,
)
from .structure import breakup


class NonErgodicError(PreconditionError):
    pass


# --- kernel -------------------------------------------------------------------

@njit(cache=True)
def _loops_through(on, face_verts, ends, vert_edges, stamp, tag):
    """Number of distinct loops visiting the given vertices."""
    count = 0
    for i in range(face_verts.shape[0]):
        v0 = face_verts[i]
        first = -1
        for k in range(3):
            f = vert_edges[v0, k]
            if f >= 0 and on[f]:
                first = f
                break
        if first < 0 or stamp[first] == tag:
            continue
        count += 1
        stamp[first] = tag
        v = ends[first, 0] if ends[first, 1] == v0 else ends[first, 1]
        prev = first
        while v != v0:
            nxt = -1
            for k in range(3):
                f = vert_edges[v, k]
                if f >= 0 and f != prev and on[f]:
                    nxt = f
                    break
            if nxt < 0:
                break
            stamp[nxt] = tag
            prev = nxt
            v = ends[nxt, 0] if ends[nxt, 1] == v else ends[nxt, 1]
    return count


@njit(cache=True)
def _run_steps(rng, nsteps, on, face_edges, face_verts, ends, vert_edges, stamp, tag0,
               log_x, log_n, x_inf, state, code, hist):
    """Advance ``nsteps`` Metropolis steps; state = [o, L, accepted]."""
    nf = face_edges.shape[0]
    tag = tag0
    for _ in range(nsteps):
        f = rng.integers(0, nf)
        u = rng.random()
        d_o = 0
        for k in range(6):
            d_o += -1 if on[face_edges[f, k]] else 1
        tag += 1
        before = _loops_through(on, face_verts[f], ends, vert_edges, stamp, tag)
        for k in range(6):
            e = face_edges[f, k]
            on[e] = not on[e]
        tag += 1
        after = _loops_through(on, face_verts[f], ends, vert_edges, stamp, tag)
        d_L = after - before
        if x_inf:
            if d_o > 0:
                accept = True
            elif d_o < 0:
                accept = False
            else:
                accept = d_L * log_n >= 0.0 or u < math.exp(d_L * log_n)
        else:
            a = d_o * log_x + d_L * log_n
            accept = a >= 0.0 or u < math.exp(a)
        if accept:
            state[0] += d_o
            state[1] += d_L
            state[2] += 1
            code ^= 1 << f
        else:
            for k in range(6):
                e = face_edges[f, k]
                on[e] = not on[e]
        if hist.shape[0] > 0:
            hist[code] += 1
    return tag, code


# --- chain state -------------------------------------------------------------------

class ChainState:
    """Mutable sampler state over a fixed domain and boundary condition."""

    def __init__(self, domain: Domain, bc: BoundaryCondition, params: ModelParams,
                 seed: int = 0, initial: Optional[LoopConfig] = None,
                 allow_nonergodic: bool = False, track_states: bool = False):
        if params.infinite and not allow_nonergodic:
            raise NonErgodicError("x = infinity dynamics are not ergodic; pass the override flag")
        self.domain = domain
        self.bc = bc
        self.params = params
        self.seed = seed
        self.rng = np.random.Generator(np.random.PCG64(seed))
        self.index = DomainIndex(domain, bc, cap=10 ** 9)
        idx = self.index
        if idx.nfaces == 0:
            raise PreconditionError("domain has no interior faces to flip")
        self.on = np.zeros(len(idx.edges), dtype=np.bool_)
        self.on[len(idx.inner_edges):] = True
        start = idx.particular if initial is None else frozenset(initial.edges)
        if initial is not None:
            stray = start - frozenset(idx.inner_edges)
            if stray:
                raise PreconditionError("initial configuration has edges outside the domain")
        for e in start:
            self.on[idx.edge_id[e]] = True
        self.face_verts = np.array(
            [[idx.vertex_id[v] for v in _hex_vertices(z)] for z in idx.faces], dtype=np.int64)
        self.stamp = np.zeros(len(idx.edges), dtype=np.int64)
        self.tag = 0
        self.step_count = 0
        self.accepted = 0
        self.code = self._face_code() if track_states else 0
        self.hist = np.zeros((1 << idx.nfaces) if track_states else 0, dtype=np.int64)
        self.cached_o, self.cached_L = self.recompute()
        if self.cached_o is None:
            raise PreconditionError("initial configuration is not compatible with the boundary")

    def _face_code(self) -> int:
        # solve for the face set generating the current inner configuration
        idx = self.index
        target = self.inner_edges() ^ idx.particular
        code = 0
        remaining = set(target)
        # peel faces greedily from the outside in: a face is forced by any edge
        # it shares with the domain boundary or with already-decided faces
        faces = list(idx.faces)
        decided: dict[Hex, bool] = {}
        owner: dict = {}
        for z in faces:
            for e in hexagon_edges(z):
                owner.setdefault(e, []).append(z)
        changed = True
        while changed and len(decided) < len(faces):
            changed = False
            for e, zs in owner.items():
                und = [z for z in zs if z not in decided]
                if len(und) != 1:
                    continue
                val = (e in remaining)
                for z in zs:
                    if z in decided and decided[z]:
                        val = not val
                decided[und[0]] = val
                changed = True
        for i, z in enumerate(faces):
            if decided.get(z):
                code |= 1 << i
        if idx.config_edges(code) != self.inner_edges():
            raise PreconditionError("configuration is not in the face span")
        return code

    def inner_edges(self) -> frozenset:
        idx = self.index
        return frozenset(e for i, e in enumerate(idx.inner_edges) if self.on[i])

    def config(self) -> LoopConfig:
        return LoopConfig(self.inner_edges())

    def full_config(self) -> LoopConfig:
        return LoopConfig(self.inner_edges() | frozenset(self.index.outside_edges))

    def recompute(self) -> tuple:
        full = self.full_config()
        try:
            loops = loops_of(full)
        except ValueError:
            return None, None
        inner = set(self.index.inner_edges)
        o = sum(1 for e in full.edges if e in inner)
        L = sum(1 for loop in loops if any(e in inner for e in loop))
        return o, L

    def steps(self, nsteps: int) -> None:
        p = self.params
        state = np.array([self.cached_o, self.cached_L, 0], dtype=np.int64)
        self.tag, self.code = _run_steps(
            self.rng, int(nsteps), self.on, self.index.face_edges, self.face_verts,
            self.index.ends, self.index.vert_edges, self.stamp, self.tag,
            0.0 if p.infinite else math.log(p.x), math.log(p.n), p.infinite,
            state, self.code, self.hist)
        self.cached_o, self.cached_L = int(state[0]), int(state[1])
        self.accepted += int(state[2])
        self.step_count += int(nsteps)


def _hex_vertices(z: Hex):
    from .lattice import hexagon_vertices
    return hexagon_vertices(z)


def step(s: ChainState) -> ChainState:
    s.steps(1)
    return s


# --- observables ---------------------------------------------------------------

def observable_flower_density(s: ChainState | LoopConfig, faces: Optional[Sequence[Hex]] = None):
    """Fraction of interior hexagons of each color that carry a trivial loop."""
    if isinstance(s, ChainState):
        edges = s.full_config().edges
        faces = s.index.faces
    else:
        edges = s.edges
    tot = [0, 0, 0]
    hit = [0, 0, 0]
    for z in faces:
        c = hex_color(z)
        tot[c] += 1
        if all(e in edges for e in hexagon_edges(z)):
            hit[c] += 1
    return tuple(hit[c] / tot[c] if tot[c] else 0.0 for c in range(3))


def observable_surrounding_loops(s: ChainState | LoopConfig, u: Vertex, k_max: int) -> list[int]:
    """Indicator per length k (index k, 0..k_max) of a length-k loop surrounding u."""
    cfg = s.full_config() if isinstance(s, ChainState) else s
    out = [0] * (k_max + 1)
    for loop in loops_of(cfg):
        if len(loop) <= k_max and loop_surrounds(loop, u):
            out[len(loop)] = 1
    return out


def observable_breakup_boundary(s: ChainState, u: Vertex) -> int:
    if s.bc.kind != "ground" or s.bc.color != 0:
        raise PreconditionError("breakup observable needs the 0-ground boundary condition")
    from .lattice import hexes_of_vertices
    window = hexes_of_vertices(s.domain.vertices)
    return len(breakup(s.full_config(), u, window).boundary)


# --- runs -----------------------------------------------------------------------

@dataclass
class RunConfig:
    sweeps: int
    burn_in: int = 0
    thin: int = 1
    seed: int = 0
    observables: Sequence[str] = ("o", "L", "rho0", "rho1", "rho2")
    u: Optional[Vertex] = None
    k_max: int = 30

    def __post_init__(self):
        if self.sweeps < 0 or self.burn_in < 0 or self.thin < 1:
            raise ValueError("sweeps and burn-in must be non-negative and thin positive")


@dataclass
class ObservableTrace:
    columns: list
    rows: list = field(default_factory=list)

    def to_tsv(self) -> str:
        lines = ["\t".join(["step", *self.columns])]
        for row in self.rows:
            lines.append("\t".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def column(self, name: str) -> list:
        i = self.columns.index(name) + 1
        return [r[i] for r in self.rows]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _observe(s: ChainState, name: str, rc: RunConfig):
    if name == "o":
        return s.cached_o
    if name == "L":
        return s.cached_L
    if name in ("rho0", "rho1", "rho2"):
        return observable_flower_density(s)[int(name[-1])]
    if name == "breakup":
        return observable_breakup_boundary(s, rc.u)
    if name.startswith("surround"):
        hist = observable_surrounding_loops(s, rc.u, rc.k_max)
        return ",".join(str(k) for k, b in enumerate(hist) if b) or "-"
    raise ValueError(f"unknown observable {name!r}")


def run(s: ChainState, rc: RunConfig) -> ObservableTrace:
    nf = s.index.nfaces
    trace = ObservableTrace(list(rc.observables))
    if rc.sweeps == 0:
        return trace
    if rc.burn_in:
        s.steps(rc.burn_in * nf)
    for sweep in range(1, rc.sweeps + 1):
        s.steps(nf)
        if sweep % rc.thin == 0:
            trace.rows.append([s.step_count, *(_observe(s, name, rc) for name in rc.observables)])
    return trace


def chain_seeds(seed: int, chains: int) -> list[int]:
    seq = np.random.SeedSequence(seed)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in seq.spawn(chains)]


def empirical_distribution(s: ChainState) -> np.ndarray:
    """Normalised visit frequencies by face code (requires ``track_states``)."""
    h = s.hist.astype(float)
    return h / h.sum()
