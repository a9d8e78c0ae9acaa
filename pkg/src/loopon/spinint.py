"""Monte Carlo checks of the sphere integrals that link spin and loop weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .lattice import edge_endpoints
from .loopcfg import BoundaryCondition, Domain, LoopConfig, ModelParams, TooLarge

BLOCK = 100_000


class DimensionMismatch(ValueError):
    pass


def sample_sphere(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """``size`` uniform points on the sphere of radius sqrt(n) in R^n."""
    if n == 1:
        return rng.choice(np.array([-1.0, 1.0]), size=(size, 1))
    z = rng.standard_normal((size, n))
    z *= math.sqrt(n) / np.linalg.norm(z, axis=1, keepdims=True)
    return z


class _Pool:
    """Running mean and variance over blocks (Chan's parallel update)."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, values: np.ndarray) -> None:
        k = len(values)
        if k == 0:
            return
        mb = float(values.mean())
        m2b = float(((values - mb) ** 2).sum())
        tot = self.count + k
        delta = mb - self.mean
        self.mean += delta * k / tot
        self.m2 += m2b + delta ** 2 * self.count * k / tot
        self.count = tot

    def result(self) -> tuple[float, float]:
        if self.count < 2:
            return self.mean, float("nan")
        var = self.m2 / (self.count - 1)
        return self.mean, math.sqrt(max(var, 0.0) / self.count)


def _blocks(samples: int):
    done = 0
    while done < samples:
        k = min(BLOCK, samples - done)
        yield k
        done += k


def estimate_contraction(n: int, x: Sequence[float], y: Sequence[float], samples: int,
                         seed: int = 0) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (n,) or y.shape != (n,):
        raise DimensionMismatch(f"vectors must have dimension {n}")
    rng = np.random.default_rng(seed)
    pool = _Pool()
    for k in _blocks(samples):
        z = sample_sphere(rng, n, k)
        pool.add((z @ x) * (z @ y))
    return pool.result()


def estimate_fourth_moment(n: int, samples: int, seed: int = 0) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    pool = _Pool()
    for k in _blocks(samples):
        a = sample_sphere(rng, n, k)
        b = sample_sphere(rng, n, k)
        pool.add(np.einsum("ij,ij->i", a, b) ** 4)
    return pool.result()


def fourth_moment_target(n: float) -> float:
    return 3 * n ** 3 / (n + 2)


def _edge_pairs(graph) -> list[tuple[Hashable, Hashable]]:
    if isinstance(graph, LoopConfig):
        return [edge_endpoints(e) for e in sorted(graph.edges)]
    return [tuple(p) for p in graph]


def estimate_graph_integral(graph, n: int, samples: int, seed: int = 0) -> tuple[float, float]:
    """Estimate the integral of the product of spin inner products over the edges of a multigraph.

    ``graph`` is a LoopConfig or a list of vertex pairs (repeated pairs are parallel edges).
    """
    pairs = _edge_pairs(graph)
    verts = sorted({v for p in pairs for v in p}, key=repr)
    if len(verts) > 30:
        raise TooLarge("graph has more than 30 vertices")
    pos = {v: i for i, v in enumerate(verts)}
    ia = np.array([pos[a] for a, _ in pairs])
    ib = np.array([pos[b] for _, b in pairs])
    rng = np.random.default_rng(seed)
    pool = _Pool()
    for k in _blocks(samples):
        s = sample_sphere(rng, n, k * len(verts)).reshape(k, len(verts), n)
        dots = np.einsum("kei,kei->ke", s[:, ia, :], s[:, ib, :])
        pool.add(dots.prod(axis=1))
    return pool.result()


def graph_integral_target(graph, n: float) -> float:
    """n to the number of loops for an even graph made of disjoint cycles, 0 with an odd vertex."""
    pairs = _edge_pairs(graph)
    deg: dict = {}
    for a, b in pairs:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if any(d % 2 for d in deg.values()):
        return 0.0
    if any(d > 2 for d in deg.values()):
        raise ValueError("closed form only for disjoint cycles")
    import networkx as nx
    G = nx.MultiGraph()
    G.add_edges_from(pairs)
    return float(n) ** nx.number_connected_components(G)


def estimate_loop_integral(omega, n: int, samples: int, seed: int = 0) -> tuple[float, float]:
    return estimate_graph_integral(omega, n, samples, seed)


# Witness graphs for the component analysis with the extra u-v edge.

def case_graph(case: str) -> list[tuple[str, str]]:
    path = [("u", "a"), ("a", "v")]
    close = [("u", "v")]
    loop_u = [("u", "p"), ("p", "q"), ("q", "u")]
    loop_v = [("v", "r"), ("r", "s"), ("s", "v")]
    theta = [("u", "b"), ("b", "v"), ("u", "c"), ("c", "d"), ("d", "v")]
    return {
        "i": path + close,
        "ii": path + loop_u + close,
        "iii": path + loop_u + loop_v + close,
        "iv": path + theta + close,
    }[case]


def case_target(case: str, n: float) -> float:
    return {"i": n, "ii": n ** 2, "iii": n ** 3, "iv": fourth_moment_target(n)}[case]


def estimate_spin_partition(domain: Domain, n: int, beta: float, samples: int,
                            seed: int = 0) -> tuple[float, float, float]:
    """MC estimate of the spin partition function and the loop-side sum at x = beta.

    Returns (mean, stderr, loop_sum).
    """
    verts = sorted(domain.vertices)
    if len(verts) > 20:
        raise TooLarge(f"{len(verts)} vertices exceed the limit of 20")
    from .exact import partition_function
    loop_sum = 1.0 if beta == 0 else math.exp(
        partition_function(domain, BoundaryCondition.vacant(), ModelParams(n, beta)))
    if beta == 0:
        return 1.0, 0.0, loop_sum
    pos = {v: i for i, v in enumerate(verts)}
    pairs = [edge_endpoints(e) for e in sorted(domain.edges)]
    ia = np.array([pos[a] for a, _ in pairs])
    ib = np.array([pos[b] for _, b in pairs])
    rng = np.random.default_rng(seed)
    pool = _Pool()
    for k in _blocks(samples):
        s = sample_sphere(rng, n, k * len(verts)).reshape(k, len(verts), n)
        dots = np.einsum("kei,kei->ke", s[:, ia, :], s[:, ib, :])
        pool.add(np.exp(beta * dots.sum(axis=1)))
    mean, err = pool.result()
    return mean, err, loop_sum


@dataclass
class IdentityResult:
    name: str
    n: int
    samples: int
    estimate: float
    stderr: float
    target: float

    @property
    def z(self) -> float:
        diff = self.estimate - self.target
        if self.stderr == 0 or math.isnan(self.stderr):
            return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(self.target)) else math.inf
        return diff / self.stderr

    def passes(self, bands: float = 4.0) -> bool:
        return abs(self.z) <= bands

    def row(self) -> str:
        return (f"{self.name}\t{self.n}\t{self.samples}\t{self.estimate:.6g}\t"
                f"{self.stderr:.3g}\t{self.target:.6g}\t{self.z:.3f}")


REPORT_HEADER = "identity\tn\tsamples\testimate\tstderr\ttarget\tz"


def identity_suite(ns: Iterable[int] = (1, 2, 3), samples: int = 1_000_000,
                   seed: int = 0) -> list[IdentityResult]:
    out = []
    for n in ns:
        x = np.zeros(n)
        x[0] = math.sqrt(n)
        m, s = estimate_contraction(n, x, x, samples, seed)
        out.append(IdentityResult("contraction", n, samples, m, s, float(n)))
        for case in ("i", "ii", "iii"):
            m, s = estimate_graph_integral(case_graph(case), n, samples, seed + 1)
            out.append(IdentityResult(f"case-{case}", n, samples, m, s, case_target(case, n)))
        m, s = estimate_fourth_moment(n, samples, seed + 2)
        out.append(IdentityResult("fourth-moment", n, samples, m, s, fourth_moment_target(n)))
    return out
