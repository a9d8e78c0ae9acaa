"""Loop O(n) model on the hexagonal lattice: exact enumeration, sampling and structure."""

from .lattice import hex_color, hexagon_edges, hexagon_vertices, shift_down, shift_up
from .loopcfg import (
    INFINITY,
    BoundaryCondition,
    Domain,
    LoopConfig,
    ModelParams,
    flower_domain,
    loops_of,
    rect_domain,
    single_hexagon_domain,
    validate,
)
from .circuits import Circuit, interior

__all__ = [
    "INFINITY", "BoundaryCondition", "Circuit", "Domain", "LoopConfig", "ModelParams",
    "flower_domain", "hex_color", "hexagon_edges", "hexagon_vertices", "interior", "loops_of",
    "rect_domain", "shift_down", "shift_up", "single_hexagon_domain", "validate",
]
