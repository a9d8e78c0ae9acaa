import math
from fractions import Fraction

import pytest

from loopon.lattice import hex_neighbors, hexagon_edges, hexagon_vertices, make_vertex
from loopon.loopcfg import (
    BoundaryCondition,
    Domain,
    LoopConfig,
    ModelParams,
    NotADomain,
    Packed,
    ParityError,
    count_edges,
    count_loops,
    domain_type,
    flower_domain,
    ground_state,
    is_fully_packed,
    is_trivial_loop,
    log_weight,
    loop_surrounds,
    loops_of,
    rect_domain,
    single_hexagon_domain,
    validate,
)

Z0 = (0, 0)


def trivial(z=Z0):
    return LoopConfig(frozenset(hexagon_edges(z)))


def test_validate_empty_and_trivial():
    assert loops_of(validate([])) == []
    omega = validate(hexagon_edges(Z0))
    (loop,) = loops_of(omega)
    assert len(loop) == 6 and is_trivial_loop(loop)


def test_validate_rejects_open_path():
    with pytest.raises(ParityError):
        validate(hexagon_edges(Z0)[1:])


def test_ground_state_loops():
    window = [(0, 0), (1, 1), (2, 2), (-1, 2)]
    gs = ground_state(0, window)
    loops = loops_of(gs)
    assert len(loops) == 4 and all(len(l) == 6 for l in loops)
    assert ground_state(1, [(0, 0)]).edges == frozenset()


def test_two_hexagon_loop_has_length_ten():
    z, w = Z0, hex_neighbors(Z0)[0]
    omega = validate(set(hexagon_edges(z)) ^ set(hexagon_edges(w)))
    (loop,) = loops_of(omega)
    assert len(loop) == 10
    shared = set(hexagon_vertices(z)) & set(hexagon_vertices(w))
    for u in shared:
        assert loop_surrounds(loop, u)


def test_counts_on_h1():
    H1 = single_hexagon_domain()
    assert (count_edges(trivial(), H1), count_loops(trivial(), H1)) == (6, 1)
    assert (count_edges(LoopConfig(), H1), count_loops(LoopConfig(), H1)) == (0, 0)


def test_straddling_loop_counts_partially():
    H1 = single_hexagon_domain()
    w = hex_neighbors(Z0)[0]
    omega = trivial(w)
    assert count_edges(omega, H1) == 1
    assert count_loops(omega, H1) == 1


def test_log_weight_trivial_loop():
    H1 = single_hexagon_domain()
    p = ModelParams(8, 0.5)
    assert log_weight(trivial(), H1, p) == pytest.approx(math.log(0.125))
    assert log_weight(LoopConfig(), H1, p) == 0
    assert log_weight(trivial(), H1, ModelParams(8, math.inf)) == Packed(6, 1)


def test_surrounds_far_vertex_false():
    far = make_vertex((10, 0), (11, 0), (10, 1))
    assert not loop_surrounds(loops_of(trivial())[0], far)
    assert loop_surrounds(loops_of(trivial())[0], hexagon_vertices(Z0)[0])


def test_domain_types():
    assert domain_type(single_hexagon_domain()) == {0}
    # The circuit around the seven-hexagon flower passes through all three colors.
    assert domain_type(flower_domain()) == set()
    assert domain_type(rect_domain(6, 6, 0)) == {0}
    assert domain_type(rect_domain(6, 6, 1)) == {1}


def test_fully_packed():
    H1 = single_hexagon_domain()
    assert is_fully_packed(trivial(), H1)
    assert not is_fully_packed(LoopConfig(), H1)
    assert not is_fully_packed(ground_state(1, [(0, 1), (1, -1), (-1, 0)]).restrict(H1.edges), H1)


def test_domain_rejects_holes_and_disconnected():
    ring_vertices = set()
    for z in hex_neighbors(Z0):
        ring_vertices |= set(hexagon_vertices(z))
    with pytest.raises(NotADomain):
        Domain(ring_vertices - set(hexagon_vertices(Z0)))
    with pytest.raises(NotADomain):
        Domain(set(hexagon_vertices((0, 0))) | set(hexagon_vertices((5, 5))))
    with pytest.raises(NotADomain):
        Domain([])


def test_faces():
    assert single_hexagon_domain().faces == (Z0,)
    assert len(flower_domain().faces) == 7


def test_ground_boundary_outside_edges_empty_for_matching_type():
    H1 = single_hexagon_domain()
    assert not BoundaryCondition.ground(0).outside_edges(H1) & H1.boundary_edges
    assert len(BoundaryCondition.ground(1).outside_edges(H1) & H1.boundary_edges) == 6


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0, 1)
    with pytest.raises(ValueError):
        ModelParams(1, -1)
    assert ModelParams(Fraction(1, 2), math.inf).infinite


def test_text_roundtrip():
    omega = trivial((2, -3))
    assert LoopConfig.from_text(omega.to_text()) == omega
