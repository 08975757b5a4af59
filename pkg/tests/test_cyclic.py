import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polymorse.cyclic import (
    CyclicConfig,
    delta,
    edge_orientations,
    enumerate_cyclic,
    enumerate_equilateral,
    solve_cyclic,
    winding_number,
)
from polymorse.errors import DegenerateDelta, GenericityError, NonGenericCentral, OddOnly
from polymorse.linkage import Linkage, signed_area
from polymorse.morse import planar_index

PENTAGON = Linkage((1, 1, 1, 1, 1))


def test_pentagon_census():
    cs = enumerate_cyclic(PENTAGON)
    assert len(cs) == 14
    by = {}
    for C in cs:
        by.setdefault((C.e, C.omega), []).append(planar_index(C))
    assert by[(5, 1)] == [2] and by[(0, -1)] == [0]
    assert by[(4, 1)] == [1] * 5 and by[(1, -1)] == [1] * 5
    assert by[(5, 2)] == [0] and by[(0, -2)] == [2]


def test_pentagon_closed_forms():
    cs = {(C.e, C.omega): C for C in enumerate_cyclic(PENTAGON)}
    convex, star = cs[(5, 1)], cs[(5, 2)]
    assert convex.r == pytest.approx(1 / (2 * math.sin(math.pi / 5)), rel=1e-12)
    assert star.r == pytest.approx(1 / (2 * math.sin(2 * math.pi / 5)), rel=1e-12)
    assert convex.area == pytest.approx(2.5 * convex.r**2 * math.sin(2 * math.pi / 5), rel=1e-12)
    one_flip = cs[(4, 1)]
    # 3 alpha = pi with equal half-angles
    assert one_flip.r == pytest.approx(1 / (2 * math.sin(math.pi / 3)), rel=1e-12)


@pytest.mark.parametrize("lengths", [(1, 1, 1, 1, 1), (1, 1, 1, 1, 3.99), (3, 4, 5, 6.5),
                                     (2, 3, 4, 4.5), (1, 1, 1, 1, 1, 0.99), (1.3, 0.7, 1.1, 0.9, 1.6, 1.2)])
def test_every_configuration_is_consistent(lengths):
    L = Linkage(lengths)
    for C in enumerate_cyclic(L):
        C.check()
        V = C.vertices.vertices
        assert np.allclose(np.linalg.norm(V, axis=1), C.r, rtol=1e-12)
        assert edge_orientations(V) == C.E and winding_number(V) == C.omega


@pytest.mark.parametrize("lengths", [(1, 1, 1, 1, 1), (1, 1, 1, 1, 3.99), (2, 3, 4, 4.5)])
def test_area_three_ways(lengths):
    for C in enumerate_cyclic(Linkage(lengths)):
        r, th, a = C.r, C.thetas, C.alphas
        fan = 0.5 * r * r * np.sum(np.sin(2 * th))
        sectors = math.pi * C.omega * r * r - np.sum(np.array(C.E) * r * r * (a - 0.5 * np.sin(2 * a)))
        assert C.area == pytest.approx(fan, abs=1e-12)
        assert C.area == pytest.approx(sectors, abs=1e-12)
        assert C.area == pytest.approx(signed_area(C.vertices), abs=1e-15)


def test_mirror_pairs():
    cs = enumerate_cyclic(Linkage((1.3, 0.7, 1.1, 0.9, 1.6, 1.2)))
    for k, C in enumerate(cs):
        m = cs[C.mirror_index]
        assert m.mirror_index == k
        assert m.E == tuple(-s for s in C.E) and m.omega == -C.omega
        assert m.area == pytest.approx(-C.area)


def test_winding_zero_included():
    cs = enumerate_cyclic(Linkage((1, 1, 1, 1, 3.99)))
    assert len(cs) == 2 and {C.omega for C in cs} == {0}
    assert sorted(C.e for C in cs) == [1, 4]


def test_butterfly_quadrilateral():
    cs = enumerate_cyclic(Linkage((2, 3, 4, 4.5)))
    assert len(cs) == 4
    assert sorted((C.e, C.omega) for C in cs) == [(0, -1), (2, 0), (2, 0), (4, 1)]


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_equilateral_families_match_enumeration(n):
    fams = enumerate_equilateral(n)
    cs = enumerate_cyclic(Linkage((1.0,) * n))
    assert sum(f.multiplicity for f in fams) == len(cs)
    count = {}
    for C in cs:
        count[(C.e, C.omega)] = count.get((C.e, C.omega), 0) + 1
        assert np.allclose(C.alphas, C.alphas[0])
    for f in fams:
        assert count[(f.e, f.omega)] == f.multiplicity
        assert f.p == f.e - f.omega - 1


def test_equilateral_needs_odd():
    with pytest.raises(OddOnly):
        enumerate_equilateral(6)


def test_central_triangle():
    L = Linkage((3, 4, 5))
    with pytest.raises(NonGenericCentral):
        enumerate_cyclic(L)
    cs = enumerate_cyclic(L, allow_central=True)
    assert len(cs) == 2 and all(C.r == pytest.approx(2.5) for C in cs)


def test_solve_single_pattern():
    (C,) = solve_cyclic(PENTAGON, (1, 1, 1, 1, 1), 2)
    assert C.e == 5 and C.omega == 2
    assert solve_cyclic(PENTAGON, (1, 1, -1, -1, -1), 1) == []
    with pytest.raises(ValueError):
        solve_cyclic(PENTAGON, (1, 1), 1)


def test_from_half_angles_and_dict_roundtrip():
    a = 2 * math.pi / 5
    C = CyclicConfig.from_half_angles([a] * 5, r=2.0)
    assert C.omega == 2 and C.r == 2.0
    D = CyclicConfig.from_dict(C.to_dict())
    assert np.allclose(D.vertices.vertices, C.vertices.vertices)
    with pytest.raises(ValueError):
        CyclicConfig.from_half_angles([0.5, 0.5, 0.5])
    with pytest.raises(ValueError):
        CyclicConfig.from_half_angles([0.0, 1.0, 1.0, 1.14])


def test_degenerate_delta():
    C = CyclicConfig.from_half_angles([0.5, 0.5, -0.5, -0.5])
    with pytest.raises(DegenerateDelta):
        delta(C)


@given(st.lists(st.floats(0.2, 2.0), min_size=4, max_size=6))
def test_random_linkages_configurations_close(ls):
    L = Linkage(tuple(ls))
    if not L.nonempty or not L.generic:
        return
    try:
        cs = enumerate_cyclic(L)
    except NonGenericCentral:
        return
    assert len(cs) % 2 == 0 and len(cs) >= 2  # mirror pairs, convex one exists
    for C in cs:
        C.check(tol=1e-9)


def test_rhombus_family_is_rejected():
    with pytest.raises(GenericityError) as exc:
        enumerate_cyclic(Linkage((1, 1, 1, 1)))
    assert len(exc.value.witness) == 2
    # (3,4,5,6) is non-generic but its cyclic configurations stay isolated
    assert enumerate_cyclic(Linkage((3, 4, 5, 6)))
