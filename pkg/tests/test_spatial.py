import numpy as np
import pytest

from polymorse.errors import GenericityError, OddN
from polymorse.linkage import DecoratedConfig, Linkage, SpatialPolygon, s_value
from polymorse.morse import numeric_index_spatial
from polymorse.spatial import (
    NON_PLANAR,
    PLANAR_CYCLIC,
    ZIGZAG,
    all_zigzags,
    check_sw_invariance,
    classify,
    find_critical_points,
    fit_circle,
    mirror_partner,
    solve_zigzag,
)
from polymorse.errors import Unclassifiable
from polymorse.cyclic import enumerate_cyclic

QUAD = Linkage((3, 4, 5, 6.5))


def test_zigzags_of_generic_quadrilateral():
    zz = all_zigzags(QUAD)
    assert len(zz) == 2
    assert {z.signs for z in zz} == {(1, -1, -1, 1), (-1, 1, 1, -1)}
    for z in zz:
        assert z.h == pytest.approx(zz[0].h, rel=1e-12) and 0 < z.h < 3
        assert z.config.polygon.matches(QUAD)
        assert classify(z.config).tag == ZIGZAG
        assert numeric_index_spatial(z.config).numeric_index == 2


def test_zigzag_equation_holds():
    for z in all_zigzags(QUAD):
        tau = np.array(z.signs)
        assert abs(np.sum(tau * np.sqrt(QUAD.array**2 - z.h**2))) < 1e-12


def test_zigzag_requires_even_n():
    with pytest.raises(OddN):
        solve_zigzag(Linkage((1, 1, 1)), (1, 1, -1))


def test_butterfly_quadrilateral_has_no_zigzag():
    assert all_zigzags(Linkage((2, 3, 4, 4.5))) == []


def test_equilateral_square_zigzags_are_degenerate():
    assert solve_zigzag(Linkage((1, 1, 1, 1)), (1, -1, 1, -1)) == []
    assert solve_zigzag.last_degenerate


def test_quadrilateral_search():
    R = find_critical_points(QUAD, trials=2000, seed=7)
    assert [p.index for p in R.points] == [0, 2, 2, 4]
    assert [p.klass.tag for p in R.points].count(ZIGZAG) == 2
    assert R.histogram == {0: 1, 2: 1 + 1, 4: 1} or R.histogram == {0: 1, 2: 2, 4: 1}
    assert check_sw_invariance(R.points) < 1e-9


def test_search_requires_generic():
    with pytest.raises(GenericityError):
        find_critical_points(Linkage((3, 4, 5, 6)), trials=3)


def test_classify_planar_cyclic():
    C = enumerate_cyclic(Linkage((1,) * 5))[0]
    k = classify(C.to_decorated(1))
    assert k.tag == PLANAR_CYCLIC and k.evidence["e"] == C.e and k.evidence["omega"] == C.omega


def test_classify_rejects_random(rng):
    C = DecoratedConfig(SpatialPolygon(rng.normal(size=(5, 3))), np.array([0, 0, 1.0]))
    with pytest.raises(Unclassifiable):
        classify(C)


def test_nonplanar_points_of_long_pentagon():
    R = find_critical_points(Linkage((1, 1, 1, 1, 3.99)), trials=3000, seed=7)
    npts = R.by_class(NON_PLANAR)
    assert len(R.by_class(PLANAR_CYCLIC)) == 2 and len(npts) == 4
    for p in npts:
        ev = p.klass.nonplanar
        assert ev.passes(1e-6)
        assert abs(ev.delta_projection) < 1e-6
        # partner: the reflected polygon with the same xi, same value and index
        m = mirror_partner(p.config)
        q = min(npts, key=lambda x: x.config.congruence_residual(m))
        assert q is not p and q.config.congruence_residual(m) < 1e-6
        assert q.index == p.index and q.value == pytest.approx(p.value, abs=1e-9)
    assert sorted(p.index for p in npts) == [2, 2, 4, 4]


def test_fit_circle_exact():
    t = np.linspace(0, 5, 6)
    pts = np.column_stack([1 + 2 * np.cos(t), -3 + 2 * np.sin(t)])
    c, r, dev = fit_circle(pts)
    assert np.allclose(c, [1, -3]) and r == pytest.approx(2) and dev < 1e-12
