import numpy as np
import pytest
from hypothesis import example, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from polymorse.cyclic import enumerate_cyclic
from polymorse.errors import DegenerateSwap
from polymorse.linkage import (
    DecoratedConfig,
    Linkage,
    PlanarPolygon,
    SpatialPolygon,
    align,
    signed_area,
    vector_area,
)
from polymorse.swap import (
    _about_center,
    _householder,
    _in_plane,
    circumcenter,
    is_sw_invariant,
    sw,
    sw_inverse,
    sw_residual,
    swap_vertex,
)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@given(arrays(np.float64, (6, 3), elements=finite))
@example(np.array([[1, 1e-8, 1e-8], [0, 1e-8, 1e-8], [1e-8, 0, 1e-8]] + [[1e-8] * 3] * 3))
def test_swap_transposes_and_preserves_vector_area(V):
    for i in range(1, 7):
        a, b = V[(i - 2) % 6], V[i % 6]
        if np.linalg.norm(b - a) < 1e-3 or np.linalg.norm(V[i - 1] - a) < 1e-3:
            continue
        P = SpatialPolygon(V)
        Q = swap_vertex(P, i)
        l0, l1 = P.edge_lengths(), Q.edge_lengths()
        j, k = (i - 2) % 6, i - 1
        assert l1[j] == pytest.approx(l0[k], abs=1e-9) and l1[k] == pytest.approx(l0[j], abs=1e-9)
        assert np.allclose(vector_area(Q), vector_area(P), atol=1e-9)
        R = swap_vertex(Q, i)  # involution
        assert np.allclose(R.vertices, V, atol=1e-9)


def test_reflection_forms_agree(rng):
    for _ in range(50):
        a, p, b = rng.normal(size=(3, 3))
        assert np.allclose(_householder(a, p, b), _in_plane(a, p, b), atol=1e-12)
        c = rng.normal(size=2)
        a2, p2, b2 = [c + 1.7 * x / np.linalg.norm(x) for x in rng.normal(size=(3, 2))]
        assert np.allclose(_householder(a2, p2, b2), _about_center(a2, p2, b2, c), atol=1e-12)


def test_collinear_edges_still_swap():
    P = PlanarPolygon([[0, 0], [1, 0], [3, 0], [1, 1]])
    Q = swap_vertex(P, 2)
    assert np.allclose(Q.vertices[1], [2, 0])


def test_folded_vertex():
    # edge 2 doubles back along edge 1
    P = PlanarPolygon([[0, 0], [1, 0], [0, 0.0 + 1e-17], [-0.5, -1]])
    with pytest.raises(DegenerateSwap):
        swap_vertex(P, 2)


def test_planar_swap_preserves_area(rng):
    V = rng.normal(size=(5, 2))
    P = PlanarPolygon(V)
    for i in range(1, 6):
        assert signed_area(swap_vertex(P, i)) == pytest.approx(signed_area(P))


@pytest.mark.parametrize("lengths", [(3, 4, 5, 6.5), (2, 3, 4, 4.5), (1,) * 5, (1, 1, 1, 1, 3.99),
                                     (1, 1, 1, 1, 1, 0.99), (1.3, 0.7, 1.1, 0.9, 1.6, 1.2), (1,) * 7])
def test_cyclic_configurations_are_sw_invariant(lengths):
    try:
        cs = enumerate_cyclic(Linkage(lengths))
    except Exception:
        cs = enumerate_cyclic(Linkage(lengths), allow_central=True)
    for C in cs:
        assert is_sw_invariant(C.vertices, tol=1e-7)
        assert sw_residual(C.vertices) < 1e-10 * C.vertices.diameter()


def test_random_polygons_are_not_sw_invariant(rng):
    for _ in range(200):
        P = SpatialPolygon(rng.normal(size=(rng.integers(4, 8), 3)))
        assert not is_sw_invariant(P)


def test_sw_inverse(rng):
    P = SpatialPolygon(rng.normal(size=(6, 3)))
    assert align(sw_inverse(sw(P)), P) < 1e-12
    assert np.allclose(sw(P).edge_lengths(), P.edge_lengths())


def test_circumcenter(rng):
    c = np.array([0.3, -1.2])
    t = rng.uniform(0, 6, 5)
    pts = c + 2.0 * np.column_stack([np.cos(t), np.sin(t)])
    assert np.allclose(circumcenter(pts), c)
    assert circumcenter(rng.normal(size=(6, 2))) is None
    assert circumcenter(rng.normal(size=(5, 3))) is None


def test_swap_index_bounds():
    with pytest.raises(IndexError):
        swap_vertex(PlanarPolygon(np.eye(3)[:, :2] + [[0, 0], [0, 0], [1, 1]]), 0)
