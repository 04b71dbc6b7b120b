import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ropekit.curve import (
    Component,
    CurveError,
    PolyCurve,
    component_frames,
    discrete_curvature,
    frenet_integrate,
    make_circle,
    make_ellipse,
    make_helix,
    make_random_fourier,
    make_stadium,
    make_torus_knot,
    resample_arclength,
    turning_angles,
)


def test_closed_component_wraps_last_edge():
    sq = Component([[0, 0], [1, 0], [1, 1], [0, 1]], closed=True)
    assert sq.length() == pytest.approx(4.0)
    assert Component(sq.points, closed=False).length() == pytest.approx(3.0)
    assert np.allclose(sq.arclength(), [0, 1, 2, 3])


@pytest.mark.parametrize("build", [
    lambda: PolyCurve([]),
    lambda: PolyCurve([Component(np.zeros((4, 3)) + np.arange(4)[:, None], True)]),
    lambda: PolyCurve([make_circle(16).components[0], Component(np.random.rand(16, 2), True)]),
    lambda: PolyCurve.single([[0, 0, 0], [0, 0, 0], [1, 0, 0]], closed=False),
    lambda: PolyCurve.single([[0, 0, 0], [math.nan, 0, 0], [1, 0, 0]], closed=False),
    lambda: PolyCurve.single([[0, 0, 0], [1, 0, 0], [0, 0, 0], [2, 0, 0]], closed=False),
])
def test_invalid_curves_rejected(build):
    with pytest.raises(CurveError):
        build()


def test_torus_knot_guards():
    with pytest.raises(CurveError):
        make_torus_knot(2, 4)
    with pytest.raises(CurveError):
        make_torus_knot(2, 3, R=1.0, r=2.0)


@pytest.mark.parametrize("n", [8, 64, 1024])
def test_regular_polygon_curvature(n):
    # turning angle 2 pi / n over edge 2 sin(pi / n)
    k = discrete_curvature(make_circle(n, radius=2.0)).flat()
    expect = (2 * math.pi / n) / (2 * 2.0 * math.sin(math.pi / n))
    assert np.allclose(k, expect, rtol=1e-12)


def test_open_ends_have_zero_curvature():
    k = discrete_curvature(make_helix(50)).kappa[0]
    assert k[0] == 0.0 and k[-1] == 0.0
    assert np.allclose(k[5:-5], 1.0, rtol=2e-3)


def test_turning_angle_small_angle_accuracy():
    t = 1e-9
    comp = Component([[0, 0], [1, 0], [1 + math.cos(t), math.sin(t)]], closed=False)
    assert turning_angles(comp)[1] == pytest.approx(t, rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(scale=st.floats(0.01, 100.0), seed=st.integers(0, 2**32 - 1))
def test_curvature_scales_inversely(scale, seed):
    c = make_random_fourier(64, np.random.default_rng(seed))
    k1 = discrete_curvature(c).flat()
    k2 = discrete_curvature(c.scaled(scale)).flat()
    assert np.allclose(k2 * scale, k1, rtol=1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(8, 300))
def test_resample_never_lengthens_and_spaces_evenly(seed, n):
    c = make_random_fourier(97, np.random.default_rng(seed))
    r = resample_arclength(c, n)
    assert len(r.components[0]) == n
    assert r.length() <= c.length() * (1 + 1e-12)
    # vertex 0 is kept
    assert np.allclose(r.components[0].points[0], c.components[0].points[0])


def test_resample_open_keeps_endpoints_and_exact_on_lines():
    line = PolyCurve.single(np.column_stack([np.linspace(0, 3, 7) ** 2, np.zeros(7)]), closed=False)
    r = resample_arclength(line, 10).components[0]
    assert np.allclose(r.points[:, 0], np.linspace(0, 9, 10))
    with pytest.raises(CurveError):
        resample_arclength(line, 4)


def test_stadium_is_symmetric_and_has_right_length():
    c = make_stadium(400, straight=2.0, radius=1.0)
    p = c.components[0].points
    assert c.length() == pytest.approx(4 + 2 * math.pi, rel=1e-4)
    mirrored = p * [-1, 1, 1]
    d = np.linalg.norm(mirrored[:, None] - p[None], axis=2).min(axis=1)
    assert d.max() < 1e-12


def test_helix_frames_are_orthonormal_with_unit_torsion():
    fr = component_frames(make_helix(2000, 0.5, 0.5, 2.0).components[0])
    assert fr.orthonormality_residual() < 1e-9
    inner = slice(10, -10)
    assert np.allclose(fr.tau[inner], 1.0, rtol=1e-3)


def test_ellipse_frames_are_planar():
    fr = component_frames(make_ellipse(256).components[0])
    assert np.allclose(np.abs(fr.B[:, 2]), 1.0)
    assert np.allclose(fr.tau, 0.0, atol=1e-9)


def test_frenet_zero_torsion_gives_unit_circle():
    c = frenet_integrate(lambda s: 0.0, 2 * math.pi, 400)
    p = c.components[0].points
    assert np.allclose(np.linalg.norm(p - [0, 1, 0], axis=1), 1.0, atol=1e-10)
    # RK4 phase error is O(h^4), h = 2 pi / 400
    assert np.linalg.norm(p[-1] - p[0]) < 1e-8


def test_frenet_constant_torsion_gives_helix():
    # kappa = tau = 1: radius 1/2, pitch parameter 1/2, axis along T + B
    L = 10.0
    c = frenet_integrate(lambda s: 1.0, L, 1000)
    p = c.components[0].points
    axis = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)
    along = p @ axis
    assert np.allclose(along, np.linspace(0, L, 1001) / math.sqrt(2), atol=1e-9)
    radial = p - np.outer(along, axis)
    center = np.array([0.0, 0.5, 0.0])
    assert np.allclose(np.linalg.norm(radial - center, axis=1), 0.5, atol=1e-9)


def test_frenet_rejects_bad_input():
    with pytest.raises(CurveError):
        frenet_integrate(lambda s: 0.0, -1.0, 10)
    with pytest.raises(CurveError):
        frenet_integrate(lambda s: math.nan, 1.0, 10)
    with pytest.raises(CurveError):
        frenet_integrate(lambda s: 0.0, 1.0, 10, T0=(1, 0, 0), N0=(1, 0, 0))
