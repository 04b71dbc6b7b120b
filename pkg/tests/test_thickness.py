import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ropekit.curve import (
    PolyCurve,
    make_circle,
    make_coaxial_circles,
    make_ellipse,
    make_random_fourier,
    make_stadium,
    make_torus_knot,
)
from ropekit.thickness import (
    ThicknessError,
    ball_radius_oracle,
    classify_regimes,
    dcsd,
    dcsd_exhaustive,
    find_double_critical_pairs,
    thickness,
)


def _rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    return q if np.linalg.det(q) > 0 else -q


def test_circle_report():
    rep = thickness(make_circle(512))
    assert rep.NIR == pytest.approx(1.0, abs=1e-3)
    assert rep.DCSD == pytest.approx(2.0, abs=1e-3)
    assert rep.ropelength == pytest.approx(2 * math.pi, abs=1e-2)
    # every minimal pair is a diameter
    for p in rep.minimal_pairs:
        assert np.allclose(p.p, -p.q, atol=1e-6)


def test_pairs_are_double_critical():
    c = make_torus_knot(2, 3, n=128)
    for p in find_double_critical_pairs(c):
        assert abs(p.r1) < 1e-6 and abs(p.r2) < 1e-6
        assert p.distance == pytest.approx(np.linalg.norm(p.p - p.q))


def test_ellipse_is_curvature_limited():
    # kappa max = a / b^2 = 2 at the ends of the major axis; minor axis width 2
    rep = thickness(make_ellipse(1024, 2.0, 1.0))
    assert rep.F_k == pytest.approx(0.5, rel=1e-3)
    assert rep.DCSD == pytest.approx(2.0, rel=1e-6)
    assert rep.active == "curvature"


def test_stadium_width_and_curvature():
    rep = thickness(make_stadium(512, straight=2.0, radius=1.0))
    assert rep.DCSD == pytest.approx(2.0, rel=1e-6)
    assert rep.NIR == pytest.approx(1.0, rel=1e-2)


@pytest.mark.parametrize("sep", [0.5, 1.0, 1.5])
def test_coaxial_circles_separation(sep):
    rep = thickness(make_coaxial_circles(128, separation=sep))
    assert rep.DCSD == pytest.approx(sep, rel=1e-6)
    assert rep.NIR == pytest.approx(sep / 2, rel=1e-6)
    assert rep.active == "dcsd"


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(16, 64))
def test_accelerated_scan_matches_exhaustive(seed, n):
    c = make_random_fourier(n, np.random.default_rng(seed))
    d1, p1 = dcsd(c)
    d2, p2 = dcsd_exhaustive(c)
    assert d1 == d2
    assert [(p.i, p.j, round(p.x, 6), round(p.y, 6)) for p in p1] == \
           [(p.i, p.j, round(p.x, 6), round(p.y, 6)) for p in p2]


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), scale=st.floats(0.1, 10.0))
def test_similarity_invariance(seed, scale):
    rng = np.random.default_rng(seed)
    c = make_random_fourier(96, rng)
    R, t = _rotation(rng), rng.normal(size=3)
    moved = PolyCurve.single(scale * c.components[0].points @ R.T + t)
    a, b = thickness(c), thickness(moved)
    assert b.DCSD == pytest.approx(scale * a.DCSD, rel=1e-9)
    assert b.F_k == pytest.approx(scale * a.F_k, rel=1e-9)
    assert b.ropelength == pytest.approx(a.ropelength, rel=1e-9)


def test_vertex_shift_invariance():
    c = make_torus_knot(2, 3, n=128)
    rolled = PolyCurve.single(np.roll(c.components[0].points, 37, axis=0))
    assert thickness(rolled).DCSD == pytest.approx(thickness(c).DCSD, rel=1e-9)


def test_nonpositive_tolerance_rejected():
    with pytest.raises((ThicknessError, ValueError)):
        thickness(make_circle(64), tol=0.0)


def test_oracles_bracket_circle():
    c = make_circle(128)
    rep = thickness(c, oracles=True)
    for v in (rep.R_O, rep.rho_G_min, rep.F_g_min):
        assert v == pytest.approx(rep.NIR, rel=2e-2)
    assert ball_radius_oracle(c, 0.9)
    assert not ball_radius_oracle(c, 1.1)


def test_regimes_circle_and_stadium():
    c = make_circle(128)
    part = classify_regimes(c, thickness(c))
    assert len(part.I_mx[0]) == 128 and len(part.I_c[0]) == 128
    s = make_stadium(256)
    part = classify_regimes(s, thickness(s))
    z = part.I_z[0]
    # the two straights hold 4 / (4 + 2 pi) of the vertices
    assert abs(len(z) - 256 * 4 / (4 + 2 * math.pi)) <= 4
    assert len(part.unclassified(0, 256)) == 0
