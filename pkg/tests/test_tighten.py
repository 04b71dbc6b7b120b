import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ropekit.curve import (
    PolyCurve,
    frenet_integrate,
    make_circle,
    make_ellipse,
    make_stadium,
    make_torus_knot,
)
from ropekit.thickness import thickness
from ropekit.tighten import (
    TightenConfig,
    TightenError,
    VariationField,
    curvature_variation_a,
    curvature_variation_b,
    fd_variation,
    min_nonlocal_distance,
    normal_push_experiment,
    redistribute,
    subarc_dubins_check,
    tighten,
    tighten_step,
    verify_contact_condition,
    verify_theorem1,
)


@pytest.fixture(scope="module")
def fine_circle():
    return make_circle(4096)


def test_field_must_be_normal():
    c = make_circle(64)
    with pytest.raises(TightenError):
        VariationField(c, [np.tile([1.0, 0.0, 0.0], (64, 1))])
    V = VariationField.project(c, [np.tile([1.0, 0.0, 0.0], (64, 1))])
    assert np.abs(V.V[0][:, 2]).max() == 0.0


def test_variation_needs_unit_curvature():
    c = make_circle(64, radius=2.0)
    with pytest.raises(TightenError):
        curvature_variation_a(c, VariationField.principal_normal(c))


@settings(max_examples=4, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_variation_formulas_match_finite_differences(fine_circle, seed):
    V = VariationField.random_smooth(fine_circle, np.random.default_rng(seed))
    a = curvature_variation_a(fine_circle, V)[0]
    b = curvature_variation_b(fine_circle, V)[0]
    assert np.abs(a - fd_variation(fine_circle, V)[0]).max() <= 1e-4
    assert np.abs(b - fd_variation(fine_circle, V, rescale=True)[0]).max() <= 1e-4


def test_variation_on_open_unit_curve_has_nan_ends():
    c = frenet_integrate(lambda s: 0.5, 6.0, 600)
    V = VariationField.random_smooth(c, np.random.default_rng(0))
    a = curvature_variation_a(c, V)[0]
    assert np.isnan(a[0]) and np.isnan(a[-1])
    fd = fd_variation(c, V)[0]
    assert np.nanmax(np.abs(a - fd)) <= 1e-3
    with pytest.raises(TightenError):
        curvature_variation_b(c, V)


def test_inward_normal_push_on_circle_is_length_neutral(fine_circle):
    # tau = 0, so the rescaled normal push leaves curvature unchanged to first order
    N = VariationField.principal_normal(fine_circle)
    assert np.abs(curvature_variation_b(fine_circle, N)[0]).max() <= 1e-4
    rep = normal_push_experiment(make_circle(256), 1e-3)
    assert rep.length == pytest.approx(rep.base_length, rel=1e-12)
    assert rep.max_kappa == pytest.approx(rep.base_max_kappa, rel=1e-9)


@pytest.mark.parametrize("kw", [dict(eps0=0), dict(shrink=1.0), dict(max_iter=-1), dict(cap=-1), dict(window=0)])
def test_config_validation(kw):
    with pytest.raises(TightenError):
        TightenConfig(**kw)


def test_redistribute_spacing_and_shape():
    c = make_circle(64).components[0]
    # cluster the vertices on one side
    t = np.linspace(0, 1, 64, endpoint=False) ** 1.5 * 2 * math.pi
    uneven = type(c)(np.column_stack([np.cos(t), np.sin(t), np.zeros(64)]), True)
    r = redistribute(uneven)
    el = r.edge_lengths()
    assert el.max() / el.min() < 1.01
    assert np.abs(np.linalg.norm(r.points, axis=1) - 1).max() < 5e-3


def test_circle_is_already_minimal():
    final, trace = tighten(make_circle(64), TightenConfig(max_iter=200))
    assert trace.converged and not trace.budget
    assert [r.accepted for r in trace.records[1:]] == [False] * (len(trace.records) - 1)
    assert thickness(final).ropelength == pytest.approx(trace.records[0].ropelength)


def test_ellipse_tightens_towards_circle():
    cfg = TightenConfig(max_iter=400)
    final, trace = tighten(make_ellipse(64), cfg)
    rope = trace.accepted_ropelength()
    assert np.all(np.diff(rope) < 0)
    assert rope[-1] < rope[0]
    assert rope[-1] >= 2 * math.pi * (1 - 1e-3)
    rep = thickness(final)
    assert rep.NIR == pytest.approx(1 / cfg.cap, rel=1e-9)
    assert min_nonlocal_distance(final, rep.NIR) >= 2 * rep.NIR * (1 - cfg.margin)


def test_budget_flag_and_zero_budget():
    _, trace = tighten(make_ellipse(64), TightenConfig(max_iter=3))
    assert trace.budget and not trace.converged
    assert len(trace.records) == 4
    _, trace = tighten(make_ellipse(64), TightenConfig(max_iter=0))
    assert trace.budget and len(trace.records) == 1


def test_single_step_is_monotone():
    c = make_torus_knot(2, 3, n=128).scaled(1 / thickness(make_torus_knot(2, 3, n=128)).NIR)
    before = thickness(c).ropelength
    new, ok = tighten_step(c, TightenConfig())
    after = thickness(new).ropelength
    assert after < before if ok else new is c


def test_trace_csv_and_determinism():
    runs = [tighten(make_ellipse(48), TightenConfig(max_iter=15, seed=3))[1].to_csv() for _ in range(2)]
    assert runs[0] == runs[1]
    lines = runs[0].splitlines()
    assert lines[0] == "iter,length,nir,dcsd,maxk,ropelength,accepted"
    assert len(lines) == 17


def test_minimizer_check_separates_circle_and_ellipse():
    assert verify_contact_condition(make_circle(256), tol_rel=1e-3).passed
    assert verify_theorem1 is verify_contact_condition
    v = verify_contact_condition(make_ellipse(256))
    assert not v.passed
    assert v.delta == pytest.approx(0.5, abs=0.02)
    assert v.active == "curvature"


def test_subarc_check_controls():
    circ = subarc_dubins_check(make_circle(128))
    assert circ.passed and not circ.skipped
    # windows on the straights of a stadium are straight segments
    st_curve = make_stadium(256)
    n_straight = int(256 * 2 / (4 + 2 * math.pi))
    starts = [256 - n_straight // 2]
    rep = subarc_dubins_check(st_curve, window=n_straight / 256 * 0.8, starts=starts)
    # straight data are a singular case for the solver; it meets the ends to 1e-7
    assert abs(rep.excess[0]) < 1e-6


def test_subarc_check_needs_space_curve():
    with pytest.raises(TightenError):
        subarc_dubins_check(PolyCurve.single(make_circle(64).components[0].points[:, :2]))
