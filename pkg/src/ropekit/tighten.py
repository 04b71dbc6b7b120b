"""Ropelength descent, curvature variations along normal fields, and the
check that a computed minimizer is thickness-limited by self-contact.

Lengths are normalized so the curvature cap is 1: after every step the
curve is rescaled to NIR = 1 / cap.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import least_squares
from scipy.spatial import cKDTree

from .curve import (
    Component,
    CurveError,
    PolyCurve,
    _frenet_rk4,
    component_curvature,
    component_frames,
    discrete_curvature,
    vertex_tangents,
)
from .parallel import pmap
from .dubins import BoundaryData, DubinsError, solve_clc_3d
from .thickness import DEFAULT_TOL, ThicknessError, ThicknessReport, classify_regimes, thickness


class TightenError(ValueError):
    pass


# --------------------------------------------------------------------------
# variation fields


@dataclass
class VariationField:
    curve: PolyCurve
    V: List[np.ndarray]  # one (n, 3) array per component

    def __post_init__(self):
        if len(self.V) != len(self.curve.components):
            raise TightenError("one vector array per component is required")
        self.V = [np.asarray(v, float) for v in self.V]
        for comp, v in zip(self.curve.components, self.V):
            if v.shape != comp.points.shape:
                raise TightenError("field does not match the curve's vertices")
            T = vertex_tangents(comp)
            off = np.abs(np.einsum("ij,ij->i", v, T)).max()
            if off > 1e-9:
                raise TightenError(f"field is not normal to the curve (max |V.T| = {off:.3g})")

    @classmethod
    def project(cls, curve: PolyCurve, V) -> "VariationField":
        """Remove the tangential part of arbitrary per-vertex vectors."""
        out = []
        for comp, v in zip(curve.components, V):
            v = np.asarray(v, float)
            T = vertex_tangents(comp)
            out.append(v - np.einsum("ij,ij->i", v, T)[:, None] * T)
        return cls(curve, out)

    @classmethod
    def principal_normal(cls, curve: PolyCurve) -> "VariationField":
        out = []
        for comp in curve.components:
            fr = component_frames(comp)
            if not fr.defined.all():
                raise TightenError("principal normal undefined at some vertex")
            out.append(fr.N)
        return cls(curve, out)

    @classmethod
    def random_smooth(cls, curve: PolyCurve, rng: np.random.Generator, modes: int = 3,
                      amplitude: float = 1.0) -> "VariationField":
        """Low-frequency Fourier field in arclength, projected to the normal plane."""
        out = []
        for comp in curve.components:
            s = comp.arclength()
            L = comp.length()
            u = 2 * math.pi * s / L
            v = np.zeros_like(comp.points)
            for k in range(modes + 1):
                a = rng.normal(size=3) / (1 + k)
                b = rng.normal(size=3) / (1 + k)
                v += np.outer(np.cos(k * u), a) + np.outer(np.sin(k * u), b)
            out.append(amplitude * v)
        return cls.project(curve, out)


def _derivatives(f: np.ndarray, p: np.ndarray, closed: bool):
    """First and second derivatives in arclength by three-point stencils.

    Spacing comes from the chord lengths, so slightly uneven samples are
    handled; open ends get NaN.
    """
    if closed:
        fm, fp = np.roll(f, 1, axis=0), np.roll(f, -1, axis=0)
        pm, pp = np.roll(p, 1, axis=0), np.roll(p, -1, axis=0)
    else:
        fm, fp = np.full_like(f, np.nan), np.full_like(f, np.nan)
        pm, pp = np.full_like(p, np.nan), np.full_like(p, np.nan)
        fm[1:], fp[:-1] = f[:-1], f[1:]
        pm[1:], pp[:-1] = p[:-1], p[1:]
    h1 = np.linalg.norm(p - pm, axis=1)[:, None]
    h2 = np.linalg.norm(pp - p, axis=1)[:, None]
    den = h1 * h2 * (h1 + h2)
    d1 = (h1**2 * fp - h2**2 * fm + (h2**2 - h1**2) * f) / den
    d2 = 2 * (h1 * fp - (h1 + h2) * f + h2 * fm) / den
    return d1, d2


def _check_unit_curvature(comp: Component, tol: float = 5e-2):
    k = component_curvature(comp)
    if not comp.closed:
        k = k[1:-1]
    dev = float(np.abs(k - 1).max())
    if dev > tol:
        raise TightenError(f"curvature deviates from 1 by {dev:.3g}; the variation formula needs unit curvature")


def _variation_parts(curve: PolyCurve, field: VariationField):
    out = []
    for comp, V in zip(curve.components, field.V):
        _check_unit_curvature(comp)
        g1, g2 = _derivatives(comp.points, comp.points, comp.closed)
        v1, v2 = _derivatives(V, comp.points, comp.closed)
        first = np.einsum("ij,ij->i", g2, v2) - 2 * np.einsum("ij,ij->i", g1, v1)
        out.append((comp, first, np.einsum("ij,ij->i", g1, v1)))
    return out


def curvature_variation_a(curve: PolyCurve, field: VariationField) -> List[np.ndarray]:
    """d kappa / d eps of gamma + eps V at eps = 0: gamma''.V'' - 2 gamma'.V'."""
    return [first for _, first, _ in _variation_parts(curve, field)]


def curvature_variation_b(curve: PolyCurve, field: VariationField) -> List[np.ndarray]:
    """Same for the copy rescaled back to the original length.

    Adds the mean of gamma'.V' over the loop, computed with the trapezoid
    rule over arclength.
    """
    if not all(c.closed for c in curve.components):
        raise TightenError("the length-rescaled variation needs closed components")
    out = []
    for comp, first, gv in _variation_parts(curve, field):
        e = comp.edge_lengths()
        integral = float(np.sum(0.5 * (gv + np.roll(gv, -1)) * e))
        out.append(first + integral / comp.length())
    return out


def rescaled_push(curve: PolyCurve, field: VariationField, eps: float) -> PolyCurve:
    """gamma + eps V scaled about the origin back to each component's length."""
    comps = []
    for comp, V in zip(curve.components, field.V):
        moved = Component(comp.points + eps * V, comp.closed)
        comps.append(Component(moved.points * (comp.length() / moved.length()), comp.closed))
    return PolyCurve(comps)


def fd_variation(curve: PolyCurve, field: VariationField, h: float = 1e-4,
                 rescale: bool = False) -> List[np.ndarray]:
    """Central difference of the discrete turning-angle curvature along V."""
    def kap(eps):
        if rescale:
            c = rescaled_push(curve, field, eps)
        else:
            c = PolyCurve([Component(comp.points + eps * V, comp.closed)
                           for comp, V in zip(curve.components, field.V)])
        return discrete_curvature(c).kappa

    kp, km = kap(h), kap(-h)
    out = []
    for a, b, comp in zip(kp, km, curve.components):
        d = (a - b) / (2 * h)
        if not comp.closed:
            d[[0, -1]] = np.nan
        out.append(d)
    return out


@dataclass
class PushReport:
    eps: float
    max_kappa: float
    base_max_kappa: float
    dcsd: float
    length: float
    base_length: float
    decreased: bool
    curve: PolyCurve

    def as_dict(self) -> dict:
        return {"eps": self.eps, "max_kappa": self.max_kappa, "base_max_kappa": self.base_max_kappa,
                "dcsd": self.dcsd, "length": self.length, "base_length": self.base_length,
                "max_kappa_below_one": self.decreased}


def normal_push_experiment(curve: PolyCurve, eps: float, tol: float = DEFAULT_TOL) -> PushReport:
    """Push along the principal normal by eps and rescale to the original length."""
    if not all(c.closed for c in curve.components):
        raise TightenError("the normal push needs closed components")
    if eps < 0:
        raise TightenError("eps must be nonnegative")
    field = VariationField.principal_normal(curve)
    pushed = curve.copy() if eps == 0 else rescaled_push(curve, field, eps)
    try:
        d = _dcsd_value(pushed, tol)
    except ThicknessError:
        d = math.nan
    mk = discrete_curvature(pushed).max_kappa
    return PushReport(eps, mk, discrete_curvature(curve).max_kappa, d, pushed.length(), curve.length(),
                      mk < 1.0, pushed)


def _dcsd_value(curve: PolyCurve, tol: float) -> float:
    from .thickness import dcsd
    return dcsd(curve, tol)[0]


# --------------------------------------------------------------------------
# a closed test curve with unit curvature and positive torsion


@dataclass
class ClosedFrenetCurve:
    curve: PolyCurve
    tau: np.ndarray  # torsion at the vertices
    period: float
    symmetry: int
    closure_defect: float


def _torsion_profile(s, b, c1, c2, period):
    w = 2 * math.pi * s / period
    return b + c1 * np.cos(w) + c2 * np.cos(2 * w)


def _period_map(b, c1, c2, period, n):
    s = np.linspace(0.0, period, 2 * n + 1)
    pts, y = _frenet_rk4(_torsion_profile(s, b, c1, c2, period), period / n,
                         np.zeros(3), np.eye(3)[0], np.eye(3)[1], np.eye(3)[2])
    return pts, np.column_stack([y[3:6], y[6:9], y[9:12]])


def _closure_residual(x, c2, symmetry, n):
    b, c1, P = x
    D, M = _period_map(b, c1, c2, P, n)
    ang = math.acos(max(-1.0, min(1.0, (np.trace(M) - 1) / 2)))
    axis = np.array([M[2, 1] - M[1, 2], M[0, 2] - M[2, 0], M[1, 0] - M[0, 1]])
    axis /= np.linalg.norm(axis)
    return [ang - 2 * math.pi / symmetry, D[-1] @ axis]


def closed_unit_curvature_curve(n_per_period: int = 2048, symmetry: int = 4, c2: float = 0.43742072880007665,
                                guess=(0.878418092, -4.69050102e-05, 9.55243691)) -> ClosedFrenetCurve:
    """Closed curve with curvature 1 and strictly positive periodic torsion.

    Torsion b + c1 cos(2 pi s/P) + c2 cos(4 pi s/P) is integrated over one
    period; b, c1 and P are tuned so the period's rigid motion is a screw
    with rotation angle 2 pi / symmetry and no axial advance, so repeating
    it symmetry times closes the curve smoothly.  The default parameters
    give torsion between about 0.44 and 1.32.
    """
    x = np.asarray(guess, float)
    for n in sorted({min(256, n_per_period), n_per_period}):
        x = least_squares(_closure_residual, x, args=(c2, symmetry, n), xtol=1e-15, ftol=1e-15, gtol=1e-15).x
    b, c1, P = x
    n = n_per_period
    s = np.linspace(0.0, symmetry * P, 2 * n * symmetry + 1)
    tau_half = _torsion_profile(s, b, c1, c2, P)
    pts, _ = _frenet_rk4(tau_half, P / n, np.zeros(3), np.eye(3)[0], np.eye(3)[1], np.eye(3)[2])
    defect = float(np.linalg.norm(pts[-1] - pts[0]))
    if defect > 1e-3:
        raise TightenError(f"closure defect {defect:.3g} too large")
    return ClosedFrenetCurve(PolyCurve([Component(pts[:-1], True)]), tau_half[:-1:2].copy(), P, symmetry, defect)


# --------------------------------------------------------------------------
# descent


@dataclass
class TightenConfig:
    max_iter: int = 2000
    eps0: float = 1e-2
    shrink: float = 0.5
    cap: float = 1.0
    margin: float = 1e-2
    tol: float = 1e-4
    seed: int = 0
    smoothing: float = 0.25
    sub_iters: int = 60
    window: int = 50
    min_eps: float = 1e-6

    def __post_init__(self):
        for name in ("eps0", "cap", "margin", "tol", "smoothing", "min_eps"):
            if not getattr(self, name) > 0:
                raise TightenError(f"{name} must be positive")
        if not 0 < self.shrink < 1:
            raise TightenError("shrink factor must lie in (0, 1)")
        if self.max_iter < 0 or self.sub_iters < 1 or self.window < 1:
            raise TightenError("iteration counts must be positive")


@dataclass
class TraceRecord:
    iter: int
    length: float
    nir: float
    dcsd: float
    maxk: float
    ropelength: float
    accepted: bool


@dataclass
class TightenTrace:
    records: List[TraceRecord] = field(default_factory=list)
    converged: bool = False
    budget: bool = False

    def append(self, it: int, rep: ThicknessReport, accepted: bool):
        self.records.append(TraceRecord(it, rep.length, rep.NIR, rep.DCSD, 1.0 / rep.F_k if rep.F_k > 0 else math.inf,
                                        rep.ropelength, accepted))

    def accepted_ropelength(self) -> np.ndarray:
        return np.array([r.ropelength for r in self.records if r.accepted])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "length", "nir", "dcsd", "maxk", "ropelength", "accepted"])
        for r in self.records:
            w.writerow([r.iter, repr(r.length), repr(r.nir), repr(r.dcsd), repr(r.maxk), repr(r.ropelength),
                        int(r.accepted)])
        return buf.getvalue()


def _normalize(curve: PolyCurve, cap: float, tol: float) -> Tuple[PolyCurve, ThicknessReport]:
    rep = thickness(curve, tol)
    f = (1.0 / cap) / rep.NIR
    if abs(f - 1) < 1e-15:
        return curve, rep
    c = curve.scaled(f)
    return c, thickness(c, tol)


def _arc_index_sep(n: int, closed: bool, i, j):
    d = np.abs(i - j)
    return np.minimum(d, n - d) if closed else d


def _close_pairs(curve: PolyCurve, radius: float, min_sep: float):
    """Vertex pairs closer than ``radius`` that are at least ``min_sep`` apart along the curve."""
    pts = curve.all_points()
    offs = np.cumsum([0] + [len(c) for c in curve.components])
    comp_id = np.repeat(np.arange(len(curve.components)), [len(c) for c in curve.components])
    pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    if len(pairs) == 0:
        return pairs
    keep = np.ones(len(pairs), bool)
    same = comp_id[pairs[:, 0]] == comp_id[pairs[:, 1]]
    for k, comp in enumerate(curve.components):
        m = same & (comp_id[pairs[:, 0]] == k)
        if not m.any():
            continue
        i, j = pairs[m, 0] - offs[k], pairs[m, 1] - offs[k]
        s = comp.arclength()
        sep = np.abs(s[i] - s[j])
        if comp.closed:
            sep = np.minimum(sep, comp.length() - sep)
        keep[np.flatnonzero(m)] = sep >= min_sep
    return pairs[keep]


def min_nonlocal_distance(curve: PolyCurve, r: float) -> float:
    """Smallest distance between vertices at least pi r apart along the curve."""
    pairs = _close_pairs(curve, 2.5 * r, math.pi * r)
    if len(pairs) == 0:
        return math.inf
    pts = curve.all_points()
    return float(np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1).min())


def _project(curve: PolyCurve, r: float, cap: float, cfg: TightenConfig) -> Optional[PolyCurve]:
    """Push overlapping strands apart and relax over-curved vertices.

    Fails (returns None) only if overlaps remain after the sub-iterations.
    """
    comps = [c.points.copy() for c in curve.components]
    closed = [c.closed for c in curve.components]
    offs = np.cumsum([0] + [len(p) for p in comps])
    target = 2 * r
    for _ in range(cfg.sub_iters):
        cur = PolyCurve([Component(p, c) for p, c in zip(comps, closed)])
        pts = cur.all_points()
        pairs = _close_pairs(cur, target * (1 - 0.25 * cfg.margin), math.pi * r)
        bad_k = [np.flatnonzero(component_curvature(Component(p, c)) > cap * (1 + 1e-9))
                 for p, c in zip(comps, closed)]
        if len(pairs) == 0 and all(len(b) == 0 for b in bad_k):
            return cur
        if len(pairs):
            d = pts[pairs[:, 1]] - pts[pairs[:, 0]]
            dist = np.linalg.norm(d, axis=1)
            u = d / np.maximum(dist, 1e-300)[:, None]
            push = 0.5 * (target - dist)[:, None] * u
            disp = np.zeros_like(pts)
            np.add.at(disp, pairs[:, 0], -push)
            np.add.at(disp, pairs[:, 1], push)
            pts = pts + disp
            comps = [pts[offs[k]:offs[k + 1]].copy() for k in range(len(comps))]
        for k, (p, c) in enumerate(zip(comps, closed)):
            kap = component_curvature(Component(p, c))
            bad = np.flatnonzero(kap > cap * (1 + 1e-9))
            if len(bad) == 0:
                continue
            n = len(p)
            if c:
                mid = 0.5 * (p[(bad - 1) % n] + p[(bad + 1) % n])
            else:
                bad = bad[(bad > 0) & (bad < n - 1)]
                mid = 0.5 * (p[bad - 1] + p[bad + 1])
            # move just far enough to bring the turning back under the cap
            frac = np.minimum(0.5, (kap[bad] - cap) / kap[bad])
            p[bad] += frac[:, None] * (mid - p[bad])
    # curvature excess is removed by the renormalization that follows;
    # unresolved overlaps are not
    cur = PolyCurve([Component(p, c) for p, c in zip(comps, closed)])
    if len(_close_pairs(cur, target * (1 - 0.25 * cfg.margin), math.pi * r)):
        return None
    return cur


def redistribute(comp: Component, n: Optional[int] = None, oversample: int = 8) -> Component:
    """Equal-arclength vertices on the periodic C2 cubic through a closed polygon.

    Linear resampling would leave the turning concentrated at the old
    corners; the spline spreads it smoothly.
    """
    n = len(comp) if n is None else n
    p = np.vstack([comp.points, comp.points[:1]])
    u = np.concatenate([[0.0], np.cumsum(comp.edge_lengths())])
    sp = CubicSpline(u, p, bc_type="periodic")
    fine = np.linspace(0.0, u[-1], oversample * len(comp) + 1)
    q = sp(fine)
    s = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(q, axis=0), axis=1))])
    targets = np.arange(n) * (s[-1] / n)
    return Component(sp(np.interp(targets, s, fine)), True)


def tighten_step(curve: PolyCurve, config: TightenConfig, eps: Optional[float] = None,
                 report: Optional[ThicknessReport] = None) -> Tuple[PolyCurve, bool]:
    """One shrink-and-project move; accepted iff ropelength strictly drops.

    The input is first normalized to NIR = 1 / cap.  The proposal scales
    each component toward its centroid by (1 - eps) and mixes in a
    Laplacian smoothing; projection restores the non-local distance 2 NIR
    and the curvature cap; vertices are redistributed evenly in arclength
    and the result is renormalized.
    """
    if not all(c.closed for c in curve.components):
        raise TightenError("tightening needs closed components")
    eps = config.eps0 if eps is None else eps
    tol = DEFAULT_TOL
    if report is None:
        curve, report = _normalize(curve, config.cap, tol)
    r = 1.0 / config.cap
    n_per = [len(c) for c in curve.components]
    comps = []
    for comp in curve.components:
        p = comp.points
        c = p.mean(axis=0)
        lap = np.roll(p, 1, axis=0) + np.roll(p, -1, axis=0) - 2 * p
        comps.append(Component(c + (1 - eps) * (p - c) + config.smoothing * (eps / config.eps0) * lap, True))
    try:
        prop = PolyCurve(comps)
    except CurveError:
        return curve, False
    moved = max(float(np.linalg.norm(a.points - b.points, axis=1).max()) for a, b in zip(prop.components, curve.components))
    if moved > 0.25 * r:
        return curve, False
    proj = _project(prop, r, config.cap, config)
    if proj is None:
        return curve, False
    try:
        proj = PolyCurve([redistribute(c, n) for c, n in zip(proj.components, n_per)])
        new, rep = _normalize(proj, config.cap, tol)
    except (CurveError, ThicknessError):
        return curve, False
    if not rep.ropelength < report.ropelength:
        return curve, False
    if min_nonlocal_distance(new, r) < 2 * r * (1 - config.margin):
        return curve, False
    return new, True


def tighten(curve: PolyCurve, config: Optional[TightenConfig] = None) -> Tuple[PolyCurve, TightenTrace]:
    """Repeat tighten_step with step-size control until the ropelength stalls."""
    cfg = config or TightenConfig()
    tol = DEFAULT_TOL
    cur, rep = _normalize(curve, cfg.cap, tol)
    trace = TightenTrace()
    trace.append(0, rep, True)
    eps = cfg.eps0
    best = [rep.ropelength]
    for it in range(1, cfg.max_iter + 1):
        new, ok = tighten_step(cur, cfg, eps, rep)
        if ok:
            cur = new
            rep = thickness(cur, tol)
            eps = min(cfg.eps0, eps * 1.5)
        else:
            eps *= cfg.shrink
        trace.append(it, rep, ok)
        best.append(rep.ropelength)
        if eps < cfg.min_eps:
            trace.converged = True
            break
        if it >= cfg.window and best[-cfg.window - 1] - best[-1] < cfg.tol:
            trace.converged = True
            break
    else:
        trace.budget = True
    return cur, trace


# --------------------------------------------------------------------------
# checks at a computed minimizer


@dataclass
class ContactVerdict:
    delta: float
    passed: bool
    tol_rel: float
    active: str
    nir: float
    dcsd: float
    F_k: float
    constant_curvature: bool
    n_max_curvature: int

    def as_dict(self) -> dict:
        return {"delta": self.delta, "verdict": "PASS" if self.passed else "FAIL", "tol_rel": self.tol_rel,
                "active": self.active, "nir": self.nir, "dcsd": self.dcsd, "F_k": self.F_k,
                "constant_curvature": self.constant_curvature, "n_max_curvature": self.n_max_curvature}


def verify_contact_condition(curve: PolyCurve, tol_rel: float = 0.05, tol: float = DEFAULT_TOL,
                             kappa_tol: float = 1e-2) -> ContactVerdict:
    """delta = |2 NIR - DCSD| / DCSD; PASS iff delta <= tol_rel."""
    rep = thickness(curve, tol)
    delta = abs(2 * rep.NIR - rep.DCSD) / rep.DCSD
    part = classify_regimes(curve, rep, kappa_tol=kappa_tol, tol=tol)
    closed_k = np.concatenate([kk if c.closed else kk[1:-1]
                               for kk, c in zip(discrete_curvature(curve).kappa, curve.components)])
    const = bool(closed_k.max() - closed_k.min() <= kappa_tol * closed_k.max()) if len(closed_k) else False
    n_mx = sum(len(x) for x in part.I_mx)
    return ContactVerdict(delta, delta <= tol_rel, tol_rel, rep.active, rep.NIR, rep.DCSD, rep.F_k, const, n_mx)


verify_theorem1 = verify_contact_condition


@dataclass
class SubarcReport:
    excess: List[float]
    windows: List[Tuple[int, int]]
    skipped: List[str]
    window_length: float

    @property
    def max_excess(self) -> float:
        return max(self.excess) if self.excess else math.nan

    def fraction_within(self, rel: float = 1e-2) -> float:
        if not self.excess:
            return 0.0
        return float(np.mean([e <= rel * self.window_length for e in self.excess]))

    @property
    def passed(self) -> bool:
        return bool(self.excess) and self.max_excess <= 1e-2 * self.window_length


def subarc_dubins_check(curve: PolyCurve, window: float = 0.05, count: int = 16,
                        component: int = 0, starts=None) -> SubarcReport:
    """Compare subarc lengths with the best CLC joining their end data."""
    comp = curve.components[component]
    if curve.dim != 3:
        raise TightenError("subarc check works in R^3")
    n = len(comp)
    L = comp.length()
    T = vertex_tangents(comp)
    # scale to unit curvature cap: the CLC solver uses radius 1
    nir = thickness(curve).NIR
    scale = 1.0 / nir
    steps = max(1, int(round(window * n)))
    if starts is None:
        starts = np.linspace(0, n, count, endpoint=False).astype(int) if comp.closed else \
            np.linspace(0, n - 1 - steps, count).astype(int)

    def one(i):
        j = (i + steps) % n if comp.closed else i + steps
        idx = [(i + k) % n for k in range(steps + 1)]
        sub_len = float(np.linalg.norm(np.diff(comp.points[idx], axis=0), axis=1).sum()) * scale
        bd = BoundaryData(comp.points[i] * scale, T[i], comp.points[j] * scale, T[j])
        try:
            return int(i), int(j), (sub_len - solve_clc_3d(bd).length) / scale, None
        except DubinsError as e:
            return int(i), int(j), None, f"window {i}-{j}: {e}"

    excess, wins, skipped = [], [], []
    for i, j, ex, note in pmap(one, starts):
        if note is not None:
            skipped.append(note)
        else:
            excess.append(ex)
            wins.append((i, j))
    return SubarcReport(excess, wins, skipped, steps * L / n)
