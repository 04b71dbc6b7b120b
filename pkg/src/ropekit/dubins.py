"""Curvature-constrained shortest paths with unit turning radius.

Planar queries are solved exactly by enumerating the six classical words.
In R^3 the module searches circle-line-circle candidates by multi-start
root finding and synthesises helicoidal arcs from the torsion ODE; it does
not certify global optimality in 3D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from .curve import Component, PolyCurve, frenet_integrate_samples, resample_arclength

TWO_PI = 2 * math.pi
ZERO_LEN = 1e-12


class DubinsError(RuntimeError):
    pass


def _unit(v) -> np.ndarray:
    v = np.asarray(v, float)
    return v / np.linalg.norm(v)


def _rotate(v: np.ndarray, axis: np.ndarray, ang: float) -> np.ndarray:
    """Rodrigues rotation of v about the unit axis by ang."""
    c, s = math.cos(ang), math.sin(ang)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1 - c)


@dataclass
class BoundaryData:
    p: np.ndarray
    v: np.ndarray
    q: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.p, self.v, self.q, self.w = (np.array(a, float).reshape(-1) for a in (self.p, self.v, self.q, self.w))
        if len(self.p) == 2:
            self.p, self.v, self.q, self.w = (np.append(a, 0.0) for a in (self.p, self.v, self.q, self.w))
        for name in ("v", "w"):
            if abs(np.linalg.norm(getattr(self, name)) - 1) > 1e-12:
                raise DubinsError(f"{name} must be a unit vector")

    def reversed(self) -> "BoundaryData":
        return BoundaryData(self.q, -self.w, self.p, -self.v)


# --------------------------------------------------------------------------
# paths


@dataclass
class Arc:
    center: np.ndarray
    axis: np.ndarray  # rotation axis; the arc turns counter-clockwise about it
    start: np.ndarray
    angle: float
    turn: str = "C"
    radius: float = 1.0

    @property
    def length(self) -> float:
        return self.angle * self.radius

    def point(self, s: float) -> np.ndarray:
        return self.center + _rotate(self.start - self.center, self.axis, s / self.radius)

    def tangent(self, s: float) -> np.ndarray:
        r = self.point(s) - self.center
        return np.cross(self.axis, r) / self.radius

    @property
    def end(self) -> np.ndarray:
        return self.point(self.length)


@dataclass
class Line:
    start: np.ndarray
    end: np.ndarray
    turn: str = "S"
    # exact unit direction when known; very short lines cannot recover it from the ends
    direction: Optional[np.ndarray] = None

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def point(self, s: float) -> np.ndarray:
        L = self.length
        if L == 0:
            return self.start.copy()
        return self.start + (self.end - self.start) * (s / L)

    def tangent(self, s: float) -> np.ndarray:
        if self.direction is not None:
            return self.direction.copy()
        return _unit(self.end - self.start)


Segment = Union[Arc, Line]


@dataclass
class DubinsPath:
    segments: List[Segment]
    family: str = ""
    boundary: Optional[BoundaryData] = None

    @property
    def word(self) -> str:
        return "".join(s.turn for s in self.segments)

    @property
    def length(self) -> float:
        return float(sum(s.length for s in self.segments))

    def point(self, s: float) -> np.ndarray:
        if not self.segments:
            # coincident poses: the empty path
            return self.boundary.p.copy()
        seg, loc = self._locate(s)
        return seg.point(loc)

    def tangent(self, s: float) -> np.ndarray:
        if not self.segments:
            return self.boundary.v.copy()
        seg, loc = self._locate(s)
        return seg.tangent(loc)

    def _locate(self, s: float):
        for seg in self.segments[:-1]:
            if s <= seg.length:
                return seg, s
            s -= seg.length
        return self.segments[-1], min(s, self.segments[-1].length)

    def joint_gaps(self):
        """Largest position and tangent-angle mismatch over the joints."""
        pos, ang = 0.0, 0.0
        for a, b in zip(self.segments, self.segments[1:]):
            pos = max(pos, float(np.linalg.norm(a.point(a.length) - b.point(0.0))))
            c = float(np.clip(np.dot(a.tangent(a.length), b.tangent(0.0)), -1, 1))
            ang = max(ang, math.acos(c))
        return pos, ang

    def boundary_error(self, bd: BoundaryData) -> float:
        L = self.length
        return float(max(
            np.linalg.norm(self.point(0.0) - bd.p),
            np.linalg.norm(self.tangent(0.0) - bd.v),
            np.linalg.norm(self.point(L) - bd.q),
            np.linalg.norm(self.tangent(L) - bd.w),
        ))

    def as_dict(self) -> dict:
        segs = []
        for s in self.segments:
            if isinstance(s, Arc):
                segs.append({"type": "arc", "turn": s.turn, "center": s.center.tolist(), "axis": s.axis.tolist(),
                             "start": s.start.tolist(), "angle": s.angle, "radius": s.radius})
            else:
                segs.append({"type": "line", "start": s.start.tolist(), "end": s.end.tolist()})
        return {"word": self.word, "family": self.family, "length": self.length, "segments": segs}


def _compress(segments: List[Segment]) -> List[Segment]:
    kept = [s for s in segments if s.length > ZERO_LEN]
    return kept


# --------------------------------------------------------------------------
# planar words


def _angle(v2) -> float:
    return math.atan2(v2[1], v2[0])


def _mod2pi(a: float) -> float:
    r = a % TWO_PI
    return 0.0 if abs(r - TWO_PI) < 1e-15 else r


def _J(v):
    return np.array([-v[1], v[0]])


@dataclass
class _Candidate2D:
    family: str
    length: float
    pieces: list  # (kind, data) in plane coordinates


def _csc(p, th0, q, th1, d1: int, d2: int) -> Optional[_Candidate2D]:
    v = np.array([math.cos(th0), math.sin(th0)])
    w = np.array([math.cos(th1), math.sin(th1)])
    c1 = p + d1 * _J(v)
    c2 = q + d2 * _J(w)
    D = c2 - c1
    dd = float(D @ D)
    if d1 == d2:
        if dd < 1e-24:
            t = w
            lam = 0.0
        else:
            lam = math.sqrt(dd)
            t = D / lam
    else:
        if dd < 4.0:
            return None
        lam = math.sqrt(max(dd - 4.0, 0.0))
        t = (lam * D + 2 * d1 * _J(D)) / dd
    phi1 = _mod2pi(d1 * (_angle(t) - th0))
    phi2 = _mod2pi(d2 * (th1 - _angle(t)))
    x1 = c1 - d1 * _J(t)
    x2 = x1 + lam * t
    fam = ("L" if d1 > 0 else "R") + "S" + ("L" if d2 > 0 else "R")
    pieces = [("C", (c1, d1, p, phi1)), ("S", (x1, x2, t)), ("C", (c2, d2, x2, phi2))]
    return _Candidate2D(fam, phi1 + lam + phi2, pieces)


def _ccc(p, th0, q, th1, d: int) -> List[_Candidate2D]:
    v = np.array([math.cos(th0), math.sin(th0)])
    w = np.array([math.cos(th1), math.sin(th1)])
    c1 = p + d * _J(v)
    c3 = q + d * _J(w)
    D = c3 - c1
    dist = float(np.linalg.norm(D))
    if dist > 4.0 or dist < 1e-15:
        return []
    mid = 0.5 * (c1 + c3)
    h = math.sqrt(max(4.0 - dist * dist / 4.0, 0.0))
    perp = _J(D / dist)
    out = []
    fam = "LRL" if d > 0 else "RLR"
    for sgn in (1, -1):
        c2 = mid + sgn * h * perp
        x12 = 0.5 * (c1 + c2)
        x23 = 0.5 * (c2 + c3)
        t12 = d * _J(x12 - c1)
        t23 = d * _J(x23 - c3)
        phi1 = _mod2pi(d * (_angle(t12) - th0))
        phi2 = _mod2pi(-d * (_angle(t23) - _angle(t12)))
        phi3 = _mod2pi(d * (th1 - _angle(t23)))
        pieces = [("C", (c1, d, p, phi1)), ("C", (c2, -d, x12, phi2)), ("C", (c3, d, x23, phi3))]
        out.append(_Candidate2D(fam, phi1 + phi2 + phi3, pieces))
    return out


def ccc_middle_ok(angle: float) -> bool:
    return math.pi <= angle < TWO_PI


def ccc_filter(path: DubinsPath) -> bool:
    """True iff the middle arc of a CCC path spans an angle in [pi, 2 pi)."""
    if len(path.segments) != 3 or not all(isinstance(s, Arc) for s in path.segments):
        raise DubinsError(f"ccc_filter needs a CCC word, got {path.word!r}")
    return ccc_middle_ok(path.segments[1].angle)


@dataclass
class _Plane:
    origin: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    normal: np.ndarray

    def to2(self, x):
        d = x - self.origin
        return np.array([d @ self.e1, d @ self.e2])

    def to3(self, x2):
        return self.origin + x2[0] * self.e1 + x2[1] * self.e2

    def dir2(self, v):
        return math.atan2(v @ self.e2, v @ self.e1)


def _common_plane(bd: BoundaryData, tol: float = 1e-9) -> Optional[_Plane]:
    d = bd.q - bd.p
    scale = max(1.0, float(np.linalg.norm(d)))
    n = np.cross(bd.v, bd.w)
    if np.linalg.norm(n) < 1e-9:
        n = np.cross(bd.v, d)
        if np.linalg.norm(n) < 1e-9 * scale:
            # everything collinear: any plane through v will do
            a = np.array([1.0, 0.0, 0.0]) if abs(bd.v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            n = np.cross(bd.v, a)
    n = _unit(n)
    if abs(d @ n) > tol * scale or abs(bd.w @ n) > tol:
        return None
    e1 = bd.v.copy()
    e2 = np.cross(n, e1)
    return _Plane(bd.p.copy(), e1, e2, n)


def is_coplanar(bd: BoundaryData, tol: float = 1e-9) -> bool:
    return _common_plane(bd, tol) is not None


def _build_planar(cand: _Candidate2D, plane: _Plane) -> DubinsPath:
    segs: List[Segment] = []
    for kind, data in cand.pieces:
        if kind == "C":
            c, d, start, phi = data
            axis = plane.normal if d > 0 else -plane.normal
            segs.append(Arc(plane.to3(c), axis.copy(), plane.to3(start), phi, "L" if d > 0 else "R"))
        else:
            a, b, t = data
            segs.append(Line(plane.to3(a), plane.to3(b), direction=t[0] * plane.e1 + t[1] * plane.e2))
    return DubinsPath(_compress(segs), family=cand.family)


def planar_candidates(bd: BoundaryData) -> List[DubinsPath]:
    """Every CSC and filter-passing CCC candidate, shortest first."""
    plane = _common_plane(bd)
    if plane is None:
        raise DubinsError("boundary data are not coplanar")
    p2 = plane.to2(bd.p)
    q2 = plane.to2(bd.q)
    th0 = plane.dir2(bd.v)
    th1 = plane.dir2(bd.w)
    cands: List[_Candidate2D] = []
    for d1 in (1, -1):
        for d2 in (1, -1):
            c = _csc(p2, th0, q2, th1, d1, d2)
            if c is not None:
                cands.append(c)
    for d in (1, -1):
        for c in _ccc(p2, th0, q2, th1, d):
            if ccc_middle_ok(c.pieces[1][1][3]):
                cands.append(c)
    order = {"LSL": 0, "RSR": 1, "LSR": 2, "RSL": 3, "LRL": 4, "RLR": 5}
    cands.sort(key=lambda c: (c.length, order[c.family]))
    out = []
    for c in cands:
        path = _build_planar(c, plane)
        path.boundary = bd
        out.append(path)
    return out


def solve_dubins_2d(bd: BoundaryData, words: Optional[Sequence[str]] = None) -> DubinsPath:
    """Shortest planar path over the six words, optionally restricted to ``words``."""
    cands = planar_candidates(bd)
    if words is not None:
        cands = [c for c in cands if c.family in words]
    for path in cands:
        if path.boundary_error(bd) <= 1e-9 * max(1.0, path.length):
            return path
    raise DubinsError(f"no feasible word for p={bd.p}, q={bd.q} (degenerate boundary data)")


# --------------------------------------------------------------------------
# CLC in R^3


def _perp_basis(v: np.ndarray):
    a = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = _unit(a - (a @ v) * v)
    e2 = np.cross(v, e1)
    return e1, e2


def _clc_parts(bd: BoundaryData, e1, e2, a: float, th: float, lam: float):
    u = math.cos(a) * e1 + math.sin(a) * e2
    x1 = bd.p + (1 - math.cos(th)) * u + math.sin(th) * bd.v
    t1 = math.sin(th) * u + math.cos(th) * bd.v
    x2 = x1 + lam * t1
    return u, x1, t1, x2


def _end_arc_disp(t1: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Displacement of the short unit arc turning tangent t1 into w: tan(theta/2)(t1 + w)."""
    s = t1 + w
    ns = np.linalg.norm(s)
    if ns < 1e-14:
        return np.full(3, np.nan)
    return (np.linalg.norm(t1 - w) / ns) * s


def _clc_residual_batch(X: np.ndarray, bd: BoundaryData, e1, e2, sign: np.ndarray) -> np.ndarray:
    a, th, lam = X[:, 0:1], X[:, 1:2], X[:, 2:3]
    u = np.cos(a) * e1 + np.sin(a) * e2
    x1 = bd.p + (1 - np.cos(th)) * u + np.sin(th) * bd.v
    t1 = np.sin(th) * u + np.cos(th) * bd.v
    s = t1 + bd.w
    ns = np.linalg.norm(s, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        disp = (np.linalg.norm(t1 - bd.w, axis=1, keepdims=True) / ns) * s
    r = x1 + lam * t1 + sign[:, None] * disp - bd.q
    r[~np.all(np.isfinite(r), axis=1)] = 1e6
    return r


def _lm_batch(X: np.ndarray, fun, max_iter: int = 200, h: float = 1e-7):
    """Levenberg-Marquardt on many independent 3x3 systems at once.

    ``fun(X, idx)`` evaluates the residuals of the systems ``idx``.
    """
    X = X.copy()
    r = fun(X, np.arange(len(X)))
    cost = np.einsum("ij,ij->i", r, r)
    mu = np.full(len(X), 1e-3)
    eye = np.eye(3)
    for _ in range(max_iter):
        idx = np.flatnonzero((cost > 1e-26) & (mu < 1e12))
        if len(idx) == 0:
            break
        Xa, ra = X[idx], r[idx]
        J = np.empty((len(idx), 3, 3))
        for k in range(3):
            d = np.zeros(3)
            d[k] = h
            J[:, :, k] = (fun(Xa + d, idx) - fun(Xa - d, idx)) / (2 * h)
        JtJ = np.einsum("mki,mkj->mij", J, J)
        g = np.einsum("mki,mk->mi", J, ra)
        diag = np.maximum(np.einsum("mii->mi", JtJ), 1e-12)
        A = JtJ + mu[idx, None, None] * (eye * diag[:, :, None])
        step = -np.einsum("mij,mj->mi", np.linalg.pinv(A), g)
        Xn = Xa + step
        rn = fun(Xn, idx)
        cn = np.einsum("ij,ij->i", rn, rn)
        better = cn < cost[idx]
        upd = idx[better]
        X[upd], r[upd], cost[upd] = Xn[better], rn[better], cn[better]
        mu[idx] = np.where(better, mu[idx] / 3, mu[idx] * 4)
        tiny = np.abs(step).max(axis=1) < 1e-15
        mu[idx[tiny]] = np.inf
    return X, np.sqrt(cost)


def _clc_path(bd: BoundaryData, e1, e2, a, th, lam, sign) -> Optional[DubinsPath]:
    u, x1, t1, x2 = _clc_parts(bd, e1, e2, a, th, lam)
    th1 = _mod2pi(th)
    c1 = bd.p + u
    axis1 = np.cross(bd.p - c1, bd.v)
    segs: List[Segment] = []
    if th1 > ZERO_LEN:
        segs.append(Arc(c1, _unit(axis1), bd.p.copy(), th1))
    if lam > ZERO_LEN:
        segs.append(Line(x1, x2, direction=t1.copy()))
    cos2 = float(np.clip(t1 @ bd.w, -1, 1))
    th2 = math.acos(cos2)
    if th2 > ZERO_LEN:
        m = _unit(bd.w - cos2 * t1)
        if sign > 0:
            c2, ang = x2 + m, th2
        else:
            c2, ang = x2 - m, TWO_PI - th2
        axis2 = _unit(np.cross(x2 - c2, t1))
        segs.append(Arc(c2, axis2, x2.copy(), ang))
    elif sign < 0:
        return None
    if not segs:
        return None
    for s in segs:
        if isinstance(s, Arc) and not s.angle < TWO_PI:
            return None
    return DubinsPath(segs, family="CLC", boundary=bd)


def solve_clc_3d(bd: BoundaryData, grid: int = 16, joint_tol: float = 1e-7) -> DubinsPath:
    """Shortest circle-line-circle candidate found from a grid of starts.

    Unknowns are the angular position of the first circle's centre about v,
    the first arc angle and the line length; the final arc is fixed by the
    line direction and w.  Both the short and the long final arc are tried.
    Ties are broken by start order, so the result is deterministic.
    """
    if np.linalg.norm(bd.q - bd.p) <= ZERO_LEN and np.linalg.norm(bd.w - bd.v) <= ZERO_LEN:
        return DubinsPath([], "CLC", bd)
    e1, e2 = _perp_basis(bd.v)
    X0, signs = [], []
    for ia in range(grid):
        for it in range(grid):
            for sign in (1, -1):
                a0 = TWO_PI * ia / grid
                th0 = TWO_PI * (it + 0.5) / grid
                _, x1, t1, _ = _clc_parts(bd, e1, e2, a0, th0, 0.0)
                X0.append((a0, th0, max(0.0, float((bd.q - x1) @ t1))))
                signs.append(sign)
    X0 = np.array(X0)
    signs = np.array(signs, float)
    X, res = _lm_batch(X0, lambda X, idx: _clc_residual_batch(X, bd, e1, e2, signs[idx]))

    results = []
    seen = set()
    for k in np.flatnonzero((res <= 1e-9) & (X[:, 2] >= -1e-12)):
        a, th, lam = X[k]
        key = (round(_mod2pi(a), 6), round(_mod2pi(th), 6), round(lam, 6), signs[k])
        if key in seen:
            continue
        seen.add(key)
        path = _clc_path(bd, e1, e2, a, th, max(lam, 0.0), signs[k])
        if path is None:
            continue
        pos, ang = path.joint_gaps()
        if pos > joint_tol or ang > joint_tol or path.boundary_error(bd) > joint_tol:
            continue
        results.append(path)
    best = None
    for path in results:
        if path is not None and (best is None or path.length < best.length - 1e-12):
            best = path
    if best is None:
        raise DubinsError("no CLC candidate")
    return best


# --------------------------------------------------------------------------
# helicoidal arcs


@dataclass
class HelicoidalArc:
    zeta: float
    tau0: float
    dtau0: float
    span: float
    tau: np.ndarray  # torsion at the n + 1 arclength nodes
    dtau: np.ndarray
    curve: PolyCurve
    variant: str = "printed"

    @property
    def s(self) -> np.ndarray:
        return np.linspace(0.0, self.span, len(self.tau))

    def ode_residual(self) -> np.ndarray:
        """|tau'' - rhs| at interior nodes, tau'' from second differences."""
        h = self.span / (len(self.tau) - 1)
        tpp = (self.tau[2:] - 2 * self.tau[1:-1] + self.tau[:-2]) / h**2
        rhs = torsion_rhs(self.tau[1:-1], self.dtau[1:-1], self.zeta, self.variant)
        return np.abs(tpp - rhs)


def torsion_rhs(tau, dtau, zeta: float, variant: str = "printed"):
    """tau'' for the helicoidal-arc ODE.

    ``printed`` uses the first-derivative term 1.5 tau'/tau exactly as
    published; ``squared`` uses 1.5 tau'^2/tau instead.
    """
    tau = np.asarray(tau, float)
    if variant == "printed":
        first = 1.5 * dtau / tau
    elif variant == "squared":
        first = 1.5 * dtau**2 / tau
    else:
        raise DubinsError(f"unknown ODE variant {variant!r}")
    return first - 2 * tau**3 + 2 * tau - zeta * tau * np.abs(tau) ** 0.5


def equilibrium_torsion(zeta: float, tol: float = 1e-15) -> float:
    """Constant torsion solving 2 - 2 tau^2 - zeta sqrt(tau) = 0 on (0, 1]."""
    if zeta < 0:
        raise DubinsError("zeta must be nonnegative")
    h = lambda t: 2 - 2 * t * t - zeta * math.sqrt(t)
    lo, hi = 0.0, 1.0
    if h(hi) >= 0:
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def integrate_helicoidal(zeta: float, tau0: float, dtau0: float, span: float, n: int,
                         variant: str = "printed", p0=(0.0, 0.0, 0.0), T0=(1.0, 0.0, 0.0),
                         N0=(0.0, 1.0, 0.0), B0=(0.0, 0.0, 1.0)) -> HelicoidalArc:
    """Torsion from the ODE by RK4, then the unit-curvature curve it defines."""
    if zeta < 0:
        raise DubinsError("zeta must be nonnegative")
    if not tau0 > 0:
        raise DubinsError("initial torsion must be positive")
    if n < 1 or not span > 0:
        raise DubinsError("need n >= 1 and span > 0")
    # torsion is needed on the half-step grid of the frame integrator
    m = 2 * n
    h = span / m
    tau = np.empty(m + 1)
    dtau = np.empty(m + 1)
    y = np.array([tau0, dtau0], float)
    tau[0], dtau[0] = y

    def f(y):
        if y[0] <= 1e-9:
            raise ValueError
        return np.array([y[1], float(torsion_rhs(y[0], y[1], zeta, variant))])

    for k in range(m):
        try:
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
        except ValueError:
            raise DubinsError(f"torsion left the positive cone at s={k * h:.6g}") from None
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)) or y[0] <= 1e-9:
            raise DubinsError(f"torsion left the positive cone at s={(k + 1) * h:.6g}")
        tau[k + 1], dtau[k + 1] = y
    curve = frenet_integrate_samples(tau, span, p0, T0, N0, B0)
    return HelicoidalArc(zeta, tau0, dtau0, span, tau[::2].copy(), dtau[::2].copy(), curve, variant)


# --------------------------------------------------------------------------
# sampling


def path_to_polycurve(path: Union[DubinsPath, HelicoidalArc], n: int) -> PolyCurve:
    """Uniform arclength samples of a path as an open component."""
    if isinstance(path, HelicoidalArc):
        if len(path.curve.components[0]) == n:
            return path.curve.copy()
        return resample_arclength(path.curve, n)
    if n < 2:
        raise DubinsError("need at least 2 samples")
    L = path.length
    pts = np.array([path.point(s) for s in np.linspace(0.0, L, n)])
    return PolyCurve([Component(pts, closed=False)])
