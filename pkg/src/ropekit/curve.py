"""Polygonal curves and their discrete differential geometry.

A :class:`PolyCurve` is a list of components, each an ordered array of
vertices plus a ``closed`` flag.  Everything downstream (thickness, Dubins
sampling, tightening) consumes and produces this one carrier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np
from scipy.spatial import cKDTree

MIN_CLOSED_POINTS = 8
GAP_EPS = 1e-12
KAPPA_EPS = 1e-8


class CurveError(ValueError):
    """Raised for invalid curve input or violated preconditions."""


@dataclass
class Component:
    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        self.points = np.array(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] < 2:
            raise CurveError("component points must be an (N, d) array with d >= 2")

    def __len__(self):
        return len(self.points)

    def edges(self) -> np.ndarray:
        """Edge vectors; for a closed component the last edge wraps to point 0."""
        if self.closed:
            return np.roll(self.points, -1, axis=0) - self.points
        return np.diff(self.points, axis=0)

    def edge_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.edges(), axis=1)

    def length(self) -> float:
        return float(self.edge_lengths().sum())

    def arclength(self) -> np.ndarray:
        """Arclength parameter at each vertex, starting from 0 at vertex 0."""
        el = self.edge_lengths()
        s = np.zeros(len(self.points))
        s[1:] = np.cumsum(el)[: len(self.points) - 1]
        return s


@dataclass
class PolyCurve:
    components: List[Component] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    @classmethod
    def single(cls, points, closed: bool = True) -> "PolyCurve":
        return cls([Component(points, closed)])

    @property
    def dim(self) -> int:
        return self.components[0].points.shape[1]

    @property
    def n_points(self) -> int:
        return sum(len(c) for c in self.components)

    def length(self) -> float:
        return float(sum(c.length() for c in self.components))

    def all_points(self) -> np.ndarray:
        return np.vstack([c.points for c in self.components])

    def scaled(self, factor: float) -> "PolyCurve":
        return PolyCurve([Component(c.points * factor, c.closed) for c in self.components])

    def copy(self) -> "PolyCurve":
        return PolyCurve([Component(c.points.copy(), c.closed) for c in self.components])

    def validate(self) -> None:
        if not self.components:
            raise CurveError("curve has no components")
        dims = {c.points.shape[1] for c in self.components}
        if len(dims) != 1:
            raise CurveError("components have mixed dimensions")
        for k, comp in enumerate(self.components):
            if not np.all(np.isfinite(comp.points)):
                raise CurveError(f"component {k} has non-finite coordinates")
            if comp.closed and len(comp) < MIN_CLOSED_POINTS:
                raise CurveError(
                    f"closed component {k} has {len(comp)} points (< {MIN_CLOSED_POINTS})"
                )
            if len(comp) < 2:
                raise CurveError(f"component {k} has fewer than 2 points")
            if np.any(comp.edge_lengths() <= GAP_EPS):
                raise CurveError(f"component {k} has coincident consecutive points")
        pts = self.all_points()
        if cKDTree(pts).query_pairs(GAP_EPS):
            raise CurveError("curve has coincident vertices (self-intersection at vertex resolution)")


# --------------------------------------------------------------------------
# resampling


def resample_arclength(curve: PolyCurve, n: int) -> PolyCurve:
    """Resample every component to ``n`` points at equal polygonal arclength.

    Points are linearly interpolated on the input edges, starting at vertex 0.
    Open components keep both endpoints.
    """
    if n < MIN_CLOSED_POINTS:
        raise CurveError(f"n={n} is below the minimum of {MIN_CLOSED_POINTS} points")
    out = []
    for comp in curve.components:
        L = comp.length()
        if L <= GAP_EPS:
            raise CurveError("cannot resample a component of zero length")
        pts = comp.points
        if comp.closed:
            pts = np.vstack([pts, pts[:1]])
            targets = np.arange(n) * (L / n)
        else:
            targets = np.linspace(0.0, L, n)
        cum = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
        new = np.column_stack([np.interp(targets, cum, pts[:, d]) for d in range(pts.shape[1])])
        out.append(Component(new, comp.closed))
    return PolyCurve(out)


# --------------------------------------------------------------------------
# curvature


@dataclass
class CurvatureProfile:
    kappa: List[np.ndarray]
    s: List[np.ndarray]

    @property
    def max_kappa(self) -> float:
        return float(max(k.max() for k in self.kappa))

    def per_component_max(self) -> List[float]:
        return [float(k.max()) for k in self.kappa]

    def flat(self) -> np.ndarray:
        return np.concatenate(self.kappa)


def turning_angles(comp: Component) -> np.ndarray:
    """Angle between incoming and outgoing edge at each vertex (0 at open ends)."""
    e = comp.edges()
    if comp.closed:
        e_in, e_out = np.roll(e, 1, axis=0), e
    else:
        e_in, e_out = e[:-1], e[1:]
    # atan2 of |cross| and dot is accurate for small angles, unlike arccos
    dots = np.einsum("ij,ij->i", e_in, e_out)
    if e.shape[1] == 2:
        cross = np.abs(e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0])
    elif e.shape[1] == 3:
        cross = np.linalg.norm(np.cross(e_in, e_out), axis=1)
    else:
        # |a|^2 |b|^2 - (a.b)^2 summed as squared 2x2 minors, no cancellation
        m = e_in[:, :, None] * e_out[:, None, :] - e_in[:, None, :] * e_out[:, :, None]
        cross = np.sqrt(0.5 * np.einsum("ijk,ijk->i", m, m))
    theta = np.arctan2(cross, dots)
    if comp.closed:
        return theta
    return np.concatenate([[0.0], theta, [0.0]])


def component_curvature(comp: Component) -> np.ndarray:
    el = comp.edge_lengths()
    if np.any(el <= GAP_EPS):
        raise CurveError("zero-length edge")
    theta = turning_angles(comp)
    if comp.closed:
        avg = 0.5 * (np.roll(el, 1) + el)
        return theta / avg
    kappa = np.zeros(len(comp))
    kappa[1:-1] = theta[1:-1] / (0.5 * (el[:-1] + el[1:]))
    return kappa


def discrete_curvature(curve: PolyCurve) -> CurvatureProfile:
    """Turning angle over the mean of the two adjacent edge lengths."""
    return CurvatureProfile(
        kappa=[component_curvature(c) for c in curve.components],
        s=[c.arclength() for c in curve.components],
    )


# --------------------------------------------------------------------------
# frames


def _normalize(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / n


def vertex_tangents(comp: Component) -> np.ndarray:
    """Unit tangents from centered differences (one-sided at open ends)."""
    p = comp.points
    if comp.closed:
        d = np.roll(p, -1, axis=0) - np.roll(p, 1, axis=0)
    else:
        d = np.empty_like(p)
        d[1:-1] = p[2:] - p[:-2]
        d[0] = p[1] - p[0]
        d[-1] = p[-1] - p[-2]
    return _normalize(d)


@dataclass
class FrameField:
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    s: np.ndarray
    tau: np.ndarray
    chirality: np.ndarray
    defined: np.ndarray

    def orthonormality_residual(self) -> float:
        m = self.defined
        if not np.any(m):
            return 0.0
        T, N, B = self.T[m], self.N[m], self.B[m]
        res = [
            np.abs(np.linalg.norm(T, axis=1) - 1),
            np.abs(np.linalg.norm(N, axis=1) - 1),
            np.abs(np.linalg.norm(B, axis=1) - 1),
            np.abs(np.einsum("ij,ij->i", T, N)),
            np.abs(np.einsum("ij,ij->i", T, B)),
            np.abs(np.einsum("ij,ij->i", N, B)),
            np.linalg.norm(B - np.cross(T, N), axis=1),
        ]
        return float(max(r.max() for r in res))


def component_frames(comp: Component) -> FrameField:
    if comp.points.shape[1] != 3:
        raise CurveError("Frenet frames are only defined for curves in R^3")
    n = len(comp)
    T = vertex_tangents(comp)
    kappa = component_curvature(comp)
    s = comp.arclength()

    if comp.closed:
        dT = np.roll(T, -1, axis=0) - np.roll(T, 1, axis=0)
    else:
        dT = np.empty_like(T)
        dT[1:-1] = T[2:] - T[:-2]
        dT[0] = T[1] - T[0]
        dT[-1] = T[-1] - T[-2]
    rej = dT - np.einsum("ij,ij->i", dT, T)[:, None] * T
    rej_norm = np.linalg.norm(rej, axis=1)
    defined = (kappa > KAPPA_EPS) & (rej_norm > 1e-14)
    if not comp.closed:
        defined[[0, -1]] = False

    N = np.full_like(T, np.nan)
    N[defined] = rej[defined] / rej_norm[defined, None]
    B = np.full_like(T, np.nan)
    B[defined] = np.cross(T[defined], N[defined])

    # torsion from B' = -tau N by centered differences along arclength
    tau = np.full(n, np.nan)
    chir = np.zeros(n)
    L = comp.length()
    for i in np.flatnonzero(defined):
        if comp.closed:
            a, b = (i - 1) % n, (i + 1) % n
        else:
            if i == 0 or i == n - 1:
                continue
            a, b = i - 1, i + 1
        if not (defined[a] and defined[b]):
            continue
        ds = s[b] - s[a]
        if comp.closed and ds <= 0:
            ds += L
        signed = -float(np.dot(B[b] - B[a], N[i])) / ds
        tau[i] = abs(signed)
        chir[i] = np.sign(signed)
    return FrameField(T=T, N=N, B=B, s=s, tau=tau, chirality=chir, defined=defined)


def frenet_frames(curve: PolyCurve) -> List[FrameField]:
    """Per-component discrete Frenet frames.

    N and B are NaN (and ``defined`` False) where the discrete curvature is
    below 1e-8.  Torsion is reported as |tau|; its sign goes in ``chirality``.
    """
    return [component_frames(c) for c in curve.components]


# --------------------------------------------------------------------------
# Frenet synthesis


def _frenet_rk4(tau_half: np.ndarray, h: float, p0, T0, N0, B0, kappa: float = 1.0):
    """RK4 for (x, T, N, B) with tau given on the half-step grid (2n+1 values)."""
    n = (len(tau_half) - 1) // 2
    y = np.concatenate([p0, T0, N0, B0]).astype(float)
    out = np.empty((n + 1, 3))
    out[0] = y[:3]

    def rhs(y, tau):
        T, N, B = y[3:6], y[6:9], y[9:12]
        return np.concatenate([T, kappa * N, -kappa * T + tau * B, -tau * N])

    for k in range(n):
        t0, tm, t1 = tau_half[2 * k], tau_half[2 * k + 1], tau_half[2 * k + 2]
        k1 = rhs(y, t0)
        k2 = rhs(y + 0.5 * h * k1, tm)
        k3 = rhs(y + 0.5 * h * k2, tm)
        k4 = rhs(y + h * k3, t1)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = y[:3]
    return out, y


def _check_pose(p0, T0, N0, B0):
    p0 = np.asarray(p0, float)
    T0, N0, B0 = (np.asarray(v, float) for v in (T0, N0, B0))
    frame = np.array([T0, N0, B0])
    if np.abs(frame @ frame.T - np.eye(3)).max() > 1e-9:
        raise CurveError("initial frame is not orthonormal")
    if np.linalg.norm(np.cross(T0, N0) - B0) > 1e-9:
        raise CurveError("initial frame is not right-handed (B != T x N)")
    return p0, T0, N0, B0


def frenet_integrate_samples(tau_half, length, p0=(0, 0, 0), T0=(1, 0, 0), N0=(0, 1, 0), B0=(0, 0, 1)):
    """Integrate with torsion already sampled on the half-step grid."""
    tau_half = np.asarray(tau_half, float)
    if len(tau_half) < 3 or len(tau_half) % 2 == 0:
        raise CurveError("torsion samples must cover 2n+1 half-step nodes")
    if not np.all(np.isfinite(tau_half)):
        bad = int(np.flatnonzero(~np.isfinite(tau_half))[0])
        raise CurveError(f"non-finite torsion at s={bad * length / (len(tau_half) - 1):.6g}")
    n = (len(tau_half) - 1) // 2
    pose = _check_pose(p0, T0, N0, B0)
    pts, _ = _frenet_rk4(tau_half, length / n, *pose)
    return PolyCurve([Component(pts, closed=False)])


def frenet_integrate(
    tau_of_s: Callable[[float], float],
    length: float,
    n: int,
    p0: Sequence[float] = (0.0, 0.0, 0.0),
    T0: Sequence[float] = (1.0, 0.0, 0.0),
    N0: Sequence[float] = (0.0, 1.0, 0.0),
    B0: Sequence[float] = (0.0, 0.0, 1.0),
) -> PolyCurve:
    """Unit-curvature curve with prescribed torsion, fixed-step RK4 with n steps.

    Returns an open component of n + 1 points spanning arclength ``length``.
    """
    if n < 1:
        raise CurveError("n must be a positive integer")
    if not length > 0:
        raise CurveError("length must be positive")
    s_half = np.linspace(0.0, length, 2 * n + 1)
    tau_half = np.array([float(tau_of_s(s)) for s in s_half])
    return frenet_integrate_samples(tau_half, length, p0, T0, N0, B0)


# --------------------------------------------------------------------------
# test-curve generators


def make_circle(n: int, radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> PolyCurve:
    t = 2 * np.pi * np.arange(n) / n
    pts = np.column_stack([radius * np.cos(t), radius * np.sin(t), np.zeros(n)]) + np.asarray(center, float)
    return PolyCurve.single(pts, closed=True)


def make_ellipse(n: int, a: float = 2.0, b: float = 1.0) -> PolyCurve:
    t = 2 * np.pi * np.arange(n) / n
    return PolyCurve.single(np.column_stack([a * np.cos(t), b * np.sin(t), np.zeros(n)]))


def stadium_point(s: float, half: float = 1.0, radius: float = 1.0) -> np.ndarray:
    """Point at arclength s on the stadium, s = 0 at the bottom middle (0, -r)."""
    L = 4 * half + 2 * np.pi * radius
    s = s % L
    segs = [half, np.pi * radius, 2 * half, np.pi * radius, half]
    if s < segs[0]:
        return np.array([s, -radius, 0.0])
    s -= segs[0]
    if s < segs[1]:
        a = -np.pi / 2 + s / radius
        return np.array([half + radius * np.cos(a), radius * np.sin(a), 0.0])
    s -= segs[1]
    if s < segs[2]:
        return np.array([half - s, radius, 0.0])
    s -= segs[2]
    if s < segs[3]:
        a = np.pi / 2 + s / radius
        return np.array([-half + radius * np.cos(a), radius * np.sin(a), 0.0])
    s -= segs[3]
    return np.array([-half + s, -radius, 0.0])


def make_stadium(n: int, straight: float = 2.0, radius: float = 1.0) -> PolyCurve:
    """Two semicircles joined by two straights, equal arclength samples.

    Sampling starts at the middle of the bottom straight, so for even n the
    vertex set is symmetric under both coordinate reflections.
    """
    L = 2 * straight + 2 * np.pi * radius
    pts = np.array([stadium_point(k * L / n, straight / 2, radius) for k in range(n)])
    return PolyCurve.single(pts)


def make_torus_knot(p: int, q: int, R: float = 2.0, r: float = 1.0, n: int = 256) -> PolyCurve:
    if math.gcd(p, q) != 1:
        raise CurveError(f"gcd({p}, {q}) != 1: parametrization would trace a link")
    if not R > r > 0:
        raise CurveError("need R > r > 0")
    if n < 64:
        raise CurveError("torus knots need n >= 64")
    t = 2 * np.pi * np.arange(n) / n
    rad = R + r * np.cos(q * t)
    pts = np.column_stack([rad * np.cos(p * t), rad * np.sin(p * t), r * np.sin(q * t)])
    return PolyCurve.single(pts)


def make_helix(n: int, a: float = 0.5, b: float = 0.5, turns: float = 2.0) -> PolyCurve:
    """Open helix (a cos t, a sin t, b t) for t in [0, 2 pi turns]."""
    t = np.linspace(0.0, 2 * np.pi * turns, n)
    return PolyCurve.single(np.column_stack([a * np.cos(t), a * np.sin(t), b * t]), closed=False)


def make_coaxial_circles(n: int, radius: float = 1.0, separation: float = 1.0) -> PolyCurve:
    c1 = make_circle(n, radius).components[0]
    c2 = make_circle(n, radius, center=(0.0, 0.0, separation)).components[0]
    return PolyCurve([c1, c2])


def make_random_fourier(n: int, rng: np.random.Generator, modes: int = 3) -> PolyCurve:
    """Closed smooth random curve: a sum of low Fourier modes with 1/k decay."""
    t = 2 * np.pi * np.arange(n) / n
    pts = np.zeros((n, 3))
    for k in range(1, modes + 1):
        a = rng.normal(size=3) / k
        b = rng.normal(size=3) / k
        pts += np.outer(np.cos(k * t), a) + np.outer(np.sin(k * t), b)
    return PolyCurve.single(pts)
