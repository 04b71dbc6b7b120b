"""Thickness of polygonal knots and links.

NIR = min(F_k, DCSD / 2), with F_k the reciprocal of the largest discrete
curvature and DCSD the shortest chord normal to the curve at both ends.
Independent brute-force oracles for the same number live here too: the
rolling-ball radius R_O, the global radius of curvature and the pointwise
geometric focal distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .curve import Component, PolyCurve, component_curvature, discrete_curvature, vertex_tangents

DEFAULT_TOL = 1e-6
FEATURE_FLOOR_EDGES = 3.0
GLOBAL_RADIUS_CAP = 1024
# a refined pair must stay within this many index units of its seed cell centre
CELL_REACH = 1.5
DEDUP_INDEX = 0.25
# a pair endpoint marks the vertices within half an edge; the slack absorbs
# refined midpoints that land a hair off the half-index
CONTACT_REACH = 0.51


class ThicknessError(RuntimeError):
    pass


@dataclass
class DoubleCriticalPair:
    i: int
    j: int
    x: float  # continuous vertex index on component i
    y: float  # continuous vertex index on component j
    s: float
    t: float
    p: np.ndarray
    q: np.ndarray
    distance: float
    r1: float
    r2: float

    def as_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "s": self.s,
            "t": self.t,
            "p": [float(v) for v in self.p],
            "q": [float(v) for v in self.q],
            "distance": self.distance,
            "r1": self.r1,
            "r2": self.r2,
        }


# --------------------------------------------------------------------------
# C1 interpolation through the vertices


class _Spline:
    """Uniform Catmull-Rom interpolant of one component in the index variable.

    Its derivative at vertex i is (p[i+1] - p[i-1]) / 2, so at vertices the
    unit tangent coincides with the centered-difference tangent.
    """

    def __init__(self, comp: Component):
        p = comp.points
        self.closed = comp.closed
        self.n = len(p)
        # ghost points so that indices -1 .. n+1 are always valid (offset 1)
        if self.closed:
            self.ext = np.vstack([p[-1:], p, p[:2]])
        else:
            self.ext = np.vstack([2 * p[0] - p[1], p, 2 * p[-1] - p[-2], 3 * p[-1] - 2 * p[-2]])
        el = comp.edge_lengths()
        self.cum = np.concatenate([[0.0], np.cumsum(el)])
        self.length = float(self.cum[-1])

    def wrap(self, x):
        return np.mod(x, self.n) if self.closed else x

    def in_domain_many(self, x) -> np.ndarray:
        if self.closed:
            return np.isfinite(x)
        return (x >= 0.0) & (x <= self.n - 1)

    def _split(self, x):
        x = self.wrap(np.asarray(x, float))
        i = np.floor(x).astype(int)
        top = self.n - 1 if self.closed else self.n - 2
        i = np.clip(i, 0, top)
        return i, x - i

    def eval_many(self, x):
        """Positions and first two index-derivatives at continuous indices x."""
        i, u = self._split(x)
        e = self.ext
        p0, p1, p2, p3 = e[i], e[i + 1], e[i + 2], e[i + 3]
        m1 = 0.5 * (p2 - p0)
        m2 = 0.5 * (p3 - p1)
        u = u[:, None]
        u2, u3 = u * u, u * u * u
        pos = (2 * u3 - 3 * u2 + 1) * p1 + (u3 - 2 * u2 + u) * m1 + (-2 * u3 + 3 * u2) * p2 + (u3 - u2) * m2
        d1 = (6 * u2 - 6 * u) * p1 + (3 * u2 - 4 * u + 1) * m1 + (-6 * u2 + 6 * u) * p2 + (3 * u2 - 2 * u) * m2
        d2 = (12 * u - 6) * p1 + (6 * u - 4) * m1 + (-12 * u + 6) * p2 + (6 * u - 2) * m2
        return pos, d1, d2

    def arclength_many(self, x) -> np.ndarray:
        i, u = self._split(x)
        return self.cum[i] + u * (self.cum[i + 1] - self.cum[i])


def _index_gap(a, b, n: int, closed: bool):
    d = np.abs(np.asarray(a) - np.asarray(b))
    if closed:
        d = np.mod(d, n)
        d = np.minimum(d, n - d)
    return d


def _dot(a, b):
    return np.einsum("ij,ij->i", a, b)


def _refine_batch(sa: _Spline, sb: _Spline, x0, y0, max_iter: int = 40):
    """Vectorised Newton iteration for the double-critical condition.

    Each seed is iterated independently, so a seed's result does not depend
    on which other seeds share the batch.  Returns refined indices and a
    mask of seeds that stayed inside the parameter domain.
    """
    x = np.array(x0, float)
    y = np.array(y0, float)
    ok = np.ones(len(x), bool)
    active = ok.copy()
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        xa, ya = x[idx], y[idx]
        pa, da, dda = sa.eval_many(xa)
        pb, db, ddb = sb.eval_many(ya)
        w = pa - pb
        F = np.stack([_dot(w, da), _dot(w, db)], axis=1)
        J = np.empty((len(idx), 2, 2))
        J[:, 0, 0] = _dot(da, da) + _dot(w, dda)
        J[:, 0, 1] = -_dot(db, da)
        J[:, 1, 0] = _dot(da, db)
        J[:, 1, 1] = -_dot(db, db) + _dot(w, ddb)
        # pseudo-inverse: continua of critical pairs (circles) give singular J
        step = -np.einsum("kij,kj->ki", np.linalg.pinv(J, rcond=1e-10), F)
        x[idx] = xa + step[:, 0]
        y[idx] = ya + step[:, 1]
        inside = sa.in_domain_many(x[idx]) & sb.in_domain_many(y[idx])
        ok[idx[~inside]] = False
        done = ~inside | (np.abs(step).max(axis=1) < 1e-12)
        active[idx[done]] = False
    return x, y, ok


# --------------------------------------------------------------------------
# seeds and refinement


def _feature_floor(comp: Component) -> float:
    return FEATURE_FLOOR_EDGES * float(comp.edge_lengths().mean())


def _cell_mid_arclength(comp: Component) -> np.ndarray:
    el = comp.edge_lengths()
    s = comp.arclength()
    if comp.closed:
        return s + 0.5 * el
    return s[:-1] + 0.5 * el


SEED_BLOCK = 256


def _seed_cells(curve: PolyCurve):
    """Vectorised seed scan: cells where both end residuals change sign.

    Returns a list of (ci, cj, i_array, j_array), i.e. the lower corner of
    every cell {i, i+1} x {j, j+1} that brackets a zero of
    f = (p_i - q_j).T_i and of g = (p_i - q_j).T_j.  Rows are processed in
    blocks to bound memory.
    """
    comps = curve.components
    tangents = [vertex_tangents(c) for c in comps]
    out = []
    for ca in range(len(comps)):
        for cb in range(ca, len(comps)):
            A, B = comps[ca], comps[cb]
            P, Q = A.points, B.points
            TP, TQ = tangents[ca], tangents[cb]
            na = len(A) if A.closed else len(A) - 1
            Qc = np.vstack([Q, Q[:1]]) if B.closed else Q
            TQc = np.vstack([TQ, TQ[:1]]) if B.closed else TQ
            qdot = _dot(Qc, TQc)
            if ca == cb:
                mid = _cell_mid_arclength(A)
                floor2 = 2 * _feature_floor(A)
                L = A.length()
            i_all, j_all = [], []
            for r0 in range(0, na, SEED_BLOCK):
                r1 = min(na, r0 + SEED_BLOCK)
                rows = np.arange(r0, r1 + 1) % len(A)
                Pr, TPr = P[rows], TP[rows]
                f = _dot(Pr, TPr)[:, None] - TPr @ Qc.T
                g = Pr @ TQc.T - qdot[None, :]
                fmin, fmax = _corner_range(f)
                gmin, gmax = _corner_range(g)
                mask = (fmin <= 0) & (fmax >= 0) & (gmin <= 0) & (gmax >= 0)
                if ca == cb:
                    sep = np.abs(mid[r0:r1, None] - mid[None, :])
                    if A.closed:
                        sep = np.minimum(sep, L - sep)
                    ii = np.arange(r0, r1)[:, None]
                    jj = np.arange(mask.shape[1])[None, :]
                    mask &= (sep > floor2) & (ii < jj)
                i, j = np.nonzero(mask)
                i_all.append(i + r0)
                j_all.append(j)
            out.append((ca, cb, np.concatenate(i_all), np.concatenate(j_all)))
    return out


def _corner_range(M: np.ndarray):
    """Min and max over the four corners of every cell of a vertex grid."""
    c = (M[:-1, :-1], M[1:, :-1], M[:-1, 1:], M[1:, 1:])
    return np.minimum.reduce(c), np.maximum.reduce(c)


def _seed_cells_exhaustive(curve: PolyCurve):
    """Same seeds as :func:`_seed_cells`, by an explicit double loop."""
    comps = curve.components
    tangents = [vertex_tangents(c) for c in comps]
    out = []
    for ca, A in enumerate(comps):
        for cb in range(ca, len(comps)):
            B = comps[cb]
            na = len(A) if A.closed else len(A) - 1
            nb = len(B) if B.closed else len(B) - 1
            if ca == cb:
                mid = _cell_mid_arclength(A)
                floor = _feature_floor(A)
                L = A.length()
            si, sj = [], []
            for i in range(na):
                for j in range(nb):
                    if ca == cb:
                        if j <= i:
                            continue
                        sep = abs(mid[i] - mid[j])
                        if A.closed:
                            sep = min(sep, L - sep)
                        if not sep > 2 * floor:
                            continue
                    fs, gs = [], []
                    for a in (i, (i + 1) % len(A)):
                        for b in (j, (j + 1) % len(B)):
                            w = A.points[a] - B.points[b]
                            fs.append(float(np.dot(w, tangents[ca][a])))
                            gs.append(float(np.dot(w, tangents[cb][b])))
                    if min(fs) <= 0 <= max(fs) and min(gs) <= 0 <= max(gs):
                        si.append(i)
                        sj.append(j)
            out.append((ca, cb, np.array(si, int), np.array(sj, int)))
    return out


def _pairs_from_seeds(curve: PolyCurve, seeds, tol: float) -> List[DoubleCriticalPair]:
    splines = [_Spline(c) for c in curve.components]
    pairs: List[DoubleCriticalPair] = []
    for ci, cj, si, sj in seeds:
        if len(si) == 0:
            continue
        order = np.lexsort((sj, si))
        si, sj = si[order], sj[order]
        sa, sb = splines[ci], splines[cj]
        x0, y0 = si + 0.5, sj + 0.5
        x, y, ok = _refine_batch(sa, sb, x0, y0)
        ok &= (_index_gap(x, x0, sa.n, sa.closed) <= CELL_REACH) & (_index_gap(y, y0, sb.n, sb.closed) <= CELL_REACH)
        x, y = sa.wrap(x), sb.wrap(y)
        pa, da, _ = sa.eval_many(x)
        pb, db, _ = sb.eval_many(y)
        w = pa - pb
        dist = np.linalg.norm(w, axis=1)
        ok &= dist > 0
        safe = np.where(dist > 0, dist, 1.0)
        r1 = _dot(w, da) / (safe * np.linalg.norm(da, axis=1))
        r2 = _dot(w, db) / (safe * np.linalg.norm(db, axis=1))
        ok &= (np.abs(r1) <= tol) & (np.abs(r2) <= tol)
        s, t = sa.arclength_many(x), sb.arclength_many(y)
        if ci == cj:
            comp = curve.components[ci]
            sep = np.abs(s - t)
            if comp.closed:
                sep = np.minimum(sep, comp.length() - sep)
            ok &= sep > 2 * _feature_floor(comp)
        for k in np.flatnonzero(ok):
            px, py, ss, tt, pp, qq, ra, rb = x[k], y[k], s[k], t[k], pa[k], pb[k], r1[k], r2[k]
            if ci == cj and py < px:
                px, py, ss, tt, pp, qq, ra, rb = py, px, tt, ss, qq, pp, rb, ra
            pairs.append(DoubleCriticalPair(
                i=ci, j=cj, x=float(px), y=float(py), s=float(ss), t=float(tt),
                p=pp.copy(), q=qq.copy(), distance=float(dist[k]), r1=float(ra), r2=float(rb),
            ))
    return _dedup(pairs, splines)


def _dedup(pairs: List[DoubleCriticalPair], splines) -> List[DoubleCriticalPair]:
    """Greedy removal of pairs within DEDUP_INDEX of an earlier pair."""
    kept: List[DoubleCriticalPair] = []
    buckets = {}
    for pr in pairs:
        sa, sb = splines[pr.i], splines[pr.j]
        keys = [(pr.x, pr.y)]
        if pr.i == pr.j:
            keys.append((pr.y, pr.x))
        dup = False
        for kx, ky in keys:
            bx, by = int(math.floor(kx)), int(math.floor(ky))
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    cx, cy = bx + dx, by + dy
                    if sa.closed:
                        cx %= sa.n
                    if sb.closed:
                        cy %= sb.n
                    for other in buckets.get((pr.i, pr.j, cx, cy), ()):
                        if (_index_gap(other.x, kx, sa.n, sa.closed) < DEDUP_INDEX
                                and _index_gap(other.y, ky, sb.n, sb.closed) < DEDUP_INDEX):
                            dup = True
                            break
                    if dup:
                        break
                if dup:
                    break
            if dup:
                break
        if dup:
            continue
        kept.append(pr)
        key = (pr.i, pr.j, int(math.floor(pr.x)), int(math.floor(pr.y)))
        buckets.setdefault(key, []).append(pr)
    return kept


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ThicknessError("residual tolerance must be positive")


def find_double_critical_pairs(curve: PolyCurve, tol: float = DEFAULT_TOL) -> List[DoubleCriticalPair]:
    """All double critical pairs resolved at the curve's sampling.

    Seeds are vertex cells where both end residuals change sign; each seed
    is refined by Newton iteration on a C1 interpolant and kept only if both
    residuals end up within ``tol`` near the seed.
    """
    _check_tol(tol)
    return _pairs_from_seeds(curve, _seed_cells(curve), tol)


def find_double_critical_pairs_exhaustive(curve: PolyCurve, tol: float = DEFAULT_TOL) -> List[DoubleCriticalPair]:
    """Reference scan by explicit double loop; O(N^2) Python, small curves only."""
    _check_tol(tol)
    return _pairs_from_seeds(curve, _seed_cells_exhaustive(curve), tol)


def _minimal(pairs: List[DoubleCriticalPair]) -> Tuple[float, List[DoubleCriticalPair]]:
    if not pairs:
        raise ThicknessError("no double critical pair at this resolution")
    best = min(p.distance for p in pairs)
    cut = best * (1 + 1e-9)
    return best, [p for p in pairs if p.distance <= cut]


def dcsd(curve: PolyCurve, tol: float = DEFAULT_TOL) -> Tuple[float, List[DoubleCriticalPair]]:
    """Double critical self distance and the minimal pairs attaining it."""
    return _minimal(find_double_critical_pairs(curve, tol))


def dcsd_exhaustive(curve: PolyCurve, tol: float = DEFAULT_TOL) -> Tuple[float, List[DoubleCriticalPair]]:
    return _minimal(find_double_critical_pairs_exhaustive(curve, tol))


# --------------------------------------------------------------------------
# thickness


@dataclass
class ThicknessReport:
    F_k: float
    DCSD: float
    NIR: float
    ropelength: float
    length: float
    minimal_pairs: List[DoubleCriticalPair] = field(default_factory=list)
    R_O: Optional[float] = None
    rho_G_min: Optional[float] = None
    F_g_min: Optional[float] = None

    @property
    def active(self) -> str:
        return "dcsd" if self.DCSD / 2 <= self.F_k else "curvature"

    def as_dict(self) -> dict:
        d = {
            "F_k": self.F_k,
            "DCSD": self.DCSD,
            "NIR": self.NIR,
            "ropelength": self.ropelength,
            "length": self.length,
            "active": self.active,
        }
        for key in ("R_O", "rho_G_min", "F_g_min"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val
        d["minimal_pairs"] = [p.as_dict() for p in self.minimal_pairs]
        return d


def analytic_focal_distance(curve: PolyCurve) -> float:
    """Smallest per-component reciprocal of the maximum discrete curvature."""
    per = discrete_curvature(curve).per_component_max()
    return min(math.inf if k <= 0 else 1.0 / k for k in per)


def thickness(curve: PolyCurve, tol: float = DEFAULT_TOL, oracles: bool = False) -> ThicknessReport:
    fk = analytic_focal_distance(curve)
    d, pairs = dcsd(curve, tol)
    nir = min(fk, d / 2)
    if not (math.isfinite(nir) and nir > 0):
        raise ThicknessError(f"thickness is not positive and finite (NIR={nir})")
    length = curve.length()
    rep = ThicknessReport(F_k=fk, DCSD=d, NIR=nir, ropelength=length / nir, length=length, minimal_pairs=pairs)
    if oracles:
        rep.R_O = ball_radius(curve).value
        rep.rho_G_min = global_radius_oracle(curve)
        rep.F_g_min = geometric_focal_distance(curve).value
    return rep


# --------------------------------------------------------------------------
# rolling-ball oracle


def circle_tangents(comp: Component) -> np.ndarray:
    """Tangent at each vertex of the circle through it and its two neighbours.

    Exact on circles and second order for uneven spacing, where the plain
    centered difference is only first order.
    """
    p = comp.points
    if comp.closed:
        a = np.roll(p, 1, axis=0) - p
        b = np.roll(p, -1, axis=0) - p
    else:
        a = np.empty_like(p)
        b = np.empty_like(p)
        a[1:-1], b[1:-1] = p[:-2] - p[1:-1], p[2:] - p[1:-1]
        a[0], b[0] = p[0] - p[1], p[1] - p[0]
        a[-1], b[-1] = p[-2] - p[-1], p[-1] - p[-2]
    t = _dot(a, a)[:, None] * b - _dot(b, b)[:, None] * a
    return t / np.linalg.norm(t, axis=1, keepdims=True)


def _vertex_frames(curve: PolyCurve):
    pts = curve.all_points()
    tan = np.vstack([circle_tangents(c) for c in curve.components])
    return pts, tan


def _inside_tangent_ball(d: np.ndarray, v: np.ndarray, r: float) -> np.ndarray:
    """Whether offsets d (rows) lie in O_p(v, r): |d|^2 < 2 r |d_perp|."""
    dd = np.einsum("...j,...j->...", d, d)
    along = np.einsum("...j,...j->...", d, v)
    perp = np.sqrt(np.maximum(dd - along**2, 0.0))
    return (dd > 0) & (dd < 2 * r * perp)


def ball_radius_oracle(curve: PolyCurve, r: float) -> bool:
    """True iff no vertex lies inside the open tangent balls of radius r at any vertex."""
    if not r > 0:
        raise ThicknessError("ball radius must be positive")
    pts, tan = _vertex_frames(curve)
    for k in range(len(pts)):
        if np.any(_inside_tangent_ball(pts - pts[k], tan[k], r)):
            return False
    return True


@dataclass
class BisectionResult:
    value: float
    cap_hit: bool = False
    iterations: int = 0


def _bisect(probe, scale: float, lo: float, hi: float, rel_tol: float) -> BisectionResult:
    """Largest r in [lo, hi] with probe(r) true; bisection runs on r / scale."""
    if hi < lo:
        raise ThicknessError("bisection interval has hi < lo")
    ulo, uhi = lo / scale, hi / scale
    if probe(uhi * scale):
        return BisectionResult(hi, cap_hit=True)
    if ulo > 0 and not probe(ulo * scale):
        return BisectionResult(lo)
    it = 0
    while uhi - ulo > rel_tol * uhi:
        mid = 0.5 * (ulo + uhi)
        if probe(mid * scale):
            ulo = mid
        else:
            uhi = mid
        it += 1
    return BisectionResult(0.5 * (ulo + uhi) * scale, iterations=it)


def ball_radius(curve: PolyCurve, lo: Optional[float] = None, hi: Optional[float] = None,
                rel_tol: float = 1e-4) -> BisectionResult:
    """Bisected rolling-ball radius R_O, within ``rel_tol`` relative."""
    scale = curve.length()
    lo = 0.0 if lo is None else lo
    hi = scale if hi is None else hi
    return _bisect(lambda r: ball_radius_oracle(curve, r), scale, lo, hi, rel_tol)


# --------------------------------------------------------------------------
# global radius of curvature


def global_radius_oracle(curve: PolyCurve, cap: int = GLOBAL_RADIUS_CAP) -> float:
    """Minimum circumradius over all vertex triples, O(N^3)."""
    pts = curve.all_points()
    n = len(pts)
    if n > cap:
        raise ThicknessError(f"{n} points exceeds the triple-scan cap of {cap}")
    best = math.inf
    for i in range(n - 2):
        a = pts[i + 1:] - pts[i]
        aa = np.einsum("ij,ij->i", a, a)
        ab = a @ a.T
        cross2 = aa[:, None] * aa[None, :] - ab**2
        cc = aa[:, None] + aa[None, :] - 2 * ab
        iu = np.triu_indices(len(a), 1)
        c2 = cross2[iu]
        prod = aa[iu[0]] * aa[iu[1]]
        ok = c2 > 1e-24 * prod
        if not np.any(ok):
            continue
        # R = |a||b||c| / (2 |a x b|)
        r2 = prod[ok] * cc[iu][ok] / (4 * c2[ok])
        best = min(best, float(np.sqrt(r2.min())))
    if not math.isfinite(best):
        raise ThicknessError("all vertex triples are collinear")
    return best


# --------------------------------------------------------------------------
# geometric focal distance


def geometric_focal_oracle(curve: PolyCurve, component: int, vertex: int, window: float = 0.1,
                           max_radius: Optional[float] = None, rel_tol: float = 1e-4) -> BisectionResult:
    """Pointwise focal distance at one vertex against a local arclength window.

    ``window`` is a fraction of the component length on each side.  Flat
    neighbourhoods never enter a tangent ball; those report ``max_radius``
    (default: the component length) with ``cap_hit`` set.
    """
    comp = curve.components[component]
    s = comp.arclength()
    L = comp.length()
    gap = np.abs(s - s[vertex])
    if comp.closed:
        gap = np.minimum(gap, L - gap)
    sel = (gap <= window * L) & (np.arange(len(comp)) != vertex)
    if sel.sum() < 5:
        raise ThicknessError("focal window holds fewer than 5 vertices")
    p = comp.points[vertex]
    v = circle_tangents(comp)[vertex]
    d = comp.points[sel] - p
    cap = L if max_radius is None else max_radius

    def probe(r):
        return not np.any(_inside_tangent_ball(d, v, r))

    return _bisect(probe, L, 0.0, cap, rel_tol)


def geometric_focal_distance(curve: PolyCurve, window: float = 0.1, stride: int = 1) -> BisectionResult:
    """Minimum pointwise focal distance over (every ``stride``-th) vertex."""
    best: Optional[BisectionResult] = None
    for ci, comp in enumerate(curve.components):
        for v in range(0, len(comp), stride):
            res = geometric_focal_oracle(curve, ci, v, window)
            if best is None or res.value < best.value:
                best = res
    return best


# --------------------------------------------------------------------------
# regimes


@dataclass
class RegimePartition:
    I_c: List[np.ndarray]
    I_z: List[np.ndarray]
    I_mx: List[np.ndarray]
    I_b: List[np.ndarray]
    kappa_tol: float
    dist_tol: float

    def unclassified(self, component: int, n: int) -> np.ndarray:
        used = np.zeros(n, bool)
        for s in (self.I_z, self.I_mx, self.I_b):
            used[s[component]] = True
        return np.flatnonzero(~used)


def classify_regimes(curve: PolyCurve, report: ThicknessReport, kappa_tol: float = 1e-2,
                     dist_tol: float = 1e-3, tol: float = DEFAULT_TOL) -> RegimePartition:
    """Split vertices by curvature (zero / maximal / between) and by contact.

    A vertex is in I_c when it is the nearest vertex to an end of a double
    critical pair whose length is within ``dist_tol`` of DCSD.
    """
    kmax = 1.0 / report.NIR
    Iz, Imx, Ib, Ic = [], [], [], []
    for comp in curve.components:
        k = component_curvature(comp)
        z = k <= kappa_tol
        mx = ~z & (np.abs(k - kmax) <= kappa_tol)
        b = ~z & ~mx & (k < kmax - kappa_tol)
        Iz.append(np.flatnonzero(z))
        Imx.append(np.flatnonzero(mx))
        Ib.append(np.flatnonzero(b))
        Ic.append(set())
    for pr in find_double_critical_pairs(curve, tol):
        if pr.distance > report.DCSD + dist_tol:
            continue
        for ci, x in ((pr.i, pr.x), (pr.j, pr.y)):
            n = len(curve.components[ci])
            lo, hi = math.floor(x), math.ceil(x)
            for v in {lo, hi}:
                if abs(x - v) <= CONTACT_REACH:
                    Ic[ci].add(v % n)
    return RegimePartition(
        I_c=[np.array(sorted(s), dtype=int) for s in Ic],
        I_z=Iz, I_mx=Imx, I_b=Ib, kappa_tol=kappa_tol, dist_tol=dist_tol,
    )
