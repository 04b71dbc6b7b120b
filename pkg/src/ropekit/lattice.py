"""Heading-lattice search for planar unit-radius paths.

Independent of the word solver: it only ever builds admissible paths
(unit arcs and straights), so its best length bounds the true optimum
from above.  Used as a test oracle and by the acceptance suite.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np


@dataclass
class LatticeResult:
    length: float
    expanded: int


def _connect_forward(x: float, y: float, th: float, qx: float, qy: float, qth: float) -> float:
    """Length of arc + S-curve + straight reaching (q, qth) exactly, or inf.

    First an arc turns the heading onto qth, then two opposite arcs of equal
    angle remove the lateral offset, then a straight covers the rest.
    """
    d = (qth - th + math.pi) % (2 * math.pi) - math.pi
    # turning by d on a unit circle moves the point
    if d != 0.0:
        sgn = 1.0 if d > 0 else -1.0
        cx, cy = x - sgn * math.sin(th), y + sgn * math.cos(th)
        x, y = cx + sgn * math.sin(qth), cy - sgn * math.cos(qth)
    ux, uy = math.cos(qth), math.sin(qth)
    ex, ey = qx - x, qy - y
    along = ex * ux + ey * uy
    lateral = -ex * uy + ey * ux
    b = abs(lateral)
    if b > 4.0:
        return math.inf
    phi = math.acos(1.0 - b / 2.0)
    straight = along - 2.0 * math.sin(phi)
    if straight < 0.0:
        return math.inf
    return abs(d) + 2.0 * phi + straight


def connect_exact(x: float, y: float, th: float, qx: float, qy: float, qth: float) -> float:
    """Shortest of the forward closing move and the same move run backwards from q."""
    fwd = _connect_forward(x, y, th, qx, qy, qth)
    bwd = _connect_forward(qx, qy, qth + math.pi, x, y, th + math.pi)
    return min(fwd, bwd)


def lattice_shortest(p, theta0: float, q, theta1: float, headings: int = 36, straight: float = 0.25,
                     cell: float = 0.1, max_expand: int = 400_000) -> LatticeResult:
    """Best admissible path found by A* over (x, y, heading) with exact closing."""
    qx, qy = float(q[0]), float(q[1])
    dth = 2 * math.pi / headings
    # primitives: (heading change, dx, dy in the local frame, cost)
    chord = 2 * math.sin(dth / 2)
    prims = [
        (0, straight, 0.0, straight),
        (1, chord * math.cos(dth / 2), chord * math.sin(dth / 2), dth),
        (-1, chord * math.cos(dth / 2), -chord * math.sin(dth / 2), dth),
    ]
    cos_t = [math.cos(k * dth) for k in range(headings)]
    sin_t = [math.sin(k * dth) for k in range(headings)]

    best = connect_exact(float(p[0]), float(p[1]), theta0, qx, qy, theta1)
    # the start heading is arbitrary; lattice headings are offsets from it
    x0, y0 = float(p[0]), float(p[1])
    heap = [(math.hypot(qx - x0, qy - y0), 0.0, x0, y0, 0)]
    closed = set()
    expanded = 0
    while heap and expanded < max_expand:
        f, g, x, y, k = heapq.heappop(heap)
        if f >= best:
            break
        key = (round(x / cell), round(y / cell), k)
        if key in closed:
            continue
        closed.add(key)
        expanded += 1
        th = theta0 + k * dth
        c = connect_exact(x, y, th, qx, qy, theta1)
        if g + c < best:
            best = g + c
        ct, st = cos_t[k], sin_t[k]
        c0, s0 = math.cos(theta0), math.sin(theta0)
        # rotate local step by the absolute heading theta0 + k dth
        ca, sa = c0 * ct - s0 * st, s0 * ct + c0 * st
        for dk, lx, ly, cost in prims:
            nx = x + ca * lx - sa * ly
            ny = y + sa * lx + ca * ly
            nk = (k + dk) % headings
            ng = g + cost
            h = math.hypot(qx - nx, qy - ny)
            if ng + h < best:
                heapq.heappush(heap, (ng + h, ng, nx, ny, nk))
    return LatticeResult(best, expanded)


def random_planar_instance(rng: np.random.Generator, rmin: float = 3.0, rmax: float = 8.0):
    """Start at the origin heading +x; goal at distance in [rmin, rmax] with random heading."""
    r = rng.uniform(rmin, rmax)
    a = rng.uniform(0, 2 * math.pi)
    th = rng.uniform(0, 2 * math.pi)
    return np.array([0.0, 0.0]), 0.0, np.array([r * math.cos(a), r * math.sin(a)]), th
