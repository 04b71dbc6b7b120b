"""Curve and result files.

Curve JSON: {"components": [{"closed": true, "points": [[x, y, z], ...]}, ...]}
Boundary JSON: {"p": [...], "v": [...], "q": [...], "w": [...]}
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from typing import List

import numpy as np

from .curve import Component, CurveError, PolyCurve
from .dubins import BoundaryData, DubinsError
from .thickness import DoubleCriticalPair


class FormatError(ValueError):
    pass


def curve_to_dict(curve: PolyCurve) -> dict:
    return {"components": [{"closed": bool(c.closed), "points": c.points.tolist()} for c in curve.components]}


def curve_from_dict(data) -> PolyCurve:
    if not isinstance(data, dict) or not isinstance(data.get("components"), list):
        raise FormatError('expected an object with a "components" list')
    comps = []
    for k, c in enumerate(data["components"]):
        if not isinstance(c, dict) or "points" not in c:
            raise FormatError(f'component {k} lacks "points"')
        closed = c.get("closed", True)
        if not isinstance(closed, bool):
            raise FormatError(f'component {k}: "closed" must be a boolean')
        try:
            pts = np.array(c["points"], dtype=float)
        except (TypeError, ValueError) as e:
            raise FormatError(f"component {k}: points are not numeric ({e})") from None
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise FormatError(f"component {k}: points must be a list of 2- or 3-vectors")
        comps.append(Component(pts, closed))
    try:
        return PolyCurve(comps)
    except CurveError as e:
        raise FormatError(str(e)) from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None
    except OSError as e:
        raise FormatError(f"{path}: {e.strerror}") from None


def load_curve(path: str) -> PolyCurve:
    return curve_from_dict(read_json(path))


def boundary_from_dict(data) -> BoundaryData:
    if not isinstance(data, dict) or not all(k in data for k in "pvqw"):
        raise FormatError('boundary data need "p", "v", "q" and "w"')
    try:
        return BoundaryData(data["p"], data["v"], data["q"], data["w"])
    except (DubinsError, TypeError, ValueError) as e:
        raise FormatError(str(e)) from None


def pairs_csv(pairs: List[DoubleCriticalPair]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["comp_i", "comp_j", "x", "y", "s", "t", "dist", "r1", "r2"])
    for p in pairs:
        w.writerow([p.i, p.j, repr(p.x), repr(p.y), repr(p.s), repr(p.t), repr(p.distance), repr(p.r1), repr(p.r2)])
    return buf.getvalue()


def atomic_write(path: str, text: str) -> None:
    atomic_write_all({path: text})


def atomic_write_all(files: dict) -> None:
    """Write several files; all are staged before any is renamed into place."""
    staged = []
    try:
        for path, text in files.items():
            d = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise
