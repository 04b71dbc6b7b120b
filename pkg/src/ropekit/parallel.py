"""Ordered thread map capped by the ROPEKIT_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker cap from ROPEKIT_THREADS; 1 (serial) when unset or invalid."""
    try:
        return max(1, int(os.environ.get("ROPEKIT_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """map() over threads; results keep input order, so output is deterministic."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, items))
