"""Order-preserving process pool map.

Results are always combined in input order, and callers chunk work
independently of the worker count, so serial and parallel runs publish the
same interval endpoints.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .interval import get_precision, set_precision

_workers = {"count": 1}


def set_workers(n: int) -> None:
    _workers["count"] = max(1, int(n))


def get_workers() -> int:
    return _workers["count"]


def _init(prec: int) -> None:
    set_precision(prec)


def ordered_map(fn, items, workers: int | None = None) -> list:
    items = list(items)
    workers = get_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init, initargs=(get_precision(),)) as ex:
        return list(ex.map(fn, items))
