"""Capacity-bounded store of the best (value, point) pairs seen so far."""

from __future__ import annotations

import math
from bisect import insort

import numpy as np


class BestStore:
    """Keeps the ``capacity`` smallest (value, point) entries.

    Backed by a sorted list, which is optimal at the tiny capacities used
    here (a handful of probes). Ties on value break first-in-first-out via a
    monotone insertion counter, so the contents are a pure function of the
    operation sequence -- fixed seeds give bit-identical runs.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = int(capacity)
        # entries are (value, tiebreak, point); the unique tiebreak means
        # tuple comparison never falls through to the point array
        self._entries: list[tuple[float, int, np.ndarray]] = []
        self._counter = 0

    def insert(self, value: float, point) -> None:
        """Add an entry, discarding the largest-value one on overflow.

        The discarded entry may be the one being inserted.
        """
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"stored values must be finite, got {value}")
        entry = (value, self._counter, np.array(point, dtype=float))
        self._counter += 1
        insort(self._entries, entry)
        if len(self._entries) > self.capacity:
            self._entries.pop()

    def extract_min(self) -> tuple[float, np.ndarray]:
        if not self._entries:
            raise IndexError("extract_min from an empty store")
        value, _, point = self._entries.pop(0)
        return value, point

    def peek_best(self) -> tuple[float, np.ndarray]:
        """Minimum entry without removal."""
        if not self._entries:
            raise IndexError("peek_best on an empty store")
        value, _, point = self._entries[0]
        return value, point

    def size(self) -> int:
        return len(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self):
        vals = [round(v, 6) for v, _, _ in self._entries]
        return f"BestStore(capacity={self.capacity}, values={vals})"
