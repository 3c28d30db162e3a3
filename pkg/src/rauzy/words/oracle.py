"""Prefix buffer and factor queries over an infinite word."""
from __future__ import annotations

import threading

from ..errors import HorizonExceeded
from .sources import WordSource

DEFAULT_HORIZON = 1 << 26


class FactorOracle:
    """Adaptive prefix buffer of ``source``.

    The buffer only grows and is always a prefix of the infinite word.
    ``contains`` answers False only after scanning a certified window; when
    the source cannot certify (or the window exceeds ``horizon``) a miss is
    reported as :class:`HorizonExceeded`.

    ``safety=None`` uses the sources' provable windows; a number switches
    primitive morphic sources to the ``safety * n`` heuristic.

    Growth is guarded by a lock; queries between growth phases are read-only.
    """

    def __init__(self, source: WordSource, horizon: int = DEFAULT_HORIZON, safety: float | None = None):
        if horizon < 1:
            raise ValueError("horizon must be positive")
        self.source = source
        self.horizon = horizon
        self.safety = safety
        self._buffer = ""
        self._factors: dict[int, frozenset[str]] = {}
        self._lock = threading.Lock()

    @property
    def buffer(self) -> str:
        return self._buffer

    def __len__(self):
        return len(self._buffer)

    def _grow(self, n: int) -> None:
        if n <= len(self._buffer):
            return
        if n > self.horizon:
            raise HorizonExceeded(f"prefix of length {n} exceeds the horizon {self.horizon}")
        with self._lock:
            if n <= len(self._buffer):
                return
            target = min(self.horizon, max(n, 2 * len(self._buffer), 256))
            word = self.source.generate(target, limit=self.horizon)
            if len(word) < n:
                raise HorizonExceeded(f"source produced only {len(word)} letters")
            if not word.startswith(self._buffer):
                raise AssertionError("source is not prefix-stable")
            self._buffer = word

    def prefix(self, n: int) -> str:
        self._grow(n)
        return self._buffer[:n]

    def window(self, n: int) -> int | None:
        """Certified window for factors of length ``n`` or None."""
        return self.source.certified_window(n, self.safety)

    def certified_window(self, n: int) -> int:
        """Like :meth:`window` but materialises it, raising when impossible."""
        w = self.window(n)
        if w is None:
            raise HorizonExceeded(f"source cannot certify factors of length {n}")
        if w > self.horizon:
            raise HorizonExceeded(f"factors of length {n} need a window of {w} > horizon {self.horizon}")
        self._grow(w)
        return w

    def factors(self, n: int) -> frozenset[str]:
        """The exact set of length-``n`` factors."""
        cached = self._factors.get(n)
        if cached is not None:
            return cached
        if n == 0:
            result = frozenset({""})
        else:
            w = self.certified_window(n)
            buf = self._buffer
            result = frozenset(buf[i:i + n] for i in range(w - n + 1))
        self._factors[n] = result
        return result

    def buffer_factors(self, n: int, window: int | None = None) -> frozenset[str]:
        """Length-``n`` factors seen in the first ``window`` letters (uncertified)."""
        window = len(self._buffer) if window is None else window
        self._grow(window)
        buf = self._buffer
        return frozenset(buf[i:i + n] for i in range(window - n + 1))

    def contains(self, u: str) -> bool:
        if not u:
            return True
        w = self.window(len(u))
        if w is not None and w <= self.horizon:
            self._grow(w)
            return self._buffer.find(u, 0, w) >= 0
        if self._buffer.find(u) >= 0:
            return True
        self._grow(self.horizon)
        if self._buffer.find(u) >= 0:
            return True
        raise HorizonExceeded(f"membership of a word of length {len(u)} undecided within horizon {self.horizon}")

    def occurrences(self, u: str, window: int | None = None) -> list[int]:
        """Start positions (overlapping) of ``u`` inside the first ``window`` letters."""
        window = len(self._buffer) if window is None else window
        self._grow(window)
        if not u:
            return list(range(window + 1))
        buf, out, i = self._buffer, [], -1
        while True:
            i = buf.find(u, i + 1, window)
            if i < 0:
                return out
            out.append(i)

    def count(self, u: str, window: int) -> int:
        return len(self.occurrences(u, window))


def factor_query(oracle: FactorOracle, u: str, mode: str = "membership", window: int | None = None):
    """Membership (bool) or overlapping occurrence count inside ``window``."""
    if mode == "membership":
        return oracle.contains(u)
    if mode == "count":
        if window is None:
            raise ValueError("count mode needs a window")
        return oracle.count(u, window)
    raise ValueError(f"unknown mode {mode!r}")
