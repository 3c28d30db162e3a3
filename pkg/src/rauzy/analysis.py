"""Factor complexity, recurrence, special factors and two bounded probes."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from itertools import product

from .errors import HorizonExceeded
from .words import FactorOracle, PurelyMorphic, is_primitive
from .words.sources import Morphic

SCHEMA = "rauzy.analysis/1"


@dataclass(frozen=True)
class ComplexityProfile:
    values: tuple[int, ...]  # values[n-1] = P(n)

    @property
    def differences(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.values, self.values[1:]))

    def __getitem__(self, n: int) -> int:
        return self.values[n - 1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "P", "diff"])
        diffs = self.differences
        for n, p in enumerate(self.values, start=1):
            w.writerow([n, p, diffs[n - 1] if n - 1 < len(diffs) else ""])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "kind": "complexity", "values": list(self.values),
                "differences": list(self.differences)}


def complexity_profile(oracle: FactorOracle, N: int) -> ComplexityProfile:
    return ComplexityProfile(tuple(len(oracle.factors(n)) for n in range(1, N + 1)))


def first_difference_bound(profile: ComplexityProfile) -> int:
    if len(profile.values) < 2:
        raise ValueError("need P at two or more lengths")
    return max(profile.differences)


@dataclass(frozen=True)
class RecurrenceProfile:
    """P2(N) measured on a fixed buffer window; ``None`` marks undefined entries."""

    values: tuple[int | None, ...]
    window: int

    def __getitem__(self, n: int):
        return self.values[n - 1]

    def defined(self):
        return [(n, v) for n, v in enumerate(self.values, start=1) if v is not None]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "P2"])
        for n, v in enumerate(self.values, start=1):
            w.writerow([n, "" if v is None else v])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "kind": "recurrence", "window": self.window, "values": list(self.values)}


def _recurrence_length(buf: str, n: int) -> int:
    """Least L such that every length-L window of ``buf`` contains every length-n factor of ``buf``."""
    total = len(buf)
    first: dict[str, int] = {}
    last: dict[str, int] = {}
    gap: dict[str, int] = {}
    for i in range(total - n + 1):
        f = buf[i:i + n]
        j = last.get(f)
        if j is None:
            first[f] = i
        elif i - j > gap.get(f, 0):
            gap[f] = i - j
        last[f] = i
    need = 0
    for f, i0 in first.items():
        # window ending just before the first occurrence completes
        need = max(need, i0 + n)
        need = max(need, gap.get(f, 0) + n - 1)
        # windows starting after the last occurrence must not fit in the buffer
        need = max(need, total - last[f])
    return need


def recurrence_exponent(oracle: FactorOracle, N: int, window: int | None = None) -> RecurrenceProfile:
    """P2(n) for n = 1..N against ``oracle.prefix(window)``.

    An entry is undefined when the measured value exceeds a quarter of the
    window: the buffer is then too short to show stabilisation.
    """
    if window is None:
        window = min(oracle.horizon, max(1 << 15, 64 * N))
    buf = oracle.prefix(window)
    values = []
    for n in range(1, N + 1):
        v = _recurrence_length(buf, n)
        values.append(v if 4 * v <= window else None)
    return RecurrenceProfile(tuple(values), window)


@dataclass(frozen=True)
class SpecialFactorReport:
    order: int
    left: tuple[str, ...]
    right: tuple[str, ...]

    @property
    def bispecial(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.left) & set(self.right)))

    def to_dict(self):
        return {"schema": SCHEMA, "kind": "special_factors", "order": self.order, "left": list(self.left),
                "right": list(self.right), "bispecial": list(self.bispecial)}


def extensions(oracle: FactorOracle, k: int) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    """Left and right one-letter extensions of every length-k factor."""
    left: dict[str, set[str]] = {u: set() for u in oracle.factors(k)}
    right: dict[str, set[str]] = {u: set() for u in left}
    for w in oracle.factors(k + 1):
        right[w[:-1]].add(w[-1])
        left[w[1:]].add(w[0])
    return left, right


def special_factors(oracle: FactorOracle, k: int) -> SpecialFactorReport:
    left, right = extensions(oracle, k)
    return SpecialFactorReport(
        k,
        tuple(sorted(u for u, ext in left.items() if len(ext) > 1)),
        tuple(sorted(u for u, ext in right.items() if len(ext) > 1)),
    )


@dataclass(frozen=True)
class BalanceVerdict:
    balanced: bool
    checked_up_to: int
    witness: tuple[str, str] | None = None
    letter: str | None = None

    def __bool__(self):
        return self.balanced


def balance_check(oracle: FactorOracle, N: int) -> BalanceVerdict:
    """Check ||u|_x - |v|_x| <= 1 over equal-length factor pairs, lengths 1..N.

    The witness is (u, v) with u holding the most and v the fewest x.
    """
    alphabet = sorted(set(oracle.prefix(1)) | {c for f in oracle.factors(1) for c in f})
    for n in range(1, N + 1):
        fs = sorted(oracle.factors(n))
        for x in alphabet:
            counts = [f.count(x) for f in fs]
            hi, lo = max(counts), min(counts)
            if hi - lo > 1:
                return BalanceVerdict(False, n, (fs[counts.index(hi)], fs[counts.index(lo)]), x)
    return BalanceVerdict(True, N)


# ----------------------------------------------------------------------------
# probes

@dataclass(frozen=True)
class Periodic:
    preperiod: int
    period: int
    certified: bool = True


@dataclass(frozen=True)
class NotPeriodicUpTo:
    horizon: int


@dataclass(frozen=True)
class Undecided:
    reason: str


def eventual_period(word: str, max_period: int, max_preperiod: int | None = None):
    """Smallest (preperiod, period) with period <= max_period valid on all of ``word``.

    Minimises the period first, then the preperiod.  ``None`` if nothing fits
    with preperiod <= max_preperiod (default: half the word).
    """
    if max_preperiod is None:
        max_preperiod = len(word) // 2
    for p in range(1, max_period + 1):
        q = 0
        for i in range(len(word) - p - 1, -1, -1):
            if word[i] != word[i + p]:
                q = i + 1
                break
        if q <= max_preperiod and len(word) - q >= 2 * p:
            return q, p
    return None


def periodicity_probe(oracle: FactorOracle, horizon: int, window: int | None = None):
    """Bounded periodicity test.

    For n = 1..horizon compares P(n) with n.  When the factor sets cannot be
    certified the buffer's factor counts are used; they are lower bounds, so a
    ``NotPeriodicUpTo`` verdict stays sound, while a ``Periodic`` verdict is
    then flagged ``certified=False``.
    """
    if window is None:
        window = min(oracle.horizon, max(1 << 14, 16 * horizon))
    try:
        buf = oracle.prefix(window)
    except HorizonExceeded as exc:
        return Undecided(str(exc))
    certified = True
    for n in range(1, horizon + 1):
        try:
            count = len(oracle.factors(n)) if certified else None
        except HorizonExceeded:
            certified = False
            count = None
        if count is None:
            count = len({buf[i:i + n] for i in range(len(buf) - n + 1)})
        if count <= n:
            found = eventual_period(buf, max_period=count)
            if found is None:
                return Undecided(f"P({n}) = {count} <= {n} but no period fits the buffer")
            return Periodic(found[0], found[1], certified)
    return NotPeriodicUpTo(horizon)


@dataclass(frozen=True)
class UR:
    reason: str


@dataclass(frozen=True)
class NotUR:
    witness: str
    power: int


def _primitive_words(alphabet, max_len):
    for n in range(1, max_len + 1):
        for t in product(alphabet, repeat=n):
            w = "".join(t)
            # skip proper powers: w is primitive iff it is not a rotation of itself
            if (w + w).find(w, 1) == n:
                yield w


def uniform_recurrence_probe(source, power_bound: int = 8, length_bound: int = 4,
                             oracle: FactorOracle | None = None):
    """UR / NotUR(witness) / Undecided for a purely morphic word.

    Primitivity proves uniform recurrence.  Otherwise a word w with
    w^power_bound found in the buffer is reported as a witness of the
    unbounded-power condition.
    """
    base = source.base if isinstance(source, Morphic) else source
    if not isinstance(base, PurelyMorphic):
        raise TypeError("uniform_recurrence_probe needs a purely morphic source")
    if is_primitive(base.morphism):
        return UR("primitive morphism")
    oracle = oracle or FactorOracle(base, horizon=1 << 16)
    letters = sorted(set(oracle.prefix(min(oracle.horizon, 1 << 12))))
    for w in _primitive_words(letters, length_bound):
        try:
            if oracle.contains(w * power_bound):
                return NotUR(w, power_bound)
        except HorizonExceeded:
            continue
    return Undecided(f"no w with |w| <= {length_bound} has w^{power_bound} in the buffer")


def validate_safety_factor(source: PurelyMorphic, safety: float, n_max: int) -> list[int]:
    """Lengths n <= n_max where the ``safety * n`` window misses factors."""
    heuristic = FactorOracle(source, safety=safety)
    exact = FactorOracle(source)
    return [n for n in range(1, n_max + 1) if heuristic.factors(n) != exact.factors(n)]


def to_json(obj) -> str:
    return json.dumps(obj.to_dict(), indent=2, sort_keys=True)
