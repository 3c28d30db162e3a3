"""Infinite-word sources.

Every source produces prefixes of one fixed right-infinite word and knows,
when it can, how long a prefix must be so that it contains every factor of
a given length (its *certified window*).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..errors import ConfigError, InvalidSource
from .morphism import Morphism, apply_morphism, is_primitive, parse_morphism_text

NONEMPTY_DEPTH = 64


def _two_factors(word: str) -> set[str]:
    return {word[i:i + 2] for i in range(len(word) - 1)}


class WordSource:
    alphabet: tuple[str, ...]

    def generate(self, n: int, limit: int | None = None) -> str:
        """Return a prefix of length at least ``n`` (at most ``limit`` when given)."""
        raise NotImplementedError

    def certified_window(self, n: int, safety: float | None = None) -> int | None:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PurelyMorphic(WordSource):
    """The fixed point ``phi^inf(seed)``."""

    morphism: Morphism
    seed: str
    depth: int = NONEMPTY_DEPTH

    def __post_init__(self):
        phi, a = self.morphism, self.seed
        if a not in phi.images:
            raise InvalidSource(f"seed {a!r} not in alphabet")
        img = phi.images[a]
        if not img.startswith(a):
            raise InvalidSource(f"phi({a}) = {img!r} does not start with {a!r}")
        tail = img[1:]
        if not tail:
            raise InvalidSource(f"phi({a}) = {a!r}: the fixed point is finite")
        letters = set(tail)
        for k in range(self.depth):
            if not letters:
                raise InvalidSource(f"phi^{k}(u) is empty: the fixed point is finite")
            letters = {x for c in letters for x in phi.images[c]}

    @property
    def alphabet(self):
        return self.morphism.alphabet

    @property
    def primitive(self) -> bool:
        return bool(is_primitive(self.morphism))

    def generate(self, n, limit=None):
        # invariant: word == phi(word[:done]); only the fresh tail is expanded,
        # so slowly growing morphisms such as a->ab, b->b stay linear
        word = apply_morphism(self.morphism, self.seed)
        done = len(self.seed)
        while len(word) < n:
            fresh = apply_morphism(self.morphism, word[done:])
            if not fresh:
                break
            done = len(word)
            word += fresh
        if limit is not None and len(word) > limit:
            word = word[:limit]
        return word

    def prefix_length(self, m: int) -> int:
        return self.morphism.image_lengths(m)[self.seed]

    def certified_window(self, n, safety=None):
        """Prefix length guaranteed to contain every factor of length ``n``.

        ``safety=None`` gives :meth:`rigorous_window`.  A number C instead
        gives |phi^m(seed)| for the least m with |phi^m(seed)| >= C*n, a
        heuristic that is too small for some morphisms (Tribonacci needs
        C > 6).  Non-primitive morphisms get ``None``.
        """
        if not self.primitive:
            return None
        if n <= 0:
            return 0
        if safety is None:
            return self.rigorous_window(n)
        target = safety * n
        lengths = {c: 1 for c in self.alphabet}
        while lengths[self.seed] < target:
            lengths = {c: sum(lengths[x] for x in self.morphism.images[c]) for c in self.alphabet}
        return lengths[self.seed]

    def two_factor_closure(self) -> frozenset[str]:
        """All length-2 factors of the fixed point, by closure under phi."""
        cached = self.__dict__.get("_pairs")
        if cached is not None:
            return cached
        phi = self.morphism
        found = _two_factors(apply_morphism(phi, self.seed))
        letters = set(apply_morphism(phi, self.seed))
        while True:
            new = set(found)
            for c in letters:
                new |= _two_factors(phi.images[c])
            for xy in found:
                new |= _two_factors(apply_morphism(phi, xy))
            letters |= {x for xy in new for x in xy}
            if new == found:
                break
            found = new
        found = frozenset(found)
        object.__setattr__(self, "_pairs", found)
        return found

    def rigorous_window(self, n: int) -> int:
        """A provably sufficient window for primitive morphisms.

        Once every |phi^j(c)| >= n - 1, each factor of length n lies inside
        phi^j(xy) for a length-2 factor xy.  If xy first occurs at position p,
        phi^j(xy) ends by |phi^j(w[:p+2])|; the window is the largest of these.
        """
        if not self.primitive:
            raise InvalidSource("rigorous window needs a primitive morphism")
        if n <= 0:
            return 0
        head = self.__dict__.get("_pair_head")
        if head is None:
            pairs = self.two_factor_closure()
            word = self.seed
            while not pairs <= _two_factors(word):
                word = apply_morphism(self.morphism, word)
            head = word[:max(word.find(xy) + 2 for xy in pairs)]
            object.__setattr__(self, "_pair_head", head)
        lengths = {c: 1 for c in self.alphabet}
        while min(lengths.values()) < n - 1:
            lengths = {c: sum(lengths[x] for x in self.morphism.images[c]) for c in self.alphabet}
        return max(n, sum(lengths[c] for c in head))

    def describe(self):
        return {
            "type": "purely_morphic",
            "rules": {c: self.morphism.images[c] for c in self.alphabet},
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Morphic(WordSource):
    """A letter-to-letter coding of a purely morphic word."""

    base: PurelyMorphic
    coding: Mapping[str, str]
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        coding = dict(self.coding)
        if set(coding) != set(self.base.alphabet):
            raise InvalidSource("coding must be defined on the whole alphabet")
        if any(len(v) != 1 for v in coding.values()):
            raise InvalidSource("coding must map letters to single letters")
        object.__setattr__(self, "coding", coding)
        object.__setattr__(self, "_table", {ord(c): v for c, v in coding.items()})

    @property
    def alphabet(self):
        return tuple(sorted(set(self.coding.values())))

    @property
    def morphism(self):
        return self.base.morphism

    @property
    def seed(self):
        return self.base.seed

    def generate(self, n, limit=None):
        return self.base.generate(n, limit).translate(self._table)

    def certified_window(self, n, safety=None):
        # length-preserving coding: factors of the image come from factors of the base
        return self.base.certified_window(n, safety)

    def describe(self):
        d = self.base.describe()
        d.update(type="morphic", coding=dict(self.coding))
        return d


@dataclass(frozen=True)
class DigitStream:
    """Continued-fraction digits d_1, d_2, ... (1-based).

    ``kind="periodic"``: ``preperiod`` then ``period`` repeated.
    ``kind="ramp"``: 1,2, 1,1,2, 1,1,1,2, ... (block j is j ones then a 2),
    which is never eventually periodic.
    ``kind="champernowne"``: the decimal digits of 0.123456789101112...,
    with each 0 read as 1 (runs of 9s and of 1s grow without bound, so the
    stream is not eventually periodic either).
    """

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (1,)
    kind: str = "periodic"

    def __post_init__(self):
        if self.kind not in ("periodic", "ramp", "champernowne"):
            raise ValueError(f"unknown digit stream kind {self.kind!r}")
        if self.kind == "periodic" and not self.period:
            raise ValueError("periodic digit stream needs a nonempty period")
        if any(d < 1 for d in (*self.preperiod, *self.period)):
            raise InvalidSource("continued-fraction digits must be positive integers")

    def __call__(self, i: int) -> int:
        if i < 1:
            raise IndexError("digits are indexed from 1")
        if self.kind == "champernowne":
            return _champernowne_digit(i) or 1
        if self.kind == "ramp":
            j = 1
            while i > j + 1:
                i -= j + 1
                j += 1
            return 2 if i == j + 1 else 1
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        return self.period[(i - len(self.preperiod) - 1) % len(self.period)]

    def describe(self):
        if self.kind != "periodic":
            return {"kind": self.kind}
        return {"kind": "periodic", "preperiod": list(self.preperiod), "period": list(self.period)}


def _champernowne_digit(i: int) -> int:
    """i-th decimal digit (1-based) of 123456789101112..."""
    width, count, first = 1, 9, 1
    while i > width * count:
        i -= width * count
        width, count, first = width + 1, count * 10, first * 10
    number = first + (i - 1) // width
    return int(str(number)[(i - 1) % width])


GOLDEN = DigitStream()


@dataclass(frozen=True)
class SturmianCF(WordSource):
    """Characteristic Sturmian word driven by continued-fraction digits.

    ``convention="standard"`` composes a -> a^d b, b -> a (so prefixes are the
    standard words s_n = s_{n-1}^{d_n} s_{n-2}); all-ones digits give the
    Fibonacci word.  ``convention="block"`` composes a -> a^(k+1) b,
    b -> a^k b.
    """

    digits: DigitStream = GOLDEN
    convention: str = "standard"
    alphabet: tuple[str, ...] = ("a", "b")

    def __post_init__(self):
        if self.convention not in ("standard", "block"):
            raise InvalidSource(f"unknown digit convention {self.convention!r}")

    def _step(self, a, b, d):
        if self.convention == "standard":
            return a * d + b, a
        return a * (d + 1) + b, a * d + b

    def _lengths(self, start: int = 0):
        """Yield (|A_n|, |B_n|) for n = start, start+1, ... of the shifted chain."""
        a, b = 1, 1
        n = start
        while True:
            yield a, b
            n += 1
            a, b = self._step(a, b, self.digits(n))

    def generate(self, n, limit=None):
        a, b, i = "a", "b", 0
        while len(a) < n:
            i += 1
            a, b = self._step(a, b, self.digits(i))
            if limit is not None and len(a) > limit:
                return a[:limit]
        return a

    def certified_window(self, n, safety=None):
        """Exact window from the S-adic structure; ``safety`` is not needed.

        W = M_j(W_j) with W_j Sturmian, so every factor of length n with
        n <= min |M_j(c)| lies in M_j(xy) for one of the three length-2
        factors xy of W_j; those occur in the prefix M_{j,j+t}(a).
        """
        if n <= 0:
            return 0
        lengths = self._lengths()
        j = 0
        a_len, b_len = next(lengths)
        while min(a_len, b_len) < n:
            a_len, b_len = next(lengths)
            j += 1
        a, b, t = "a", "b", 0
        while len(_two_factors(a)) < 3:
            t += 1
            a, b = self._step(a, b, self.digits(j + t))
        for _ in range(t):
            a_len, b_len = next(lengths)
        return a_len

    def describe(self):
        return {"type": "sturmian", "digits": self.digits.describe(), "convention": self.convention}


@dataclass(frozen=True)
class EventuallyPeriodic(WordSource):
    preperiod: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise InvalidSource("period must be nonempty")

    @property
    def alphabet(self):
        return tuple(sorted(set(self.preperiod + self.period)))

    def generate(self, n, limit=None):
        if limit is not None:
            n = min(n, limit)
        reps = max(0, -(-(n - len(self.preperiod)) // len(self.period)))
        return (self.preperiod + self.period * reps)[:max(n, 1)]

    def certified_window(self, n, safety=None):
        return len(self.preperiod) + len(self.period) + max(n - 1, 0)

    def describe(self):
        return {"type": "periodic", "preperiod": self.preperiod, "period": self.period}


# ----------------------------------------------------------------------------
# configuration files

def _parse_rules(text: str, lineno=None) -> dict[str, str]:
    rules = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise ConfigError(f"bad rule {part!r}", lineno)
        lhs, rhs = (s.strip() for s in part.split("->", 1))
        rules[lhs] = rhs
    return rules


def _parse_digits(value: str, lineno=None) -> DigitStream:
    value = value.strip()
    if value in ("ramp", "champernowne"):
        return DigitStream(kind=value)
    if value == "golden":
        return GOLDEN
    pre, _, per = value.partition(";")
    if not _:
        pre, per = "", pre
    try:
        pre_t = tuple(int(x) for x in pre.replace(" ", "").split(",") if x)
        per_t = tuple(int(x) for x in per.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise ConfigError(f"bad digit list {value!r}", lineno) from exc
    try:
        return DigitStream(pre_t, per_t)
    except (ValueError, InvalidSource) as exc:
        raise ConfigError(str(exc), lineno) from exc


def source_from_config(text: str, base_dir: Path | None = None) -> tuple[WordSource, dict]:
    """Build a source from ``key=value`` text.

    Recognised keys: ``type`` (purely_morphic | morphic | sturmian |
    periodic), ``rules`` or ``morphism`` (path to a morphism file), ``seed``,
    ``coding``, ``digits``, ``convention``, ``preperiod``, ``period``.  Any
    other keys are returned untouched as options (e.g. ``horizon``).
    """
    values: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = (value, lineno)
    kind = values.get("type", ("", None))[0]
    known = {"type", "rules", "morphism", "seed", "coding", "digits", "convention", "preperiod", "period"}
    options = {k: v for k, (v, _) in values.items() if k not in known}
    try:
        if kind in ("purely_morphic", "morphic"):
            if "morphism" in values:
                path = Path(values["morphism"][0])
                if base_dir is not None and not path.is_absolute():
                    path = base_dir / path
                phi, seed, coding = parse_morphism_text(path.read_text())
            elif "rules" in values:
                value, lineno = values["rules"]
                phi, seed, coding = Morphism.from_rules(_parse_rules(value, lineno)), None, None
            else:
                raise ConfigError("morphic source needs 'rules' or 'morphism'")
            if "seed" in values:
                seed = values["seed"][0]
            if "coding" in values:
                coding = {k: v for k, v in _parse_rules(*values["coding"]).items()}
            if seed is None:
                seed = phi.alphabet[0]
            base = PurelyMorphic(phi, seed)
            if kind == "morphic" or coding:
                if not coding:
                    raise ConfigError("morphic source needs a coding")
                return Morphic(base, coding), options
            return base, options
        if kind == "sturmian":
            value, lineno = values.get("digits", ("golden", None))
            digits = _parse_digits(value, lineno)
            convention = values.get("convention", ("standard", None))[0]
            return SturmianCF(digits, convention), options
        if kind == "periodic":
            if "period" not in values:
                raise ConfigError("periodic source needs 'period'")
            return EventuallyPeriodic(values.get("preperiod", ("", None))[0], values["period"][0]), options
    except InvalidSource as exc:
        raise ConfigError(str(exc)) from exc
    line = values["type"][1] if "type" in values else None
    raise ConfigError(f"unknown or missing source type {kind!r}", line)


def load_source(path: str | Path) -> tuple[WordSource, dict]:
    """Load a source from a morphism file or a ``key=value`` config file."""
    path = Path(path)
    text = path.read_text()
    body = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    body = [l for l in body if l]
    if body and all("->" in l or l.startswith(("seed:", "coding:")) for l in body):
        phi, seed, coding = parse_morphism_text(text)
        try:
            base = PurelyMorphic(phi, seed if seed is not None else phi.alphabet[0])
            return (Morphic(base, coding) if coding else base), {}
        except InvalidSource as exc:
            raise ConfigError(str(exc)) from exc
    return source_from_config(text, path.parent)


def source_from_description(d: Mapping) -> WordSource:
    """Inverse of ``describe()``."""
    kind = d["type"]
    if kind in ("purely_morphic", "morphic"):
        phi = Morphism.from_rules(d["rules"], alphabet=list(d["rules"]))
        base = PurelyMorphic(phi, d["seed"])
        return Morphic(base, d["coding"]) if kind == "morphic" else base
    if kind == "sturmian":
        dg = d["digits"]
        if dg["kind"] == "periodic":
            digits = DigitStream(tuple(dg["preperiod"]), tuple(dg["period"]))
        else:
            digits = DigitStream(kind=dg["kind"])
        return SturmianCF(digits, d.get("convention", "standard"))
    if kind == "periodic":
        return EventuallyPeriodic(d["preperiod"], d["period"])
    raise ValueError(f"unknown source type {kind!r}")
