"""Morphisms of the free monoid over a finite alphabet.

Letters are single visible characters; a word is a ``str``.  The substitution
matrix uses the alphabet order for dense indexing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from ..errors import ConfigError, NotPrimitive, UnknownLetter


@dataclass(frozen=True)
class Morphism:
    alphabet: tuple[str, ...]
    images: Mapping[str, str]
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet letters must be distinct")
        if any(len(c) != 1 for c in alphabet):
            raise ValueError("letters must be single characters")
        images = dict(self.images)
        if set(images) != set(alphabet):
            raise ValueError("images must be given for exactly the alphabet letters")
        for c, img in images.items():
            for x in img:
                if x not in images:
                    raise UnknownLetter(f"image of {c!r} uses letter {x!r} outside the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_table", {ord(c): images[c] for c in alphabet})

    @classmethod
    def from_rules(cls, rules: Mapping[str, str], alphabet=None) -> "Morphism":
        if alphabet is None:
            alphabet = sorted(set(rules) | {x for img in rules.values() for x in img})
        return cls(tuple(alphabet), {c: rules.get(c, c) for c in alphabet})

    @property
    def erasing(self) -> bool:
        """True when some letter has an empty image."""
        return any(not img for img in self.images.values())

    def __call__(self, word: str) -> str:
        return apply_morphism(self, word)

    def power(self, k: int) -> "Morphism":
        images = {c: c for c in self.alphabet}
        for _ in range(k):
            images = {c: self(img) for c, img in images.items()}
        return Morphism(self.alphabet, images)

    def matrix(self) -> np.ndarray:
        """M[i, j] = number of occurrences of letter i in the image of letter j."""
        index = {c: i for i, c in enumerate(self.alphabet)}
        m = np.zeros((len(self.alphabet), len(self.alphabet)), dtype=np.int64)
        for j, c in enumerate(self.alphabet):
            for x in self.images[c]:
                m[index[x], j] += 1
        return m

    def image_lengths(self, k: int) -> dict[str, int]:
        """|phi^k(c)| for every letter, computed without building the words."""
        lengths = {c: 1 for c in self.alphabet}
        for _ in range(k):
            lengths = {c: sum(lengths[x] for x in self.images[c]) for c in self.alphabet}
        return lengths

    def to_text(self, seed: str | None = None, coding: Mapping[str, str] | None = None) -> str:
        lines = [f"{c} -> {self.images[c]}" for c in self.alphabet]
        if seed is not None:
            lines.append(f"seed: {seed}")
        if coding:
            lines.append("coding: " + ", ".join(f"{c}->{coding[c]}" for c in sorted(coding)))
        return "\n".join(lines) + "\n"


def apply_morphism(phi: Morphism, word: str) -> str:
    out = word.translate(phi._table)
    # translate silently keeps unknown characters; catch them explicitly
    if len(word) and any(c not in phi.images for c in set(word)):
        bad = sorted(c for c in set(word) if c not in phi.images)
        raise UnknownLetter(f"letters {bad} are not in the alphabet {phi.alphabet}")
    return out


class Primitivity(NamedTuple):
    primitive: bool
    power: int | None

    def __bool__(self):
        return self.primitive


def is_primitive(phi: Morphism) -> Primitivity:
    """Check primitivity of the substitution matrix.

    Uses boolean powers up to Wielandt's bound ``(n-1)^2 + 1`` (at most n^2)
    and reports the smallest power that is entrywise positive.
    """
    n = len(phi.alphabet)
    if n == 0:
        return Primitivity(False, None)
    m = phi.matrix() > 0
    p = m.copy()
    for k in range(1, (n - 1) ** 2 + 2):
        if p.all():
            return Primitivity(True, k)
        p = (p.astype(np.int64) @ m.astype(np.int64)) > 0
    return Primitivity(False, None)


def perron_estimate(phi: Morphism, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Dominant eigenvalue of the substitution matrix of a primitive morphism.

    Power iteration from the all-ones vector.  Convergence is certified with
    the Collatz-Wielandt bracket ``min (Mx)_i/x_i <= lambda <= max (Mx)_i/x_i``,
    which holds for any positive x when M is primitive.
    """
    prim = is_primitive(phi)
    if not prim:
        raise NotPrimitive("perron_estimate needs a primitive morphism")
    m = phi.matrix().astype(float)
    # a power of M is positive, so iterating M^k keeps x strictly positive
    step = np.linalg.matrix_power(m, prim.power)
    x = np.ones(m.shape[0])
    lo, hi = 0.0, np.inf
    for _ in range(max_iter):
        y = m @ x
        ratios = y / x
        lo, hi = max(lo, ratios.min()), min(hi, ratios.max())
        if hi - lo <= tol:
            break
        x = step @ x
        x /= x.max()
    else:
        raise RuntimeError("power iteration did not converge")
    return float((lo + hi) / 2)


def parse_morphism_text(text: str):
    """Parse the ``letter -> image`` format.

    Returns ``(morphism, seed, coding)``; seed and coding are ``None`` when
    absent.  ``#`` starts a comment.  An empty right-hand side is an empty
    image.
    """
    rules: dict[str, str] = {}
    order: list[str] = []
    seed = None
    coding = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("seed:"):
            seed = line[5:].strip()
            if len(seed) != 1:
                raise ConfigError("seed must be a single letter", lineno)
            continue
        if line.startswith("coding:"):
            coding = {}
            for part in line[7:].split(","):
                part = part.strip()
                if not part:
                    continue
                if "->" not in part:
                    raise ConfigError(f"bad coding entry {part!r}", lineno)
                src, dst = (s.strip() for s in part.split("->", 1))
                if len(src) != 1 or len(dst) != 1:
                    raise ConfigError("coding maps letters to letters", lineno)
                coding[src] = dst
            continue
        if "->" not in line:
            raise ConfigError(f"expected 'letter -> image', got {line!r}", lineno)
        lhs, rhs = (s.strip() for s in line.split("->", 1))
        if len(lhs) != 1:
            raise ConfigError(f"left side must be one letter, got {lhs!r}", lineno)
        if lhs in rules:
            raise ConfigError(f"letter {lhs!r} defined twice", lineno)
        if any(ch.isspace() for ch in rhs):
            raise ConfigError("images may not contain whitespace", lineno)
        rules[lhs] = rhs
        order.append(lhs)
    if not rules:
        raise ConfigError("no rules found")
    extra = sorted({x for img in rules.values() for x in img} - set(rules))
    if extra:
        raise ConfigError(f"letters {extra} used in images but have no rule")
    phi = Morphism(tuple(order), rules)
    if seed is not None and seed not in rules:
        raise ConfigError(f"seed {seed!r} is not in the alphabet")
    if coding is not None and set(coding) != set(rules):
        raise ConfigError("coding must cover exactly the alphabet")
    return phi, seed, coding
