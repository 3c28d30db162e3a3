"""Built-in word sources used by the CLI ``verify`` command and the tests."""
from __future__ import annotations

from .words import DigitStream, EventuallyPeriodic, Morphism, PurelyMorphic, SturmianCF

FIB = Morphism(("a", "b"), {"a": "ab", "b": "a"})
THUE_MORSE = Morphism(("a", "b"), {"a": "ab", "b": "ba"})
TRIBONACCI = Morphism(("a", "b", "c"), {"a": "ab", "b": "ac", "c": "a"})
AB_INF = Morphism(("a", "b"), {"a": "ab", "b": "b"})


def fibonacci() -> PurelyMorphic:
    return PurelyMorphic(FIB, "a")


def thue_morse() -> PurelyMorphic:
    return PurelyMorphic(THUE_MORSE, "a")


def tribonacci() -> PurelyMorphic:
    return PurelyMorphic(TRIBONACCI, "a")


def ab_infinity() -> PurelyMorphic:
    """a b b b ... : purely morphic, not uniformly recurrent."""
    return PurelyMorphic(AB_INF, "a")


def golden_sturmian() -> SturmianCF:
    return SturmianCF(DigitStream())


def ramp_sturmian() -> SturmianCF:
    """Sturmian word whose digit stream 1,2,1,1,2,1,1,1,2,... is not eventually periodic."""
    return SturmianCF(DigitStream(kind="ramp"))


def champernowne_sturmian() -> SturmianCF:
    """Sturmian word driven by the Champernowne digits (0 read as 1)."""
    return SturmianCF(DigitStream(kind="champernowne"))


def periodic_ab() -> EventuallyPeriodic:
    return EventuallyPeriodic("", "ab")


CORPUS = {
    "fibonacci": fibonacci,
    "thue-morse": thue_morse,
    "tribonacci": tribonacci,
    "sturmian-golden": golden_sturmian,
    "sturmian-ramp": ramp_sturmian,
    "sturmian-champernowne": champernowne_sturmian,
}
