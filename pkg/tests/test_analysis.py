import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rauzy.analysis import (
    UR,
    NotPeriodicUpTo,
    NotUR,
    Periodic,
    Undecided,
    balance_check,
    complexity_profile,
    eventual_period,
    first_difference_bound,
    periodicity_probe,
    recurrence_exponent,
    special_factors,
    to_json,
    uniform_recurrence_probe,
    validate_safety_factor,
)
from rauzy.corpus import ab_infinity, fibonacci, golden_sturmian, periodic_ab, ramp_sturmian, thue_morse, tribonacci
from rauzy.words import EventuallyPeriodic, FactorOracle


def scan(word, n):
    return {word[i:i + n] for i in range(len(word) - n + 1)}


def brute_p2(word, n):
    """Smallest L with every length-L window of ``word`` holding all its length-n factors."""
    fs = scan(word, n)
    for L in range(n, len(word) + 1):
        if all(scan(word[s:s + L], n) == fs for s in range(len(word) - L + 1)):
            return L
    return len(word) + 1


def test_complexity_examples():
    assert complexity_profile(FactorOracle(fibonacci()), 10).values == tuple(range(2, 12))
    assert complexity_profile(FactorOracle(periodic_ab()), 5).values == (2,) * 5
    assert complexity_profile(FactorOracle(thue_morse()), 4).values == (2, 4, 6, 10)


@pytest.mark.parametrize("src", [fibonacci(), thue_morse(), tribonacci(), ramp_sturmian()])
def test_complexity_matches_long_scan(src):
    big = FactorOracle(src).prefix(150_000)
    prof = complexity_profile(FactorOracle(src), 25)
    assert prof.values == tuple(len(scan(big, n)) for n in range(1, 26))
    alpha = len(scan(big, 1))
    for a, b in zip(prof.values, prof.values[1:]):
        assert a <= b <= alpha * a


def test_first_difference_bound():
    assert first_difference_bound(complexity_profile(FactorOracle(fibonacci()), 30)) == 1
    assert first_difference_bound(complexity_profile(FactorOracle(periodic_ab()), 6)) == 0
    assert first_difference_bound(complexity_profile(FactorOracle(thue_morse()), 30)) == 4
    with pytest.raises(ValueError):
        first_difference_bound(complexity_profile(FactorOracle(fibonacci()), 1))


def test_recurrence_examples():
    assert recurrence_exponent(FactorOracle(periodic_ab()), 1)[1] == 2
    assert recurrence_exponent(FactorOracle(EventuallyPeriodic("", "a")), 3)[3] == 3
    prof = recurrence_exponent(FactorOracle(fibonacci()), 20)
    assert all(v is not None and v / n <= 5 for n, v in enumerate(prof.values, start=1))


@pytest.mark.parametrize("src", [fibonacci(), thue_morse(), periodic_ab()])
def test_recurrence_matches_brute_force(src):
    word = FactorOracle(src).prefix(400)
    prof = recurrence_exponent(FactorOracle(src), 6, window=400)
    for n in range(1, 7):
        expected = brute_p2(word, n)
        assert prof[n] == (expected if 4 * expected <= 400 else None)


def test_recurrence_monotone_where_defined():
    prof = recurrence_exponent(FactorOracle(tribonacci()), 30)
    vals = [v for _, v in prof.defined()]
    assert vals == sorted(vals)


def test_recurrence_marks_short_buffers_undefined():
    prof = recurrence_exponent(FactorOracle(fibonacci()), 40, window=200)
    assert prof[40] is None


def test_special_factor_examples():
    r1 = special_factors(FactorOracle(fibonacci()), 1)
    assert (r1.right, r1.left, r1.bispecial) == (("a",), ("a",), ("a",))
    r2 = special_factors(FactorOracle(fibonacci()), 2)
    assert (r2.right, r2.left, r2.bispecial) == (("ba",), ("ab",), ())
    for k in (1, 3, 6):
        r = special_factors(FactorOracle(periodic_ab()), k)
        assert r.left == r.right == r.bispecial == ()


def test_special_factors_against_scan():
    src = tribonacci()
    big = FactorOracle(src).prefix(100_000)
    o = FactorOracle(src)
    for k in range(1, 12):
        ext = scan(big, k + 1)
        right = sorted(u for u in scan(big, k) if len({w[-1] for w in ext if w[:-1] == u}) > 1)
        left = sorted(u for u in scan(big, k) if len({w[0] for w in ext if w[1:] == u}) > 1)
        r = special_factors(o, k)
        assert list(r.right) == right and list(r.left) == left
        assert set(r.bispecial) == set(left) & set(right)


def test_balance_examples():
    assert balance_check(FactorOracle(fibonacci()), 20)
    v = balance_check(FactorOracle(thue_morse()), 2)
    assert not v and v.witness == ("aa", "bb")
    assert balance_check(FactorOracle(EventuallyPeriodic("", "a")), 10)


@pytest.mark.parametrize("src", [golden_sturmian(), ramp_sturmian()])
def test_sturmian_characterisation(src):
    o = FactorOracle(src)
    assert complexity_profile(o, 30).values == tuple(range(2, 32))
    assert balance_check(o, 30)
    for k in range(1, 20):
        r = special_factors(o, k)
        assert len(r.left) == 1 and len(r.right) == 1


def test_periodicity_examples():
    # a(ba)^w is the same word as (ab)^w, so the minimal pair is (0, 2)
    assert periodicity_probe(FactorOracle(EventuallyPeriodic("a", "ba")), 20) == Periodic(0, 2)
    assert periodicity_probe(FactorOracle(EventuallyPeriodic("b", "ba")), 20) == Periodic(1, 2)
    for h in (5, 30):
        assert periodicity_probe(FactorOracle(fibonacci()), h) == NotPeriodicUpTo(h)
    got = periodicity_probe(FactorOracle(ab_infinity()), 20)
    assert (got.preperiod, got.period) == (1, 1)


def test_periodicity_undecided_when_horizon_too_small():
    assert isinstance(periodicity_probe(FactorOracle(fibonacci(), horizon=100), 20, window=1000), Undecided)


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="ab", max_size=6), st.text(alphabet="ab", min_size=1, max_size=5))
def test_periodicity_reproduces_word(pre, per):
    src = EventuallyPeriodic(pre, per)
    o = FactorOracle(src)
    v = periodicity_probe(o, 15)
    assert isinstance(v, Periodic) and v.certified
    buf = o.buffer
    q, p = v.preperiod, v.period
    assert all(buf[i] == buf[i + p] for i in range(q, len(buf) - p))
    assert q <= len(pre) and p <= len(per)


def test_eventual_period_minimality():
    assert eventual_period("abbbbbbbbb", 3) == (1, 1)
    assert eventual_period("abababab", 2) == (0, 2)
    assert eventual_period("abaababaab", 2) is None


def test_uniform_recurrence_probe():
    assert isinstance(uniform_recurrence_probe(fibonacci()), UR)
    assert isinstance(uniform_recurrence_probe(thue_morse()), UR)
    assert uniform_recurrence_probe(ab_infinity()) == NotUR("b", 8)
    with pytest.raises(TypeError):
        uniform_recurrence_probe(golden_sturmian())


def test_validate_safety_factor():
    assert validate_safety_factor(fibonacci(), 8, 30) == []
    assert 9 in validate_safety_factor(tribonacci(), 4, 12)


def test_exports():
    prof = complexity_profile(FactorOracle(fibonacci()), 3)
    assert prof.to_csv() == "N,P,diff\n1,2,1\n2,3,1\n3,4,\n"
    assert json.loads(to_json(prof))["values"] == [2, 3, 4]
    rec = recurrence_exponent(FactorOracle(fibonacci()), 2)
    assert json.loads(to_json(rec))["window"] == rec.window
