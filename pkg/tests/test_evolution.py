import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rauzy import evolution as ev
from rauzy.corpus import FIB as PHI_FIB, THUE_MORSE as PHI_TM
from rauzy.corpus import champernowne_sturmian, fibonacci, periodic_ab, thue_morse, tribonacci
from rauzy.errors import DegenerateResult, NoSupportEdge, NotSupportEdge, PathCapExceeded
from rauzy.evolution import (
    LightScheme,
    ProtocolEntry,
    canonical_order,
    canonicalize,
    detect_period,
    evolve_step,
    renumber,
    rigging,
    run_protocol,
    scale,
    support_edges,
)
from rauzy.scheme import Scheme, build_scheme_from_rauzy, path_words, symmetric_closure, validate_scheme
from rauzy.words import FactorOracle, perron_estimate

FIB = FactorOracle(fibonacci())
S2 = build_scheme_from_rauzy(FIB, 2)
FIB_PREFIX = FIB.prefix(20_000)


class StubOracle:
    def __init__(self, accept):
        self.accept = accept

    def contains(self, u):
        return self.accept(u)


def test_support_edges_and_scale():
    assert support_edges(S2) == [1]
    assert scale(S2) == 3
    after = evolve_step(S2, 1, FIB).scheme
    assert scale(after) > scale(S2)
    cyc = Scheme(("a",), ())
    with pytest.raises(NoSupportEdge):
        support_edges(cyc)


def test_fibonacci_evolution_against_scan():
    step = evolve_step(S2, 1, FIB)
    # of the four combinations (e, f) around edge 1, keep those whose
    # closure word occurs in a long prefix
    expected = set()
    for e in (2, 3):
        for f in (2, 3):
            word = path_words(S2, symmetric_closure(S2, (e, 1, f)))[0]
            if word in FIB_PREFIX:
                expected.add((e, f))
    assert set(step.accepted) == expected == {(2, 3), (3, 2), (3, 3)}
    assert step.rejected == {(2, 2)}
    assert [e.word for e in step.scheme.edges] == ["baababaab", "abaaba", "baabaab"]
    assert validate_scheme(step.scheme, FIB).ok


def test_evolution_errors():
    with pytest.raises(NotSupportEdge):
        evolve_step(S2, 2, FIB)
    with pytest.raises(DegenerateResult):
        evolve_step(S2, 1, StubOracle(lambda u: False))
    keep = path_words(S2, symmetric_closure(S2, (3, 1, 3)))[0]
    with pytest.raises(DegenerateResult):
        evolve_step(S2, 1, StubOracle(lambda u: u == keep))


def test_accepted_and_rejected_partition_the_combinations():
    p = run_protocol(thue_morse(), 1, 12, keep_schemes=True)
    for s, entry in zip(p.schemes, p.entries):
        v = s.edge(entry.support)
        step = evolve_step(s, entry.support, FactorOracle(thue_morse()))
        combos = {(e, f) for e in s.in_edges(v.tail) for f in s.out_edges(v.head)}
        assert set(step.accepted) | step.rejected == combos
        assert not set(step.accepted) & step.rejected


def test_renumber_is_a_bijection_with_survivors_first():
    keys = [(1, 3, 2), (0, 5), (1, 2, 3), (0, 1), (1, 2, 2)]
    assert renumber(keys) == [5, 2, 4, 1, 3]
    assert renumber(keys) == renumber(list(keys))


def _relabel(light, perm_edges, perm_vertices):
    edges = [None] * len(light.edges)
    for old, new in enumerate(perm_edges):
        t, h = light.edges[old]
        edges[new] = (perm_vertices[t], perm_vertices[h])
    relabel = {}
    for t, h in edges:
        relabel.setdefault(t, len(relabel))
        relabel.setdefault(h, len(relabel))
    return LightScheme(tuple((relabel[t], relabel[h]) for t, h in edges), light.num_vertices)


def _apply(light, order):
    relabel = {}
    edges = []
    for n in order:
        t, h = light.edges[n - 1]
        relabel.setdefault(t, len(relabel))
        relabel.setdefault(h, len(relabel))
        edges.append((relabel[t], relabel[h]))
    return tuple(edges)


TM_LIGHTS = [e.light for e in run_protocol(thue_morse(), 1, 16).entries]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(TM_LIGHTS) - 1), st.randoms(use_true_random=False))
def test_canonical_form_ignores_numbering(idx, rnd):
    light = TM_LIGHTS[idx]
    pe = list(range(len(light.edges)))
    pv = list(range(light.num_vertices))
    rnd.shuffle(pe)
    rnd.shuffle(pv)
    other = _relabel(light, pe, pv)
    assert _apply(other, canonical_order(other)) == _apply(light, canonical_order(light))
    assert sorted(canonical_order(light)) == list(range(1, len(light.edges) + 1))


def test_canonicalize_keeps_words():
    s = canonicalize(evolve_step(S2, 1, FIB).scheme)
    assert sorted(e.word for e in s.edges) == sorted(e.word for e in evolve_step(S2, 1, FIB).scheme.edges)
    assert canonicalize(s) == s


def test_protocol_is_deterministic_and_serialises_identically():
    a = run_protocol(fibonacci(), 1, 10)
    b = run_protocol(FactorOracle(fibonacci()), 1, 10)
    assert a.entries == b.entries and a.scales == b.scales
    assert a.to_json(detect_period(a)) == b.to_json(detect_period(b))
    d = json.loads(a.to_json())
    assert d["schema"] == "rauzy.protocol/1" and len(d["steps"]) == 10
    assert d["steps"][0]["support_edge"] == a.entries[0].support


def test_protocol_of_a_periodic_word_is_empty_with_error():
    p = run_protocol(periodic_ab(), 1, 5, k_max=12)
    assert len(p) == 0 and p.order is None
    assert p.error.startswith("HorizonExceeded")


def test_detect_period_examples():
    assert detect_period(["x"] * 6) == ev.Period(0, 1, 6)
    assert detect_period(list("yxyxyxyx")) == ev.Period(0, 2, 4)
    assert detect_period(list("zzxyxyxyxy")) == ev.Period(2, 2, 4)
    assert detect_period(list("xy")) is None
    assert detect_period(list("abaabbab")) is None


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4),
       st.lists(st.integers(0, 3), min_size=1, max_size=3),
       st.integers(3, 6))
def test_detect_period_recovers_planted_periods(pre, block, reps):
    seq = pre + block * reps
    found = detect_period(seq)
    assert found is not None
    # the planted repetition is one candidate, so the minimal period is no larger
    assert found.period <= len(block)
    q, p = found.preperiod, found.period
    assert all(seq[i] == seq[i + p] for i in range(q, len(seq) - p))
    assert len(seq) - q >= 3 * p


@pytest.mark.parametrize("make,steps", [(fibonacci, 14), (tribonacci, 12), (thue_morse, 24)])
def test_every_scheme_along_a_run_validates(make, steps):
    oracle = FactorOracle(make())
    p = run_protocol(oracle, 1, steps, keep_schemes=True)
    assert p.error is None and len(p.schemes) == steps + 1
    for s in p.schemes:
        rep = validate_scheme(s, oracle)
        assert rep.ok, str(rep)


@pytest.mark.parametrize("make", [fibonacci, tribonacci, thue_morse, champernowne_sturmian])
def test_scale_never_decreases(make):
    p = run_protocol(make(), 1, 20)
    sc = p.scales
    assert all(a <= b for a, b in zip(sc, sc[1:]))
    assert all(sc[i] < sc[i + 5] for i in range(len(sc) - 5))


def test_protocol_entries_carry_canonical_light_schemes():
    p = run_protocol(thue_morse(), 1, 8)
    for entry in p.entries:
        assert isinstance(entry, ProtocolEntry)
        assert canonical_order(entry.light) == tuple(range(1, len(entry.light.edges) + 1))
        assert entry.support == entry.light.support_edges()[0]


def test_test_words_examples():
    assert set(ev.test_words(PHI_FIB, 1)) == {"a", "ab", "aba", "aab", "abab"}
    assert ev.test_words(PHI_FIB, 0) == ("a", "b", "aa", "ab", "ba")
    # a coding is applied after the morphism
    assert ev.test_words(PHI_TM, 1, coding={"a": "0", "b": "1"})[:2] == ("01", "10")


@pytest.mark.parametrize("phi", [PHI_FIB, PHI_TM])
def test_test_word_lengths_grow_like_the_perron_root(phi):
    lam = perron_estimate(phi)
    total = [sum(map(len, ev.test_words(phi, k))) for k in range(12)]
    assert abs(total[11] / total[10] - lam) / lam < 0.02


def test_rigging_examples():
    r = rigging(S2, ["aba", "a", "abaab"])
    assert r.paths("aba") == {(1,): True}
    assert r.paths("a") == {}
    # (1, 3, 1) has F = abaaba, too long for abaab
    assert all(len(S2.path_word(p)) <= 5 for p in r.paths("abaab"))
    assert r.size == 1
    with pytest.raises(KeyError):
        r.paths("bb")


def test_rigging_marks_maximal_paths():
    q = FIB_PREFIX[:60]
    r = rigging(S2, [q])
    marks = r.paths(q)
    assert marks and any(marks.values())
    for p, maximal in marks.items():
        longer = [o for o in marks if o != p and ev._sub_path(p, o)]
        assert maximal == (not longer)
        assert path_words(S2, p)[0] in q


def test_rigging_path_cap():
    with pytest.raises(PathCapExceeded):
        rigging(S2, [FIB_PREFIX[:500]], cap=4)
