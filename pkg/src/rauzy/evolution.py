"""Elementary evolution of Rauzy schemes, the deterministic protocol and rigging."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Callable, Iterable, Sequence

from .errors import DegenerateResult, NoSupportEdge, NotSupportEdge, PathCapExceeded, RauzyError
from .scheme import Scheme, path_words, symmetric_closure
from .words import FactorOracle, Morphism, PurelyMorphic, WordSource

SCHEMA = "rauzy.protocol/1"


# ----------------------------------------------------------------------------
# support edges and scale

def support_edges(s: Scheme) -> list[int]:
    out = [e.number for e in s.edges if s.is_collecting(e.tail) and s.is_distributing(e.head)]
    if not out:
        raise NoSupportEdge("no collecting -> distributing edge")
    return out


def scale(s: Scheme) -> int:
    return min(len(s.edge(n).front) for n in support_edges(s))


# ----------------------------------------------------------------------------
# light schemes

@dataclass(frozen=True)
class LightScheme:
    """Numbered multigraph without words; vertices numbered by first appearance."""

    edges: tuple[tuple[int, int], ...]
    num_vertices: int

    @classmethod
    def of(cls, s: Scheme) -> LightScheme:
        relabel: dict[int, int] = {}
        for e in s.edges:
            for v in (e.tail, e.head):
                relabel.setdefault(v, len(relabel))
        return cls(tuple((relabel[e.tail], relabel[e.head]) for e in s.edges), s.num_vertices)

    def degrees(self):
        ins = [0] * self.num_vertices
        outs = [0] * self.num_vertices
        for t, h in self.edges:
            outs[t] += 1
            ins[h] += 1
        return ins, outs

    def roles(self) -> tuple[str, ...]:
        ins, outs = self.degrees()
        return tuple("c" if i > 1 else "d" if o > 1 else "?" for i, o in zip(ins, outs))

    def support_edges(self) -> list[int]:
        ins, outs = self.degrees()
        return [n for n, (t, h) in enumerate(self.edges, start=1) if ins[t] > 1 and outs[h] > 1]

    def to_dict(self):
        return {"roles": "".join(self.roles()), "edges": [list(e) for e in self.edges]}


def renumber(keys: Sequence[tuple]) -> list[int]:
    """New numbers 1..E for edges with the given provenance keys.

    Surviving edges carry ``(0, old number)``, new edges ``(1, e, f)``; sorting
    the keys puts survivors first in their old order, then new edges by (e, f).
    """
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    numbers = [0] * len(keys)
    for new, i in enumerate(order, start=1):
        numbers[i] = new
    return numbers


def canonical_order(light: LightScheme) -> tuple[int, ...]:
    """Edge numbers of ``light`` listed in canonical order.

    Every start edge and every ordering of the unvisited out-edges at each
    vertex is tried; edges are numbered in breadth-first discovery order and
    the smallest resulting adjacency code wins.  Ties between codes (graph
    automorphisms) go to the smallest sequence of current numbers, so the
    result depends on the light scheme alone.
    """
    edges = light.edges
    outs: dict[int, list[int]] = {}
    for i, (t, _) in enumerate(edges):
        outs.setdefault(t, []).append(i)
    best: list = [None]

    def code_of(order):
        vl: dict[int, int] = {}
        code = []
        for i in order:
            t, h = edges[i]
            vl.setdefault(t, len(vl))
            vl.setdefault(h, len(vl))
            code.append((vl[t], vl[h]))
        return tuple(code)

    def grow(order, seen, k):
        if best[0] is not None:
            code = code_of(order)
            if code > best[0][0][:len(code)]:
                return
        if k == len(order):
            if len(order) == len(edges):
                key = (code_of(order), tuple(order))
                if best[0] is None or key < best[0]:
                    best[0] = key
            return
        fresh = [j for j in outs.get(edges[order[k]][1], ()) if j not in seen]
        for perm in permutations(fresh):
            grow(order + list(perm), seen | set(perm), k + 1)

    for start in range(len(edges)):
        grow([start], {start}, 0)
    if best[0] is None:
        raise ValueError("light scheme is not strongly connected")
    return tuple(i + 1 for i in best[0][1])


def canonicalize(s: Scheme) -> Scheme:
    """The same scheme with its edges renumbered in canonical order."""
    order = canonical_order(LightScheme.of(s))
    edges = tuple(replace(s.edge(old), number=new) for new, old in enumerate(order, start=1))
    return Scheme(s.vertex_words, edges, s.order)


def evolution_method(light: LightScheme) -> tuple[int, Callable[[Sequence[tuple]], list[int]]]:
    """Lowest-numbered support edge, plus the renumbering rule for the result."""
    candidates = light.support_edges()
    if not candidates:
        raise NoSupportEdge("light scheme has no support edge")
    return candidates[0], renumber


# ----------------------------------------------------------------------------
# elementary evolution

@dataclass(frozen=True)
class EvolutionStep:
    scheme: Scheme
    support: int
    rejected: frozenset[tuple[int, int]]
    accepted: tuple[tuple[int, int], ...]


def _glue(a: str, b: str, overlap: int) -> str:
    return a + b[overlap:]


def evolve_step(s: Scheme, v: int, oracle: FactorOracle,
                numbering: Callable[[Sequence[tuple]], list[int]] = renumber) -> EvolutionStep:
    """Replace support edge ``v`` by its admissible composites e.v.f.

    The tail C of v is split into one copy per in-edge e (word = e glued with
    v), the head D into one copy per out-edge f (word = v glued with f); the
    composite e.v.f joins the copies.  Vertices left with one in- and one
    out-edge are then smoothed away.
    """
    ev = s.edge(v)
    c, d = ev.tail, ev.head
    if not (s.role(c) == "collecting" and s.role(d) == "distributing"):
        raise NotSupportEdge(f"edge {v} does not run from a collecting to a distributing vertex")
    sc, sd = len(s.vertex_words[c]), len(s.vertex_words[d])
    ins, outs = s.in_edges(c), s.out_edges(d)

    accepted, rejected = [], set()
    for e in ins:
        for f in outs:
            closure = symmetric_closure(s, (e, v, f))
            if oracle.contains(path_words(s, closure)[0]):
                accepted.append((e, f))
            else:
                rejected.add((e, f))

    # split graph: vertex keys are old ids, ("C", e) or ("D", f)
    vword: dict = {x: w for x, w in enumerate(s.vertex_words) if x not in (c, d)}
    for e in ins:
        vword[("C", e)] = _glue(s.edge(e).word, ev.word, sc)
    for f in outs:
        vword[("D", f)] = _glue(ev.word, s.edge(f).word, sd)
    arcs = []  # [tail, head, word, key]
    for x in s.edges:
        if x.number == v:
            continue
        t, h, w = x.tail, x.head, x.word
        if t == d:
            t, w = ("D", x.number), _glue(ev.word, w, sd)
        if h == c:
            h, w = ("C", x.number), _glue(w, ev.word, sc)
        arcs.append([t, h, w, (0, x.number)])
    for e, f in accepted:
        w = _glue(_glue(s.edge(e).word, ev.word, sc), s.edge(f).word, sd)
        arcs.append([("C", e), ("D", f), w, (1, e, f)])

    arcs = _smooth(arcs, vword)
    if len(arcs) < 2:
        raise DegenerateResult(f"evolution at edge {v} leaves {len(arcs)} edge(s)")

    numbers = numbering([a[3] for a in arcs])
    ordered = [a for _, a in sorted(zip(numbers, arcs), key=lambda p: p[0])]
    ids: dict = {}
    for t, h, _, _ in ordered:
        ids.setdefault(t, len(ids))
        ids.setdefault(h, len(ids))
    words = [None] * len(ids)
    for x, i in ids.items():
        words[i] = vword[x]
    new = Scheme.from_words(words, [(ids[t], ids[h], w) for t, h, w, _ in ordered], order=s.order)
    return EvolutionStep(new, v, frozenset(rejected), tuple(accepted))


def _smooth(arcs, vword):
    """Merge edges through vertices of in- and out-degree one."""
    while True:
        ins: dict = {}
        outs: dict = {}
        for i, (t, h, _, _) in enumerate(arcs):
            outs.setdefault(t, []).append(i)
            ins.setdefault(h, []).append(i)
        for x in vword:
            if len(ins.get(x, ())) == 0 or len(outs.get(x, ())) == 0:
                if x in ins or x in outs:
                    raise DegenerateResult(f"vertex {x} lost all its in- or out-edges")
        target = next((x for x in vword if len(ins.get(x, ())) == 1 and len(outs.get(x, ())) == 1), None)
        if target is None:
            return arcs
        (i,), (j,) = ins[target], outs[target]
        if i == j:
            raise DegenerateResult("evolution produced an isolated loop")
        a, b = arcs[i], arcs[j]
        merged = [a[0], b[1], _glue(a[2], b[2], len(vword[target])), min(a[3], b[3])]
        arcs = [x for k, x in enumerate(arcs) if k not in (i, j)] + [merged]
        del vword[target]


def evolve(s: Scheme, v: int, oracle: FactorOracle) -> Scheme:
    return evolve_step(s, v, oracle).scheme


# ----------------------------------------------------------------------------
# protocol

@dataclass(frozen=True)
class ProtocolEntry:
    light: LightScheme
    support: int
    rejected: frozenset[tuple[int, int]]

    def to_dict(self):
        return {"light_scheme": self.light.to_dict(), "support_edge": self.support,
                "rejected_pairs": sorted(list(p) for p in self.rejected)}


@dataclass(frozen=True)
class Period:
    preperiod: int
    period: int
    repetitions: int


@dataclass
class Protocol:
    order: int | None
    entries: list[ProtocolEntry] = field(default_factory=list)
    scales: list[int] = field(default_factory=list)
    error: str | None = None
    schemes: list[Scheme] | None = None

    def __len__(self):
        return len(self.entries)

    def to_dict(self, period: Period | None = None) -> dict:
        d = {
            "schema": SCHEMA,
            "order": self.order,
            "steps": [dict(step=i, scale=self.scales[i], **e.to_dict()) for i, e in enumerate(self.entries)],
            "error": self.error,
        }
        if period is not None:
            d["period"] = {"preperiod": period.preperiod, "period": period.period,
                           "repetitions": period.repetitions}
        return d

    def to_json(self, period: Period | None = None) -> str:
        return json.dumps(self.to_dict(period), indent=2, sort_keys=True)


def run_protocol(source: WordSource | FactorOracle, k0: int, steps: int, keep_schemes: bool = False,
                 k_max: int = 64, canonical: bool = True) -> Protocol:
    """Deterministic evolution from the first clean order >= k0.

    With ``canonical`` (the default) every scheme is renumbered by
    :func:`canonical_order` before the method picks its support edge, so the
    protocol sees schemes up to isomorphism of their light schemes.  Without
    it the provenance numbering of :func:`renumber` is kept from step to step.

    Errors (no clean order, horizon, degeneracy) end the run; the partial
    protocol carries the message in ``error``.
    """
    from .scheme import build_scheme_from_rauzy, find_clean_order

    oracle = source if isinstance(source, FactorOracle) else FactorOracle(source)
    proto = Protocol(None, schemes=[] if keep_schemes else None)
    try:
        k = find_clean_order(oracle, k0, k_max)
        s = build_scheme_from_rauzy(oracle, k)
        if canonical:
            s = canonicalize(s)
    except RauzyError as exc:
        proto.error = f"{type(exc).__name__}: {exc}"
        return proto
    proto.order = k
    numbering = renumber
    for _ in range(steps):
        if keep_schemes:
            proto.schemes.append(s)
        try:
            light = LightScheme.of(s)
            v, numbering = evolution_method(light)
            step = evolve_step(s, v, oracle, numbering)
        except RauzyError as exc:
            proto.error = f"{type(exc).__name__}: {exc}"
            break
        proto.entries.append(ProtocolEntry(light, v, step.rejected))
        proto.scales.append(scale(s))
        s = canonicalize(step.scheme) if canonical else step.scheme
    else:
        if keep_schemes:
            proto.schemes.append(s)
    return proto


def detect_period(entries: Sequence | Protocol, r: int = 3) -> Period | None:
    """Smallest period p, then smallest preperiod q, observed at least r times.

    This is a bounded-horizon observation, not a proof either way.
    """
    seq = entries.entries if isinstance(entries, Protocol) else list(entries)
    t = len(seq)
    for p in range(1, t + 1):
        for q in range(0, t - r * p + 1):
            if all(seq[i] == seq[i + p] for i in range(q, t - p)):
                return Period(q, p, (t - q) // p)
    return None


# ----------------------------------------------------------------------------
# test words and rigging

def test_words(phi: Morphism, k: int, coding: dict[str, str] | None = None,
               pairs: Iterable[str] | None = None) -> tuple[str, ...]:
    """psi(phi^k(x)) for letters x and for the 2-factors of phi^inf(a1)."""
    if pairs is None:
        pairs = FactorOracle(PurelyMorphic(phi, phi.alphabet[0])).factors(2)
    pk = phi.power(k)
    table = str.maketrans(coding) if coding else None
    out = set()
    for w in list(phi.alphabet) + sorted(pairs):
        img = pk(w)
        if table:
            img = img.translate(table)
        if img:
            out.add(img)
    return tuple(sorted(out, key=lambda w: (len(w), w)))



@dataclass(frozen=True)
class Rigging:
    order: int
    light: LightScheme
    sets: tuple[tuple[str, tuple[tuple[tuple[int, ...], bool], ...]], ...]

    @property
    def size(self) -> int:
        return max((len(p) for _, paths in self.sets for p, _ in paths), default=0)

    def paths(self, q: str) -> dict[tuple[int, ...], bool]:
        for word, paths in self.sets:
            if word == q:
                return dict(paths)
        raise KeyError(q)

    def shape(self):
        """Rigging without the test words themselves (comparable across orders)."""
        return self.light, tuple(paths for _, paths in self.sets)


def _sub_path(p: tuple, q: tuple) -> bool:
    n = len(p)
    return any(q[i:i + n] == p for i in range(len(q) - n + 1))


def paths_in_word(s: Scheme, q: str, cap: int = 64) -> list[tuple[int, ...]]:
    """All symmetric paths whose F-word is a factor of ``q``."""
    found = []

    def walk(path, front):
        last = s.edge(path[-1])
        dist = s.is_distributing(last.head)
        if dist:
            found.append(path)
        if len(path) >= cap:
            raise PathCapExceeded(f"paths fitting in a word of length {len(q)} exceed {cap} edges")
        for n in s.out_edges(last.head):
            f = front + s.edge(n).front if dist else front
            if f in q:
                walk(path + (n,), f)

    for v in range(s.num_vertices):
        if s.is_collecting(v):
            for n in s.out_edges(v):
                if s.edge(n).front in q:
                    walk((n,), s.edge(n).front)
    return sorted(found)


def rigging(s: Scheme, words: Sequence[str], k: int = 0, cap: int = 64) -> Rigging:
    sets = []
    for q in words:
        paths = paths_in_word(s, q, cap)
        marked = tuple((p, not any(p != o and _sub_path(p, o) for o in paths)) for p in paths)
        sets.append((q, marked))
    return Rigging(k, LightScheme.of(s), tuple(sets))
