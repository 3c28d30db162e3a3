"""Graphs with words: Rauzy schemes, their path words and a bounded validator.

Schemes use a concrete word model.  Vertex ``i`` carries a word ``sigma_i``
and every edge carries its full word, which begins with the tail's word and
ends with the head's word.  The word of a path glues consecutive edge words
over the shared vertex words.  For a scheme cut out of G_k the vertex words
are the k-letter factors and the edge words are the letters read along the
chain, so the two descriptions agree.

Front and back words are derived from this model:

* front(e) = right glues of the right natural extension of e, preceded by the
  tail word unless the tail is distributing;
* back(e) = left glues of the left natural extension of e, followed by the
  head word unless the head is collecting.

They are stored on the edges, so a scheme may also carry arbitrary words
(e.g. for fault injection) and the validator inspects what is stored.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterator, Sequence

from .analysis import special_factors
from .errors import BispecialAtOrder, GraphIsCycle, HorizonExceeded, InvalidPath, InvalidSource
from .rauzy_graph import build_rauzy_graph, graph_report, is_cycle
from .words import FactorOracle

COLLECTING = "collecting"
DISTRIBUTING = "distributing"
SCHEMA = "rauzy.scheme/1"

Path = tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    number: int
    tail: int
    head: int
    word: str
    front: str = ""
    back: str = ""


@dataclass(frozen=True)
class Scheme:
    vertex_words: tuple[str, ...]
    edges: tuple[Edge, ...]
    order: int = 0

    def __post_init__(self):
        n = len(self.vertex_words)
        for i, e in enumerate(self.edges):
            if e.number != i + 1:
                raise ValueError(f"edge at position {i} is numbered {e.number}, expected {i + 1}")
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise ValueError(f"edge {e.number} has an endpoint outside 0..{n - 1}")
            if not (e.word.startswith(self.vertex_words[e.tail]) and e.word.endswith(self.vertex_words[e.head])):
                raise ValueError(f"edge {e.number}: word {e.word!r} does not join its vertex words")

    # -- structure ------------------------------------------------------

    @cached_property
    def _adjacency(self):
        out: list[list[int]] = [[] for _ in self.vertex_words]
        inc: list[list[int]] = [[] for _ in self.vertex_words]
        for e in self.edges:
            out[e.tail].append(e.number)
            inc[e.head].append(e.number)
        return tuple(map(tuple, out)), tuple(map(tuple, inc))

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_words)

    def edge(self, n: int) -> Edge:
        if not 1 <= n <= len(self.edges):
            raise InvalidPath(f"no edge numbered {n}")
        return self.edges[n - 1]

    def out_edges(self, v: int) -> tuple[int, ...]:
        return self._adjacency[0][v]

    def in_edges(self, v: int) -> tuple[int, ...]:
        return self._adjacency[1][v]

    def is_distributing(self, v: int) -> bool:
        return len(self.out_edges(v)) > 1

    def is_collecting(self, v: int) -> bool:
        return len(self.in_edges(v)) > 1

    def role(self, v: int) -> str | None:
        i, o = len(self.in_edges(v)), len(self.out_edges(v))
        if i > 1 and o == 1:
            return COLLECTING
        if i == 1 and o > 1:
            return DISTRIBUTING
        return None

    def right_glue(self, n: int) -> str:
        e = self.edge(n)
        return e.word[len(self.vertex_words[e.tail]):]

    def left_glue(self, n: int) -> str:
        e = self.edge(n)
        return e.word[:len(e.word) - len(self.vertex_words[e.head])]

    def path_word(self, path: Sequence[int]) -> str:
        """Full glued word of a path (vertex word of the start included)."""
        check_path(self, path)
        return self.edge(path[0]).word + "".join(self.right_glue(n) for n in path[1:])

    def max_word_length(self) -> int:
        return max(max(len(e.front), len(e.back)) for e in self.edges)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_words(cls, vertex_words: Sequence[str], arcs: Sequence[tuple[int, int, str]], order: int = 0) -> Scheme:
        """Scheme with front/back words derived from the vertex and edge words."""
        bare = cls(tuple(vertex_words), tuple(Edge(i + 1, t, h, w) for i, (t, h, w) in enumerate(arcs)), order)
        edges = []
        for e in bare.edges:
            right = natural_extension(bare, (e.number,), "right")
            left = natural_extension(bare, (e.number,), "left")
            front = "" if bare.is_distributing(e.tail) else bare.vertex_words[e.tail]
            front += "".join(bare.right_glue(n) for n in right)
            back = "".join(bare.left_glue(n) for n in left)
            back += "" if bare.is_collecting(e.head) else bare.vertex_words[e.head]
            edges.append(replace(e, front=front, back=back))
        return cls(bare.vertex_words, tuple(edges), order)

    def with_edge(self, n: int, **changes) -> Scheme:
        """Copy with edge ``n`` modified (used for fault injection)."""
        edges = list(self.edges)
        edges[n - 1] = replace(edges[n - 1], **changes)
        return Scheme(self.vertex_words, tuple(edges), self.order)

    # -- export -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "order": self.order,
            "vertices": [{"id": i, "role": self.role(i), "word": w} for i, w in enumerate(self.vertex_words)],
            "edges": [{"number": e.number, "tail": e.tail, "head": e.head, "word": e.word,
                       "front": e.front, "back": e.back} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Scheme:
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        verts = sorted(d["vertices"], key=lambda v: v["id"])
        edges = sorted(d["edges"], key=lambda e: e["number"])
        return cls(tuple(v["word"] for v in verts),
                   tuple(Edge(e["number"], e["tail"], e["head"], e["word"], e["front"], e["back"]) for e in edges),
                   d.get("order", 0))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> Scheme:
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "S", width: int = 12) -> str:
        def cut(w):
            return w if len(w) <= width else w[:width - 1] + "~"

        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            shape = {COLLECTING: "box", DISTRIBUTING: "ellipse"}.get(self.role(v), "diamond")
            lines.append(f'  v{v} [shape={shape}, label="{cut(self.vertex_words[v])}"];')
        for e in self.edges:
            lines.append(f'  v{e.tail} -> v{e.head} [label="{e.number}:{cut(e.front)}/{cut(e.back)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# paths

def check_path(s: Scheme, path: Sequence[int]) -> None:
    if not path:
        raise InvalidPath("empty path")
    prev = None
    for n in path:
        e = s.edge(n)
        if prev is not None and prev.head != e.tail:
            raise InvalidPath(f"edge {n} does not continue edge {prev.number}")
        prev = e


def is_symmetric(s: Scheme, path: Sequence[int]) -> bool:
    check_path(s, path)
    return s.is_collecting(s.edge(path[0]).tail) and s.is_distributing(s.edge(path[-1]).head)


def path_words(s: Scheme, path: Sequence[int]) -> tuple[str, str]:
    """(F, B): concatenated front words of the front generators and back words of the back generators."""
    check_path(s, path)
    edges = [s.edge(n) for n in path]
    front = [edges[0].front] + [e.front for e in edges[1:] if s.is_distributing(e.tail)]
    back = [e.back for e in edges[:-1] if s.is_collecting(e.head)] + [edges[-1].back]
    return "".join(front), "".join(back)


def natural_extension(s: Scheme, path: Sequence[int], direction: str = "right") -> Path:
    """Minimal super-path ending at a distributing vertex (right) or starting at a collecting one (left)."""
    check_path(s, path)
    out = list(path)
    for _ in range(len(s.edges) + 1):
        if direction == "right":
            v = s.edge(out[-1]).head
            if s.is_distributing(v):
                return tuple(out)
            nxt = s.out_edges(v)
        elif direction == "left":
            v = s.edge(out[0]).tail
            if s.is_collecting(v):
                return tuple(out)
            nxt = s.in_edges(v)
        else:
            raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")
        if len(nxt) != 1:
            raise GraphIsCycle(f"vertex {v} has no unique continuation")
        if direction == "right":
            out.append(nxt[0])
        else:
            out.insert(0, nxt[0])
    raise GraphIsCycle("no special vertex reachable: the scheme is a cycle")


def symmetric_closure(s: Scheme, path: Sequence[int]) -> Path:
    return natural_extension(s, natural_extension(s, path, "left"), "right")


def symmetric_paths(s: Scheme, max_edges: int, min_front: int | None = None) -> Iterator[tuple[Path, str]]:
    """Yield (path, F) for symmetric paths with at most ``max_edges`` edges.

    With ``min_front`` a symmetric path whose F already has that length is
    not extended further.  Order is deterministic (DFS by edge number).
    """
    def walk(path, front):
        last = s.edge(path[-1])
        if s.is_distributing(last.head):
            yield path, front
            if min_front is not None and len(front) >= min_front:
                return
        if len(path) == max_edges:
            return
        dist = s.is_distributing(last.head)
        for n in s.out_edges(last.head):
            yield from walk(path + (n,), front + s.edge(n).front if dist else front)

    for v in range(s.num_vertices):
        if s.is_collecting(v):
            for n in s.out_edges(v):
                yield from walk((n,), s.edge(n).front)


def admissible(s: Scheme, path: Sequence[int], oracle: FactorOracle) -> bool:
    if not is_symmetric(s, path):
        raise InvalidPath("admissibility is defined for symmetric paths")
    return oracle.contains(path_words(s, path)[0])


# ----------------------------------------------------------------------------
# construction from G_k

def build_scheme_from_rauzy(oracle: FactorOracle, k: int) -> Scheme:
    g = build_rauzy_graph(oracle, k)
    rep = graph_report(g)
    if rep.cycle:
        raise GraphIsCycle(f"G_{k} is a cycle")
    if rep.bispecial:
        raise BispecialAtOrder(k, rep.bispecial)
    if not rep.strongly_connected:
        raise InvalidSource(f"G_{k} is not strongly connected: the word is not recurrent")
    special = rep.special
    ids = {w: i for i, w in enumerate(special)}
    arcs = []
    for x in special:
        for e in g.out_edges(x):
            word, cur = x, e
            while True:
                word += cur[-1]
                v = cur[1:]
                if v in ids:
                    break
                (cur,) = g.out_edges(v)
            arcs.append((x, v, word))
    arcs.sort(key=lambda a: (a[0], len(a[2]), a[2]))
    return Scheme.from_words(special, [(ids[t], ids[h], w) for t, h, w in arcs], order=k)


def find_clean_order(oracle: FactorOracle, k_min: int = 1, k_max: int = 64) -> int:
    """Least k >= k_min with no bispecial factor of length k and G_k not a cycle."""
    for k in range(k_min, k_max + 1):
        if special_factors(oracle, k).bispecial:
            continue
        if is_cycle(build_rauzy_graph(oracle, k)):
            continue
        return k
    raise HorizonExceeded(f"no clean order in {k_min}..{k_max}")


# ----------------------------------------------------------------------------
# validation

PASS, FAIL, UNVERIFIED = "pass", "fail", "unverified"


@dataclass(frozen=True)
class Verdict:
    status: str
    detail: str = ""


@dataclass
class SchemeReport:
    path_bound: int
    factor_bound: int
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v.status != FAIL for v in self.verdicts.values())

    @property
    def all_pass(self) -> bool:
        return all(v.status == PASS for v in self.verdicts.values())

    def __str__(self):
        rows = [f"bounds: paths <= {self.path_bound} edges, factors <= {self.factor_bound} letters"]
        rows += [f"  {k:8s} {v.status:10s} {v.detail}" for k, v in self.verdicts.items()]
        return "\n".join(rows)


def _count(u, w) -> int:
    """Overlapping occurrences of u in w (strings or tuples)."""
    if isinstance(u, str):
        n, i = 0, w.find(u)
        while i >= 0:
            n += 1
            i = w.find(u, i + 1)
        return n
    k = len(u)
    return sum(1 for i in range(len(w) - k + 1) if w[i:i + k] == u)


def _strongly_connected(s: Scheme) -> bool:
    def reach(step):
        seen, todo = {0}, [0]
        while todo:
            v = todo.pop()
            for u in step(v):
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return len(seen) == s.num_vertices

    return s.num_vertices > 0 and reach(lambda v: [s.edge(n).head for n in s.out_edges(v)]) and \
        reach(lambda v: [s.edge(n).tail for n in s.in_edges(v)])


def check_degrees(s: Scheme) -> Verdict:
    bad = [v for v in range(s.num_vertices) if s.role(v) is None]
    return Verdict(FAIL, f"vertices {bad} are neither collecting nor distributing") if bad else Verdict(PASS)


def check_distinct_letters(s: Scheme) -> Verdict:
    for v in range(s.num_vertices):
        if s.is_distributing(v):
            fronts = [s.edge(n).front for n in s.out_edges(v)]
            firsts = [f[:1] for f in fronts]
            if "" in firsts or len(set(firsts)) != len(firsts):
                return Verdict(FAIL, f"distributing vertex {v}: front words {fronts}")
        if s.is_collecting(v):
            backs = [s.edge(n).back for n in s.in_edges(v)]
            lasts = [b[-1:] for b in backs]
            if "" in lasts or len(set(lasts)) != len(lasts):
                return Verdict(FAIL, f"collecting vertex {v}: back words {backs}")
    return Verdict(PASS)


def validate_scheme(s: Scheme, oracle: FactorOracle, L: int = 6, M: int = 20) -> SchemeReport:
    """Check the seven scheme properties, exhaustively within the bounds.

    Symmetric paths are enumerated up to ``L`` edges and factors up to ``M``
    letters.  Coverage of factors is checked over paths of any length.
    """
    rep = SchemeReport(L, M)
    v = rep.verdicts
    v["degrees"] = check_degrees(s)
    sc = _strongly_connected(s)
    v["1"] = Verdict(PASS) if sc and len(s.edges) > 1 else Verdict(
        FAIL, "not strongly connected" if not sc else "a single edge")
    v["2"] = check_distinct_letters(s)
    if v["degrees"].status == FAIL or not sc:
        for key in "34567":
            v[key] = Verdict(UNVERIFIED, "skipped: graph structure invalid")
        return rep
    paths = list(symmetric_paths(s, L))
    v["3"] = _check_front_equals_back(s, paths)
    v["4"] = _check_containment(s, paths)
    v["5"] = _check_edge_words(s, oracle)
    v["6"] = _check_coverage(s, oracle, M)
    v["7"] = _check_markers(s, oracle, paths, M)
    return rep


def _check_front_equals_back(s, paths) -> Verdict:
    for p, f in paths:
        b = path_words(s, p)[1]
        if f != b:
            return Verdict(FAIL, f"path {p}: F={f!r} B={b!r}")
    return Verdict(PASS, f"{len(paths)} symmetric paths")


def _check_containment(s, paths) -> Verdict:
    for p1, f1 in paths:
        for p2, f2 in paths:
            if len(f1) > len(f2):
                continue
            occ = _count(f1, f2)
            if occ and _count(p1, p2) < occ:
                return Verdict(FAIL, f"F{p1} occurs {occ} times in F{p2} but the path only {_count(p1, p2)}")
    return Verdict(PASS, f"{len(paths) ** 2} pairs")


def _check_edge_words(s, oracle) -> Verdict:
    try:
        for e in s.edges:
            for w in (e.front, e.back):
                if not oracle.contains(w):
                    return Verdict(FAIL, f"edge {e.number}: {w!r} is not a factor")
    except HorizonExceeded as exc:
        return Verdict(UNVERIFIED, str(exc))
    return Verdict(PASS)


def _check_coverage(s, oracle, M) -> Verdict:
    # Windows of length <= M in F-words only depend on the current vertex and
    # the last M-1 letters of F, so a search over those states sees every
    # symmetric path, not just short ones.
    try:
        target = set().union(*(oracle.factors(n) for n in range(1, M + 1)))
    except HorizonExceeded as exc:
        return Verdict(UNVERIFIED, str(exc))
    seen: set[str] = set()

    def record(f):
        # long words are read in chunks so the search stops once all is seen
        step = 4096
        for lo in range(0, len(f), step):
            if seen >= target:
                return
            piece = f[lo:lo + step + M - 1]
            for n in range(1, min(M, len(piece)) + 1):
                seen.update(piece[i:i + n] for i in range(len(piece) - n + 1))

    todo = []
    for v in range(s.num_vertices):
        if s.is_collecting(v):
            for n in s.out_edges(v):
                f = s.edge(n).front
                record(f)
                todo.append((s.edge(n).head, f[-(M - 1):] if M > 1 else ""))
    states = set(todo)
    while todo:
        x, tail = todo.pop()
        for n in s.out_edges(x):
            f = tail
            if s.is_distributing(x):
                f = tail + s.edge(n).front
                record(f)
            state = (s.edge(n).head, f[-(M - 1):] if M > 1 else "")
            if state not in states:
                states.add(state)
                todo.append(state)
    missing = target - seen
    if missing:
        short = min(missing, key=lambda u: (len(u), u))
        return Verdict(FAIL, f"factor {short!r} lies on no symmetric path")
    return Verdict(PASS, f"factors up to length {M}")


def _check_markers(s, oracle, paths, M) -> Verdict:
    try:
        good = [(p, f) for p, f in paths if oracle.contains(f)]
        factors = [sorted(oracle.factors(n)) for n in range(1, M + 1)]
    except HorizonExceeded as exc:
        return Verdict(UNVERIFIED, str(exc))
    missing = []
    for e in s.edges:
        found = False
        for layer in factors:
            for u in layer:
                hits = [p for p, f in good if u in f]
                if hits and all(e.number in p for p in hits):
                    found = True
                    break
            if found:
                break
        if not found:
            missing.append(e.number)
    if missing:
        return Verdict(UNVERIFIED, f"no marker word of length <= {M} for edges {missing}")
    return Verdict(PASS)
