"""Rauzy graphs G_k and the word/path dictionary."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import GraphIsCycle, NotAFactorPath
from .words import FactorOracle


@dataclass(frozen=True)
class RauzyGraph:
    """Vertices are the length-k factors, edges the length-(k+1) factors.

    An edge word ``w`` runs from ``w[:-1]`` to ``w[1:]``; no two edges share a
    word, so G_k is a simple digraph (loops allowed, e.g. ``aa`` at k=1).
    """

    k: int
    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_set(self) -> frozenset[str]:
        return frozenset(self.edges)

    @cached_property
    def _adjacency(self):
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e[:-1]].append(e)
            inc[e[1:]].append(e)
        return out, inc

    def out_edges(self, v: str) -> list[str]:
        return self._adjacency[0][v]

    def in_edges(self, v: str) -> list[str]:
        return self._adjacency[1][v]

    @staticmethod
    def tail(e: str) -> str:
        return e[:-1]

    @staticmethod
    def head(e: str) -> str:
        return e[1:]

    def is_distributing(self, v: str) -> bool:
        return len(self.out_edges(v)) > 1

    def is_collecting(self, v: str) -> bool:
        return len(self.in_edges(v)) > 1

    def is_special(self, v: str) -> bool:
        return self.is_distributing(v) or self.is_collecting(v)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name}_{self.k} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}" [label="{v}"];')
        for e in self.edges:
            lines.append(f'  "{e[:-1]}" -> "{e[1:]}" [label="{e[-1]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GraphPath:
    start: str
    edges: tuple[str, ...] = ()

    @property
    def end(self) -> str:
        return self.edges[-1][1:] if self.edges else self.start

    def __len__(self):
        return len(self.edges)


def build_rauzy_graph(oracle: FactorOracle, k: int) -> RauzyGraph:
    if k < 0:
        raise ValueError("order must be nonnegative")
    return RauzyGraph(k, tuple(sorted(oracle.factors(k))), tuple(sorted(oracle.factors(k + 1))))


def path_of_word(g: RauzyGraph, w: str) -> GraphPath:
    k = g.k
    if len(w) < k:
        raise NotAFactorPath(f"{w!r} is shorter than the order {k}")
    if w[:k] not in g.index:
        raise NotAFactorPath(f"{w[:k]!r} is not a vertex of G_{k}")
    edges = tuple(w[i:i + k + 1] for i in range(len(w) - k))
    for e in edges:
        if e not in g.edge_set:
            raise NotAFactorPath(f"{e!r} is not an edge of G_{k}")
    return GraphPath(w[:k], edges)


def word_of_path(g: RauzyGraph, p: GraphPath) -> str:
    prev = p.start
    out = [p.start]
    for e in p.edges:
        if e[:-1] != prev:
            raise NotAFactorPath(f"edge {e!r} does not leave {prev!r}")
        out.append(e[-1])
        prev = e[1:]
    return "".join(out)


def _reach(start: str, step) -> set[str]:
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for u in step(v):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def is_strongly_connected(g: RauzyGraph) -> bool:
    if not g.vertices:
        return False
    v0 = g.vertices[0]
    n = len(g.vertices)
    fwd = _reach(v0, lambda v: [e[1:] for e in g.out_edges(v)])
    if len(fwd) != n:
        return False
    return len(_reach(v0, lambda v: [e[:-1] for e in g.in_edges(v)])) == n


def is_cycle(g: RauzyGraph) -> bool:
    return is_strongly_connected(g) and len(g.edges) == len(g.vertices)


@dataclass(frozen=True)
class GraphReport:
    collecting: tuple[str, ...]
    distributing: tuple[str, ...]
    strongly_connected: bool
    cycle: bool

    @property
    def special(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.collecting) | set(self.distributing)))

    @property
    def bispecial(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.collecting) & set(self.distributing)))


def graph_report(g: RauzyGraph) -> GraphReport:
    return GraphReport(
        tuple(v for v in g.vertices if g.is_collecting(v)),
        tuple(v for v in g.vertices if g.is_distributing(v)),
        is_strongly_connected(g),
        is_cycle(g),
    )


def _only(edges, v):
    if len(edges) != 1:
        raise GraphIsCycle(f"vertex {v!r} is a dead end; the graph is not strongly connected")
    return edges[0]


def natural_extension(g: RauzyGraph, p: GraphPath, direction: str = "right") -> GraphPath:
    """Shortest path extending ``p`` to end at a distributing vertex (right)
    or to start at a collecting vertex (left)."""
    edges = list(p.edges)
    bound = len(g.edges) + 1
    if direction == "right":
        v = p.end
        for _ in range(bound):
            if g.is_distributing(v):
                return GraphPath(p.start, tuple(edges))
            e = _only(g.out_edges(v), v)
            edges.append(e)
            v = e[1:]
    elif direction == "left":
        v = p.start
        for _ in range(bound):
            if g.is_collecting(v):
                return GraphPath(v, tuple(edges))
            e = _only(g.in_edges(v), v)
            edges.insert(0, e)
            v = e[:-1]
    else:
        raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")
    raise GraphIsCycle(f"G_{g.k} has no special vertex on this path's orbit")


def front_word(g: RauzyGraph, p: GraphPath) -> str:
    """Front word of a path: its word, minus the first k letters when it starts at a distributing vertex."""
    w = word_of_path(g, p)
    return w[g.k:] if g.is_distributing(p.start) else w


def back_word(g: RauzyGraph, p: GraphPath) -> str:
    """Back word of a path: its word, minus the last k letters when it ends at a collecting vertex."""
    w = word_of_path(g, p)
    return w[:len(w) - g.k] if g.is_collecting(p.end) else w
