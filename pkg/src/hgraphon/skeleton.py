"""Skeleton graph of a step-graphon and its incidence matrix."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactlp import RatMatrix
from .graphon import StepGraphon

__all__ = [
    "SkeletonGraph",
    "skeleton_of",
    "incidence_matrix",
    "has_odd_cycle",
    "two_coloring",
    "connected_components",
    "format_adjacency",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SkeletonGraph:
    """Undirected graph on nodes ``0..q-1`` with optional self-loops.

    ``edges`` is the canonical order: loops ``(i, i)`` by node, then plain edges
    ``(i, j)``, ``i < j``, lexicographically.
    """

    q: int
    loops: tuple[int, ...]
    plain_edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        loops = tuple(sorted(set(self.loops)))
        plain = tuple(sorted({(min(a, b), max(a, b)) for a, b in self.plain_edges}))
        for i in loops:
            if not 0 <= i < self.q:
                raise ValueError(f"loop node {i} out of range")
        for a, b in plain:
            if a == b:
                raise ValueError("plain edges must join distinct nodes")
            if not (0 <= a < self.q and 0 <= b < self.q):
                raise ValueError(f"edge ({a},{b}) out of range")
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "plain_edges", plain)

    @classmethod
    def from_edges(cls, q: int, edges: Iterable[tuple[int, int]]) -> "SkeletonGraph":
        loops, plain = [], []
        for a, b in edges:
            if a == b:
                loops.append(a)
            else:
                plain.append((a, b))
        return cls(q, tuple(loops), tuple(plain))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, i) for i in self.loops) + self.plain_edges

    @property
    def loop_indices(self) -> tuple[int, ...]:
        return tuple(range(len(self.loops)))

    @property
    def plain_indices(self) -> tuple[int, ...]:
        k = len(self.loops)
        return tuple(range(k, k + len(self.plain_edges)))

    @property
    def unsupported_indices(self) -> tuple[int, ...]:
        """Plain edges that do not join two looped nodes."""
        looped = set(self.loops)
        k = len(self.loops)
        return tuple(
            k + idx
            for idx, (a, b) in enumerate(self.plain_edges)
            if not (a in looped and b in looped)
        )

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.q)]
        for a, b in self.plain_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def subgraph(self, nodes: Iterable[int]) -> "SkeletonGraph":
        """Induced subgraph, relabelled in increasing node order."""
        nodes = sorted(nodes)
        pos = {u: k for k, u in enumerate(nodes)}
        return SkeletonGraph(
            len(nodes),
            tuple(pos[i] for i in self.loops if i in pos),
            tuple((pos[a], pos[b]) for a, b in self.plain_edges if a in pos and b in pos),
        )


def skeleton_of(W: StepGraphon) -> SkeletonGraph:
    q = W.q
    loops = tuple(i for i in range(q) if W.values[i, i] > 0)
    plain = tuple((i, j) for i in range(q) for j in range(i + 1, q) if W.values[i, j] > 0)
    return SkeletonGraph(q, loops, plain)


def incidence_matrix(S: SkeletonGraph) -> RatMatrix:
    cols = []
    for a, b in S.edges:
        col = [Fraction(0)] * S.q
        if a == b:
            col[a] = Fraction(1)
        else:
            col[a] = col[b] = HALF
        cols.append(col)
    rows = [[c[i] for c in cols] for i in range(S.q)]
    return RatMatrix.from_rows(rows, len(cols))


def two_coloring(S: SkeletonGraph) -> list[int] | None:
    """Proper 2-coloring of the plain edges (loops ignored), or None."""
    adj = S.neighbors()
    color = [-1] * S.q
    for start in range(S.q):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def has_odd_cycle(S: SkeletonGraph) -> bool:
    # a loop is a closed walk of length one
    return bool(S.loops) or two_coloring(S) is None


def connected_components(S: SkeletonGraph) -> list[list[int]]:
    adj = S.neighbors()
    seen = [False] * S.q
    comps = []
    for start in range(S.q):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def format_adjacency(S: SkeletonGraph) -> str:
    """Stable DOT-like listing with 1-based node names."""
    lines = ["graph S {"]
    for i in range(S.q):
        lines.append(f"  u{i + 1};")
    for a, b in S.edges:
        lines.append(f"  u{a + 1} -- u{b + 1};")
    lines.append("}")
    return "\n".join(lines)
