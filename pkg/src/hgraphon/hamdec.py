"""Hamiltonian decompositions (spanning unions of disjoint directed cycles).

A cycle cover of a digraph without self-arcs is a fixed-point-free permutation
``i -> p(i)`` using only arcs, i.e. a perfect matching between out-copies and
in-copies of the nodes. Existence is decided with Hopcroft-Karp.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .exactlp import RatMatrix
from .graphon import SampledGraph

__all__ = [
    "Digraph",
    "HamDecomposition",
    "directed_version",
    "has_hamiltonian_decomposition",
    "extract_decomposition",
    "rho",
    "block_arc_counts",
    "brute_force_ham",
]

BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True, eq=False)
class Digraph:
    """Directed graph in CSR form; ``indices[indptr[i]:indptr[i+1]]`` are the heads of i, ascending."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Sequence[int]]) -> "Digraph":
        arcs = sorted({(int(a), int(b)) for a, b in arcs})
        for a, b in arcs:
            if a == b:
                raise ValueError(f"self-arc on node {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"arc ({a},{b}) out of range")
        indptr = np.zeros(n + 1, dtype=np.int64)
        for a, _ in arcs:
            indptr[a + 1] += 1
        np.cumsum(indptr, out=indptr)
        indices = np.array([b for _, b in arcs], dtype=np.int64)
        return cls(n, indptr, indices)

    def heads(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_arc(self, i: int, j: int) -> bool:
        h = self.heads(i)
        k = np.searchsorted(h, j)
        return bool(k < h.size and h[k] == j)

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, int(j)) for i in range(self.n) for j in self.heads(i)]

    @property
    def num_arcs(self) -> int:
        return int(self.indices.size)


@dataclass(frozen=True)
class HamDecomposition:
    """Vertex-disjoint directed cycles (node sequences of length >= 2) covering all nodes."""

    n: int
    cycles: tuple[tuple[int, ...], ...]

    def arcs(self) -> list[tuple[int, int]]:
        out = []
        for cyc in self.cycles:
            out.extend(zip(cyc, cyc[1:] + cyc[:1]))
        return out

    def is_valid_for(self, D: Digraph) -> bool:
        seen = [c for cyc in self.cycles for c in cyc]
        if sorted(seen) != list(range(self.n)) or D.n != self.n:
            return False
        if any(len(c) < 2 for c in self.cycles):
            return False
        return all(D.has_arc(a, b) for a, b in self.arcs())


def directed_version(G: SampledGraph) -> Digraph:
    """Replace every undirected edge by the two opposite arcs."""
    e = np.asarray(G.edges, dtype=np.int64).reshape(-1, 2)
    if e.size and np.any(e[:, 0] == e[:, 1]):
        raise ValueError("sampled graphs cannot contain self-loops")
    ei = np.minimum(e[:, 0], e[:, 1])
    ej = np.maximum(e[:, 0], e[:, 1])
    order = np.lexsort((ej, ei))
    indptr, indices = _kernels.csr_kernel(G.n, ei[order].copy(), ej[order].copy())
    return Digraph(G.n, indptr, indices)


def _matching(D: Digraph) -> tuple[np.ndarray, int]:
    return _kernels.hk_match(D.n, D.indptr, D.indices)


def has_hamiltonian_decomposition(D: Digraph) -> bool:
    return _matching(D)[1] == D.n


def extract_decomposition(D: Digraph) -> HamDecomposition | None:
    """Cycle cover read off the perfect matching as a permutation, or None."""
    match, size = _matching(D)
    if size != D.n:
        return None
    succ = match.tolist()
    seen = [False] * D.n
    cycles = []
    for start in range(D.n):
        if seen[start]:
            continue
        cyc = []
        u = start
        while not seen[u]:
            seen[u] = True
            cyc.append(u)
            u = succ[u]
        cycles.append(tuple(cyc))
    return HamDecomposition(D.n, tuple(cycles))


def block_arc_counts(H: HamDecomposition, blocks: Sequence[int], q: int) -> list[list[int]]:
    """``counts[i][j]``: arcs of H from a node of block i to a node of block j."""
    blocks = [int(b) for b in blocks]
    if len(blocks) < H.n:
        raise ValueError("block assignment does not cover every node")
    if any(b < 0 or b >= q for b in blocks):
        raise ValueError(f"block index out of range 0..{q - 1}")
    counts = [[0] * q for _ in range(q)]
    for a, b in H.arcs():
        counts[blocks[a]][blocks[b]] += 1
    return counts


def rho(H: HamDecomposition, blocks: Sequence[int], q: int) -> RatMatrix:
    counts = block_arc_counts(H, blocks, q)
    return RatMatrix.from_rows([[Fraction(c, H.n) for c in row] for row in counts])


def brute_force_ham(D: Digraph) -> bool:
    """Exhaustive search for a fixed-point-free permutation made of arcs."""
    if D.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute_force_ham is limited to n <= {BRUTE_FORCE_LIMIT}")
    n = D.n
    if n == 0:
        return True
    heads = [set(int(j) for j in D.heads(i)) for i in range(n)]
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if j != i and not used[j] and j in heads[i]:
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return extend(0)
