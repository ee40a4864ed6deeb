"""Edge polytope of a skeleton graph: membership, interior tests, row-sum
characterization, cycle-Laplacian peeling and the step-graphon verdict.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactlp import (
    LinearProgram,
    Optimal,
    RatMatrix,
    affine_rank,
    matrix_rank,
    solve_lp,
    solve_unique,
)
from .graphon import StepGraphon, concentration_vector
from .skeleton import (
    SkeletonGraph,
    connected_components,
    has_odd_cycle,
    incidence_matrix,
    skeleton_of,
    two_coloring,
)

__all__ = [
    "EdgePolytope",
    "edge_polytope",
    "extremal_generators",
    "polytope_rank",
    "membership",
    "max_margin",
    "PointKind",
    "PointClass",
    "classify_point",
    "directional_margins",
    "rowsum_membership",
    "is_amatrix",
    "caratheodory_membership",
    "CycleDecomposition",
    "cycle_laplacian",
    "cycle_laplacian_decomposition",
    "Verdict",
    "Analysis",
    "analyze",
    "verdict",
]

ZERO = Fraction(0)
ONE = Fraction(1)
CARATHEODORY_LIMIT = 20


@dataclass(frozen=True)
class EdgePolytope:
    q: int
    generators: tuple[tuple[Fraction, ...], ...]
    skeleton: SkeletonGraph

    def __len__(self):
        return len(self.generators)


def edge_polytope(S: SkeletonGraph) -> EdgePolytope:
    Z = incidence_matrix(S)
    return EdgePolytope(S.q, tuple(Z.col(j) for j in range(Z.cols)), S)


def extremal_generators(P: EdgePolytope) -> tuple[int, ...]:
    S = P.skeleton
    return tuple(sorted(S.loop_indices + S.unsupported_indices))


def polytope_rank(S: SkeletonGraph) -> int:
    """Affine dimension of the edge polytope of a connected skeleton.

    An edgeless single node gives -1, the dimension of the empty set.
    """
    if len(connected_components(S)) != 1:
        raise ValueError("polytope_rank needs a connected skeleton")
    return S.q - 1 if has_odd_cycle(S) else S.q - 2


def _check_point(P: EdgePolytope, x: Sequence) -> tuple[Fraction, ...]:
    x = tuple(Fraction(v) for v in x)
    if len(x) != P.q:
        raise ValueError(f"point has dimension {len(x)}, polytope lives in dimension {P.q}")
    return x


def _hull_rows(gens, x):
    # Z lambda = x together with sum(lambda) = 1
    q = len(x)
    rows = [[g[i] for g in gens] for i in range(q)]
    rows.append([ONE] * len(gens))
    return rows, list(x) + [ONE]


def membership(P: EdgePolytope, x: Sequence) -> tuple[Fraction, ...] | None:
    """Convex weights on the generators reproducing ``x``, or None if outside."""
    x = _check_point(P, x)
    if not P.generators:
        return None
    rows, rhs = _hull_rows(P.generators, x)
    out = solve_lp(LinearProgram.build([ZERO] * len(P), rows, rhs))
    return out.solution if isinstance(out, Optimal) else None


def max_margin(P: EdgePolytope, x: Sequence) -> tuple[Fraction, tuple[Fraction, ...]] | None:
    """Solve max eps s.t. x = Z lambda, sum lambda = 1, every lambda_j >= eps.

    Writes lambda = mu + eps with mu >= 0, eps >= 0. Returns ``(eps*, lambda)``
    or None when ``x`` is outside the polytope.
    """
    x = _check_point(P, x)
    gens = P.generators
    f = len(gens)
    if not f:
        return None
    rows, rhs = _hull_rows(gens, x)
    rows = [r + [sum(r, ZERO)] for r in rows]
    obj = [ZERO] * f + [ONE]
    out = solve_lp(LinearProgram.build(obj, rows, rhs))
    if not isinstance(out, Optimal):
        return None
    eps = out.value
    lam = tuple(m + eps for m in out.solution[:f])
    return eps, lam


class PointKind(enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


@dataclass(frozen=True)
class PointClass:
    """Position of a point relative to the (relative) interior of the polytope."""

    kind: PointKind
    witness: tuple[Fraction, ...] | None = None
    margin: Fraction | None = None

    @property
    def inside(self) -> bool:
        return self.kind is not PointKind.OUTSIDE


def classify_point(P: EdgePolytope, x: Sequence) -> PointClass:
    res = max_margin(P, x)
    if res is None:
        return PointClass(PointKind.OUTSIDE)
    eps, lam = res
    kind = PointKind.INTERIOR if eps > 0 else PointKind.BOUNDARY
    return PointClass(kind, lam, eps)


def _direction_basis(gens) -> list[tuple[Fraction, ...]]:
    base = gens[0]
    basis: list[tuple[Fraction, ...]] = []
    for g in gens[1:]:
        d = tuple(a - b for a, b in zip(g, base))
        if matrix_rank(basis + [d]) > len(basis):
            basis.append(d)
    return basis


def _max_step(gens, x, d) -> Fraction:
    # max t >= 0 with x + t d = Z lambda, sum lambda = 1, lambda >= 0
    rows, rhs = _hull_rows(gens, x)
    rows = [r + [-(d[i] if i < len(d) else ZERO)] for i, r in enumerate(rows)]
    obj = [ZERO] * len(gens) + [ONE]
    out = solve_lp(LinearProgram.build(obj, rows, rhs))
    if not isinstance(out, Optimal):
        raise ArithmeticError("directional LP did not reach an optimum")
    return out.value


def directional_margins(P: EdgePolytope, x: Sequence) -> list[Fraction] | None:
    """For each affine-hull basis direction d, the largest t with x +/- t d inside.

    Independent of :func:`max_margin`; all entries positive iff ``x`` lies in
    the relative interior. None if ``x`` is outside.
    """
    x = _check_point(P, x)
    if membership(P, x) is None:
        return None
    gens = list(P.generators)
    out = []
    for d in _direction_basis(gens):
        up = _max_step(gens, x, d)
        down = _max_step(gens, x, tuple(-v for v in d))
        out.append(min(up, down))
    return out


def _directed_entries(S: SkeletonGraph) -> list[tuple[int, int]]:
    entries = [(i, i) for i in S.loops]
    for a, b in S.plain_edges:
        entries += [(a, b), (b, a)]
    return entries


def rowsum_membership(S: SkeletonGraph, x: Sequence) -> RatMatrix | None:
    """A balanced matrix supported on S with total 1 and row sums ``x``, or None."""
    x = tuple(Fraction(v) for v in x)
    if len(x) != S.q:
        raise ValueError(f"point has dimension {len(x)}, skeleton has {S.q} nodes")
    entries = _directed_entries(S)
    if not entries:
        return None
    q = S.q
    rows = []
    for i in range(q):
        rows.append([ONE if a == i else ZERO for a, _ in entries])
    for i in range(q):
        rows.append([ONE if b == i else ZERO for _, b in entries])
    out = solve_lp(LinearProgram.build([ZERO] * len(entries), rows, list(x) + list(x)))
    if not isinstance(out, Optimal):
        return None
    A = [[ZERO] * q for _ in range(q)]
    for (a, b), v in zip(entries, out.solution):
        A[a][b] = v
    return RatMatrix.from_rows(A)


def is_amatrix(A: RatMatrix, S: SkeletonGraph | None = None) -> bool:
    """Nonnegative, balanced (row sums = column sums), total 1, supported on S."""
    if A.rows != A.cols:
        return False
    if any(v < 0 for v in A.entries):
        return False
    if A.row_sums() != A.col_sums() or A.total() != 1:
        return False
    if S is not None:
        if S.q != A.rows:
            return False
        allowed = set(_directed_entries(S))
        for i in range(A.rows):
            for j in range(A.cols):
                if A[i, j] and (i, j) not in allowed:
                    return False
    return True


def caratheodory_membership(P: EdgePolytope, x: Sequence) -> bool:
    """Brute force: does some affinely independent subset of generators hold x?"""
    if len(P) > CARATHEODORY_LIMIT:
        raise ValueError(f"caratheodory_membership is limited to {CARATHEODORY_LIMIT} generators")
    x = _check_point(P, x)
    support = {i for i, v in enumerate(x) if v}
    # a generator with weight > 0 cannot reach outside supp(x)
    cands = [
        g + (ONE,) for g in P.generators
        if all(i in support for i, v in enumerate(g) if v)
    ]
    target = x + (ONE,)
    for size in range(1, min(P.q + 1, len(cands)) + 1):
        for subset in combinations(cands, size):
            lam = solve_unique(subset, target)
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


@dataclass(frozen=True)
class CycleDecomposition:
    """Weighted directed cycles; a 1-tuple ``(i,)`` records the loop weight a_ii."""

    q: int
    records: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def cycles(self):
        return tuple(r for r in self.records if len(r[0]) > 1)

    @property
    def loops(self):
        return tuple(r for r in self.records if len(r[0]) == 1)

    def laplacian_sum(self) -> RatMatrix:
        """Sum of weight * L(C) over the cycles of length >= 2."""
        acc = [[ZERO] * self.q for _ in range(self.q)]
        for cyc, w in self.cycles:
            L = cycle_laplacian(cyc, self.q)
            for i in range(self.q):
                for j in range(self.q):
                    if L[i, j]:
                        acc[i][j] += w * L[i, j]
        return RatMatrix.from_rows(acc)

    def reconstruct(self) -> RatMatrix:
        """Rebuild A: cycle arcs off the diagonal, loop records on it."""
        acc = [[ZERO] * self.q for _ in range(self.q)]
        for cyc, w in self.records:
            if len(cyc) == 1:
                acc[cyc[0]][cyc[0]] += w
                continue
            for u, v in zip(cyc, cyc[1:] + cyc[:1]):
                acc[u][v] += w
        return RatMatrix.from_rows(acc)


def cycle_laplacian(cycle: Sequence[int], q: int) -> RatMatrix:
    """Laplacian of a directed cycle: +1 on its arcs, -1 on its diagonal."""
    if len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise ValueError("a cycle needs at least two distinct nodes")
    L = [[ZERO] * q for _ in range(q)]
    for u, v in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        L[u][v] += 1
        L[u][u] -= 1
    return RatMatrix.from_rows(L)


def cycle_laplacian_decomposition(A: RatMatrix) -> CycleDecomposition:
    """Peel directed cycles off the balanced off-diagonal part of A.

    The walk starts at the lowest node with outgoing weight and always follows
    the lowest-index successor, so the decomposition is deterministic.
    """
    if not is_amatrix(A):
        raise ValueError("input is not a nonnegative balanced matrix with total 1")
    q = A.rows
    records = [((i,), A[i, i]) for i in range(q) if A[i, i]]
    B = [[A[i, j] if i != j else ZERO for j in range(q)] for i in range(q)]
    while True:
        start = next((i for i in range(q) if any(B[i])), None)
        if start is None:
            break
        path = [start]
        where = {start: 0}
        u = start
        while True:
            # balance guarantees outgoing weight wherever weight came in
            v = next(j for j in range(q) if B[u][j])
            if v in where:
                cyc = tuple(path[where[v]:])
                break
            where[v] = len(path)
            path.append(v)
            u = v
        arcs = list(zip(cyc, cyc[1:] + cyc[:1]))
        t = min(B[a][b] for a, b in arcs)
        for a, b in arcs:
            B[a][b] -= t
        records.append((cyc, t))
    return CycleDecomposition(q, tuple(records))


class Verdict(enum.Enum):
    """Outcome of the odd-cycle / membership test; the value is the CLI exit code."""

    SATISFIES_SUFFICIENCY = 0
    FAILS_NO_ODD_CYCLE = 10
    FAILS_MEMBERSHIP = 11
    BOUNDARY_INDETERMINATE = 12

    @property
    def exit_code(self) -> int:
        return self.value

    @property
    def reason(self) -> str:
        return {
            Verdict.SATISFIES_SUFFICIENCY: "odd cycle present and x* in the interior of X(S): H-property expected",
            Verdict.FAILS_NO_ODD_CYCLE: "a component of S has no odd cycle: H-property fails",
            Verdict.FAILS_MEMBERSHIP: "x* lies outside X(S): H-property fails",
            Verdict.BOUNDARY_INDETERMINATE: "x* lies on the boundary of X(S): necessary conditions hold, outcome undecided",
        }[self]


@dataclass
class Analysis:
    """Every certificate behind a verdict."""

    graphon: StepGraphon
    x_star: tuple[Fraction, ...]
    skeleton: SkeletonGraph
    polytope: EdgePolytope
    components: list[list[int]]
    component_odd: list[bool]
    coloring: list[int] | None
    affine_dim: int | None
    rank: int | None
    point: PointClass
    verdict: Verdict
    warnings: list[str] = field(default_factory=list)

    @property
    def odd_cycle(self) -> bool:
        return all(self.component_odd)


def analyze(W: StepGraphon) -> Analysis:
    S = skeleton_of(W)
    x = concentration_vector(W)
    P = edge_polytope(S)
    comps = connected_components(S)
    comp_odd = [has_odd_cycle(S.subgraph(c)) for c in comps]
    warnings = []
    if len(comps) > 1:
        warnings.append(
            f"skeleton has {len(comps)} connected components; "
            "odd cycles are checked per component, membership on the whole polytope"
        )
    rank = polytope_rank(S) if len(comps) == 1 else None
    dim = affine_rank(P.generators) if P.generators else None
    point = classify_point(P, x)
    if not all(comp_odd):
        v = Verdict.FAILS_NO_ODD_CYCLE
    elif point.kind is PointKind.OUTSIDE:
        v = Verdict.FAILS_MEMBERSHIP
    elif point.kind is PointKind.INTERIOR:
        v = Verdict.SATISFIES_SUFFICIENCY
    else:
        v = Verdict.BOUNDARY_INDETERMINATE
    return Analysis(W, x, S, P, comps, comp_odd, two_coloring(S), dim, rank, point, v, warnings)


def verdict(W: StepGraphon) -> Verdict:
    return analyze(W).verdict
