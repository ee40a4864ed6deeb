from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hgraphon import bundled_graphon
from hgraphon.exactlp import LinearProgram, Optimal, RatMatrix, affine_rank, solve_lp
from hgraphon.polytope import (
    PointKind,
    Verdict,
    analyze,
    caratheodory_membership,
    classify_point,
    cycle_laplacian,
    cycle_laplacian_decomposition,
    directional_margins,
    edge_polytope,
    extremal_generators,
    is_amatrix,
    max_margin,
    membership,
    polytope_rank,
    rowsum_membership,
    verdict,
)
from hgraphon.skeleton import SkeletonGraph, connected_components, has_odd_cycle

from _helpers import random_convex_point, random_simplex_point, random_skeleton

H = F(1, 2)
Q = F(1, 4)
C4 = SkeletonGraph(4, (), ((0, 1), (1, 2), (2, 3), (0, 3)))
C4_LOOP2 = SkeletonGraph(4, (1,), C4.plain_edges)
TRIANGLE = SkeletonGraph(3, (), ((0, 1), (1, 2), (0, 2)))


def leave_one_out_extremal(P):
    """Generator j is a vertex iff it is not a convex combination of the others."""
    out = []
    for j, g in enumerate(P.generators):
        others = [h for k, h in enumerate(P.generators) if k != j and h != g]
        if not others:
            out.append(j)
            continue
        rows = [[h[i] for h in others] for i in range(P.q)] + [[1] * len(others)]
        res = solve_lp(LinearProgram.build([0] * len(others), rows, list(g) + [1]))
        if not isinstance(res, Optimal):
            out.append(j)
    return tuple(out)


def test_edge_polytope_generators():
    P = edge_polytope(SkeletonGraph(3, (0,), ((0, 1), (1, 2))))
    assert P.generators == ((1, 0, 0), (H, H, 0), (0, H, H))
    assert len(P) == 3


def test_extremal_examples():
    assert extremal_generators(edge_polytope(C4)) == (0, 1, 2, 3)
    # loops on both ends make the plain edge their midpoint
    P = edge_polytope(SkeletonGraph(2, (0, 1), ((0, 1),)))
    assert extremal_generators(P) == (0, 1)
    assert leave_one_out_extremal(P) == (0, 1)
    T = edge_polytope(SkeletonGraph(3, (0,), TRIANGLE.plain_edges))
    assert extremal_generators(T) == leave_one_out_extremal(T) == (0, 1, 2, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_extremal_matches_leave_one_out(q, seed):
    S = random_skeleton(np.random.default_rng(seed), q, p_loop=0.5)
    P = edge_polytope(S)
    assert extremal_generators(P) == leave_one_out_extremal(P)


def test_rank_examples():
    assert polytope_rank(C4) == 2
    assert polytope_rank(TRIANGLE) == 2
    assert polytope_rank(C4_LOOP2) == 3
    assert polytope_rank(SkeletonGraph(1, (0,), ())) == 0
    assert polytope_rank(SkeletonGraph(2, (), ((0, 1),))) == 0
    with pytest.raises(ValueError):
        polytope_rank(SkeletonGraph(2, (), ()))


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_rank_law(q, seed):
    S = random_skeleton(np.random.default_rng(seed), q, connected=True)
    assert affine_rank(edge_polytope(S).generators) == polytope_rank(S)


def test_membership_examples():
    lam = membership(edge_polytope(C4), (Q,) * 4)
    assert lam is not None and sum(lam) == 1
    P = edge_polytope(C4)
    assert all(sum(l * g[i] for l, g in zip(lam, P.generators)) == Q for i in range(4))
    assert membership(edge_polytope(C4_LOOP2), (F(3, 5), F(1, 10), F(1, 10), F(1, 5))) is None
    P2 = edge_polytope(C4_LOOP2)
    for j, g in enumerate(P2.generators):
        res = max_margin(P2, g)
        assert res is not None and res[0] == 0
        # every generator here is a vertex, so its only representation is itself
        assert membership(P2, g) == tuple(F(int(k == j)) for k in range(len(P2)))
    with pytest.raises(ValueError):
        membership(P, (1, 0, 0))


def test_membership_of_c4_uniform_is_unique():
    # C4 is bipartite and 2-dimensional with 4 vertices; max margin spreads evenly
    eps, lam = max_margin(edge_polytope(C4), (Q,) * 4)
    assert eps == Q and lam == (Q,) * 4


def test_classify_examples():
    pc = classify_point(edge_polytope(C4_LOOP2), (Q,) * 4)
    assert pc.kind is PointKind.BOUNDARY and pc.margin == 0
    S_d = SkeletonGraph(4, (0, 1), C4.plain_edges)
    pc = classify_point(edge_polytope(S_d), (Q,) * 4)
    assert pc.kind is PointKind.INTERIOR and pc.margin > 0
    pc = classify_point(edge_polytope(TRIANGLE), (H, H, 0))
    assert pc.kind is PointKind.BOUNDARY
    pc = classify_point(edge_polytope(TRIANGLE), (F(1, 3),) * 3)
    assert pc.kind is PointKind.INTERIOR and pc.margin == F(1, 3)
    assert classify_point(edge_polytope(TRIANGLE), (1, 0, 0)).kind is PointKind.OUTSIDE


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.booleans())
def test_margin_agrees_with_directional_check(q, seed, sparse):
    rng = np.random.default_rng(seed)
    S = random_skeleton(rng, q, connected=True, p_loop=0.4)
    P = edge_polytope(S)
    if not P.generators:
        return
    x = random_convex_point(rng, P.generators, sparse=sparse)
    pc = classify_point(P, x)
    dm = directional_margins(P, x)
    assert pc.inside and dm is not None
    assert (pc.kind is PointKind.INTERIOR) == all(m > 0 for m in dm)


def test_rowsum_examples():
    A = rowsum_membership(C4, (Q,) * 4)
    assert A is not None and is_amatrix(A, C4)
    assert A.row_sums() == (Q,) * 4
    assert rowsum_membership(C4_LOOP2, (F(3, 5), F(1, 10), F(1, 10), F(1, 5))) is None
    A = rowsum_membership(SkeletonGraph(1, (0,), ()), (1,))
    assert A.tolist() == [[1]]
    assert rowsum_membership(SkeletonGraph(2, (), ()), (H, H)) is None


def test_is_amatrix():
    assert is_amatrix(RatMatrix.from_rows([[H, 0], [0, H]]))
    assert not is_amatrix(RatMatrix.from_rows([[0, H], [0, H]]))
    assert not is_amatrix(RatMatrix.from_rows([[H, 0], [0, Q]]))
    assert not is_amatrix(RatMatrix.from_rows([[H, 0], [0, H]]), SkeletonGraph(2, (0,), ((0, 1),)))


def test_caratheodory_examples():
    assert caratheodory_membership(edge_polytope(C4), (Q,) * 4)
    assert not caratheodory_membership(edge_polytope(C4_LOOP2), (F(3, 5), F(1, 10), F(1, 10), F(1, 5)))
    assert caratheodory_membership(edge_polytope(TRIANGLE), (H, H, 0))
    assert not caratheodory_membership(edge_polytope(TRIANGLE), (1, 0, 0))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_three_membership_oracles_agree(q, seed):
    rng = np.random.default_rng(seed)
    S = random_skeleton(rng, q)
    x = random_simplex_point(rng, q, denom=6)
    a = membership(edge_polytope(S), x) is not None
    b = rowsum_membership(S, x) is not None
    c = caratheodory_membership(edge_polytope(S), x)
    assert a == b == c


# ------------------------------------------------------ cycle decompositions


def test_decomposition_diagonal():
    D = cycle_laplacian_decomposition(RatMatrix.from_rows([[H, 0], [0, H]]))
    assert D.cycles == () and D.loops == (((0,), H), ((1,), H))


def test_decomposition_two_cycle():
    A = RatMatrix.from_rows([[0, H], [H, 0]])
    D = cycle_laplacian_decomposition(A)
    assert D.records == (((0, 1), H),)
    assert D.reconstruct() == A
    assert D.laplacian_sum() == RatMatrix.from_rows([[-H, H], [H, -H]])


def test_decomposition_triangle_circulant():
    t = F(1, 3)
    A = RatMatrix.from_rows([[0, t, 0], [0, 0, t], [t, 0, 0]])
    D = cycle_laplacian_decomposition(A)
    assert D.records == (((0, 1, 2), t),)
    assert D.reconstruct() == A


def test_cycle_laplacian():
    L = cycle_laplacian((0, 2), 3)
    assert L.tolist() == [[-1, 0, 1], [0, 0, 0], [1, 0, -1]]
    assert all(s == 0 for s in L.row_sums()) and all(s == 0 for s in L.col_sums())
    with pytest.raises(ValueError):
        cycle_laplacian((1,), 3)
    with pytest.raises(ValueError):
        cycle_laplacian_decomposition(RatMatrix.from_rows([[0, 1], [0, 0]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_decomposition_reconstructs(q, seed):
    rng = np.random.default_rng(seed)
    S = random_skeleton(rng, q, connected=True, p_loop=0.5)
    P = edge_polytope(S)
    if not P.generators:
        return
    x = random_convex_point(rng, P.generators)
    A = rowsum_membership(S, x)
    assert A is not None and is_amatrix(A, S)
    D = cycle_laplacian_decomposition(A)
    assert D.reconstruct() == A
    assert all(w > 0 for _, w in D.records)


# -------------------------------------------------------------- verdicts


@pytest.mark.parametrize(
    "name, expected",
    [
        ("checkerboard", Verdict.FAILS_NO_ODD_CYCLE),
        ("exp_a", Verdict.FAILS_NO_ODD_CYCLE),
        ("exp_b", Verdict.FAILS_MEMBERSHIP),
        ("exp_c", Verdict.BOUNDARY_INDETERMINATE),
        ("exp_d", Verdict.SATISFIES_SUFFICIENCY),
    ],
)
def test_bundled_verdicts(name, expected):
    assert verdict(bundled_graphon(name)) is expected
    assert expected.exit_code == expected.value


def test_analysis_certificates():
    a = analyze(bundled_graphon("exp_d"))
    assert a.odd_cycle and a.rank == 3 and a.affine_dim == 3
    assert a.point.witness is not None and a.point.margin == F(1, 8)
    a = analyze(bundled_graphon("checkerboard"))
    assert a.coloring is not None and not a.odd_cycle


def test_disconnected_analysis_warns():
    from hgraphon.graphon import StepGraphon

    W = StepGraphon.from_lists([0, H, 1], [[1, 0], [0, 1]])
    a = analyze(W)
    assert a.rank is None and a.warnings
    # two looped components: x* = (1/2,1/2) is the midpoint of two loop vertices
    assert a.verdict is Verdict.SATISFIES_SUFFICIENCY


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_disconnected_membership_splits_by_component(q, seed):
    # x lies in X(S) iff every component carrying mass holds its rescaled share
    rng = np.random.default_rng(seed)
    S = random_skeleton(rng, q, p_edge=0.25)
    x = random_simplex_point(rng, q, denom=6)
    whole = membership(edge_polytope(S), x) is not None
    parts = True
    for comp in connected_components(S):
        m = sum(x[i] for i in comp)
        if m == 0:
            continue
        sub = S.subgraph(comp)
        parts &= membership(edge_polytope(sub), tuple(x[i] / m for i in comp)) is not None
    assert whole == parts


def test_rowsum_spec_examples():
    A = rowsum_membership(SkeletonGraph(2, (0, 1), ((0, 1),)), (H, H))
    assert A is not None and A.row_sums() == (H, H)
    t = F(1, 3)
    A = rowsum_membership(TRIANGLE, (t, t, t))
    assert A is not None and is_amatrix(A, TRIANGLE) and A.row_sums() == (t, t, t)


def test_decomposition_symmetric_circulant():
    s = F(1, 6)
    A = RatMatrix.from_rows([[0, s, s], [s, 0, s], [s, s, 0]])
    D = cycle_laplacian_decomposition(A)
    assert D.reconstruct() == A
    # the Laplacian part equals A'_1 = A_off - Diag(A_off 1)
    expected = RatMatrix.from_rows([[-2 * s, s, s], [s, -2 * s, s], [s, s, -2 * s]])
    assert D.laplacian_sum() == expected
    assert len(D.cycles) <= 6
