"""Exact rational arithmetic, linear algebra and linear programming.

Every polytope computation in the package runs on :class:`fractions.Fraction`
so that membership and boundary decisions are certified, never rounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Rational",
    "parse_rational",
    "format_rational",
    "RatMatrix",
    "LinearProgram",
    "Infeasible",
    "Unbounded",
    "Optimal",
    "LPOutcome",
    "solve_lp",
    "matrix_rank",
    "affine_rank",
    "solve_unique",
]

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"0.25"``, ``"-1/4"`` or ``"1e-3"`` exactly."""
    text = text.strip()
    if not text:
        raise ValueError("empty number")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(r: Fraction) -> str:
    return str(Fraction(r))


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return parse_rational(v)
    return Fraction(v)


@dataclass(frozen=True)
class RatMatrix:
    """Dense row-major matrix of Fractions."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(_as_fraction(v) for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(self.row(i), ZERO) for i in range(self.rows))

    def col_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(self.col(j), ZERO) for j in range(self.cols))

    def total(self) -> Fraction:
        return sum(self.entries, ZERO)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def matvec(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch in matvec")
        return tuple(
            sum((a * b for a, b in zip(self.row(i), v) if a), ZERO)
            for i in range(self.rows)
        )

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, self.row(i))) for i in range(self.rows))


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``objective . x`` subject to ``eq_lhs x = eq_rhs`` and ``x >= lower_bounds``."""

    objective: tuple[Fraction, ...]
    eq_lhs: RatMatrix
    eq_rhs: tuple[Fraction, ...]
    lower_bounds: tuple[Fraction, ...]

    def __post_init__(self):
        nvar = len(self.objective)
        if self.eq_lhs.cols != nvar:
            raise ValueError(
                f"constraint matrix has {self.eq_lhs.cols} columns for {nvar} variables"
            )
        if self.eq_lhs.rows != len(self.eq_rhs):
            raise ValueError("constraint matrix rows and right-hand side disagree")
        if len(self.lower_bounds) != nvar:
            raise ValueError("one lower bound per variable is required")

    @classmethod
    def build(cls, objective, eq_lhs, eq_rhs, lower_bounds=None) -> "LinearProgram":
        objective = tuple(_as_fraction(v) for v in objective)
        if not isinstance(eq_lhs, RatMatrix):
            eq_lhs = RatMatrix.from_rows(eq_lhs, len(objective))
        if lower_bounds is None:
            lower_bounds = (ZERO,) * len(objective)
        return cls(
            objective,
            eq_lhs,
            tuple(_as_fraction(v) for v in eq_rhs),
            tuple(_as_fraction(v) for v in lower_bounds),
        )

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != len(self.objective):
            return False
        if any(xi < lo for xi, lo in zip(x, self.lower_bounds)):
            return False
        return self.eq_lhs.matvec(x) == self.eq_rhs


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    pass


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    solution: tuple[Fraction, ...]


LPOutcome = Union[Infeasible, Unbounded, Optimal]


class _Tableau:
    """Dense simplex tableau; the last column holds the right-hand side."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.t = rows
        self.basis = basis
        self.obj: list[Fraction] = []

    def set_objective(self, c: Sequence[Fraction]) -> None:
        # reduced costs d_j = c_j - c_B . column_j; last entry holds -(current value)
        width = len(self.t[0])
        obj = list(c) + [ZERO] * (width - len(c))
        for r, b in enumerate(self.basis):
            cb = obj[b]
            if cb:
                row = self.t[r]
                obj = [o - cb * a for o, a in zip(obj, row)]
        self.obj = obj

    def pivot(self, r: int, j: int) -> None:
        row = self.t[r]
        p = row[j]
        if p != 1:
            row = [a / p for a in row]
            self.t[r] = row
        nz = [(k, a) for k, a in enumerate(row) if a]
        for rr, other in enumerate(self.t):
            f = other[j]
            if rr != r and f:
                for k, a in nz:
                    other[k] -= f * a
        f = self.obj[j]
        if f:
            for k, a in nz:
                self.obj[k] -= f * a
        self.basis[r] = j

    def run(self, allowed: int) -> bool:
        """Bland's rule iterations over columns ``< allowed``; False if unbounded."""
        while True:
            enter = next((j for j in range(allowed) if self.obj[j] > 0), None)
            if enter is None:
                return True
            best = None
            for r, row in enumerate(self.t):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], enter)

    def value(self) -> Fraction:
        return -self.obj[-1]

    def primal(self, nvar: int) -> list[Fraction]:
        x = [ZERO] * nvar
        for r, b in enumerate(self.basis):
            if b < nvar:
                x[b] = self.t[r][-1]
        return x


def solve_lp(lp: LinearProgram) -> LPOutcome:
    """Two-phase primal simplex in exact arithmetic with Bland's anti-cycling rule."""
    n = len(lp.objective)
    m = lp.eq_lhs.rows
    lo = lp.lower_bounds
    # shift x = lo + y so that y >= 0
    rhs = [b - sum((a * l for a, l in zip(lp.eq_lhs.row(i), lo) if a and l), ZERO)
           for i, b in enumerate(lp.eq_rhs)]
    rows = []
    for i in range(m):
        coeffs = list(lp.eq_lhs.row(i))
        b = rhs[i]
        if b < 0:
            coeffs = [-a for a in coeffs]
            b = -b
        art = [ZERO] * m
        art[i] = ONE
        rows.append(coeffs + art + [b])
    offset = sum((c * l for c, l in zip(lp.objective, lo)), ZERO)

    if m == 0:
        if any(c > 0 for c in lp.objective):
            return Unbounded()
        return Optimal(offset, tuple(lo))

    tab = _Tableau(rows, list(range(n, n + m)))
    tab.set_objective([ZERO] * n + [-ONE] * m)
    tab.run(n + m)
    if tab.value() < 0:
        return Infeasible()

    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tab.t):
        if tab.basis[r] >= n:
            j = next((k for k in range(n) if tab.t[r][k]), None)
            if j is None:
                del tab.t[r]
                del tab.basis[r]
                continue
            tab.pivot(r, j)
        r += 1
    tab.t = [row[:n] + row[-1:] for row in tab.t]
    if not tab.t:
        if any(c > 0 for c in lp.objective):
            return Unbounded()
        return Optimal(offset, tuple(lo))

    tab.set_objective(lp.objective)
    if not tab.run(n):
        return Unbounded()
    y = tab.primal(n)
    x = tuple(yi + li for yi, li in zip(y, lo))
    return Optimal(tab.value() + offset, x)


def _row_echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [v / piv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    rows = [[_as_fraction(v) for v in r] for r in rows]
    if not rows:
        return 0
    return len(_row_echelon(rows)[1])


def affine_rank(vectors: Iterable[Sequence]) -> int:
    """Dimension of the affine hull of ``vectors``."""
    vs = [[_as_fraction(v) for v in vec] for vec in vectors]
    if not vs:
        raise ValueError("affine_rank needs at least one vector")
    dim = len(vs[0])
    if any(len(v) != dim for v in vs):
        raise ValueError("vectors have unequal dimensions")
    base = vs[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in vs[1:]]
    return matrix_rank(diffs) if diffs else 0


def solve_unique(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve ``sum_j c_j columns[j] = rhs`` when the columns are independent.

    Returns the coefficient tuple, or None if the columns are dependent or the
    system is inconsistent.
    """
    k = len(columns)
    m = len(rhs)
    aug = [[columns[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    red, pivots = _row_echelon(aug)
    if pivots != list(range(k)):
        # either a dependent column or the rhs column became a pivot
        return None
    if any(row[-1] for row in red[k:]):
        return None
    return tuple(red[j][-1] for j in range(k))
