"""Step-graphons: exact model, file formats, sampling and empirical statistics.

Blocks and nodes are 0-based in the Python API; the text formats use 1-based
indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .exactlp import RatMatrix, format_rational, parse_rational

__all__ = [
    "ParseError",
    "StepGraphon",
    "SampledGraph",
    "parse_graphon",
    "format_graphon",
    "load_graphon",
    "value_at",
    "concentration_vector",
    "sample",
    "sample_coordinates",
    "empirical_concentration",
    "refine_partition",
    "parse_graph",
    "format_graph",
    "load_graph",
    "graph_from_edges",
]

_SCALE = 1 << _kernels.MANTISSA_BITS


class ParseError(ValueError):
    """Malformed input file; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, line: int, cause: str):
        self.line = line
        self.cause = cause
        super().__init__(f"line {line}: {cause}" if line else cause)


@dataclass(frozen=True)
class StepGraphon:
    """Symmetric function on [0,1]^2, constant on the rectangles of ``sigma``.

    ``values[i, j]`` is the value on [sigma[i], sigma[i+1]) x [sigma[j], sigma[j+1]).
    """

    sigma: tuple[Fraction, ...]
    values: RatMatrix

    def __post_init__(self):
        sigma = tuple(Fraction(s) for s in self.sigma)
        object.__setattr__(self, "sigma", sigma)
        q = len(sigma) - 1
        if q < 1:
            raise ValueError("sigma needs at least two breakpoints")
        if sigma[0] != 0 or sigma[-1] != 1:
            raise ValueError("sigma must start at 0 and end at 1")
        if any(a >= b for a, b in zip(sigma, sigma[1:])):
            raise ValueError("sigma must be strictly increasing")
        if self.values.rows != q or self.values.cols != q:
            raise ValueError(f"value matrix must be {q}x{q}")
        if any(v < 0 or v > 1 for v in self.values.entries):
            raise ValueError("value out of range [0, 1]")
        if not self.values.is_symmetric():
            raise ValueError("value matrix is not symmetric")

    @classmethod
    def from_lists(cls, sigma: Sequence, values: Sequence[Sequence]) -> "StepGraphon":
        sig = tuple(parse_rational(s) if isinstance(s, str) else Fraction(s) for s in sigma)
        return cls(sig, RatMatrix.from_rows(values))

    @property
    def q(self) -> int:
        return len(self.sigma) - 1

    def block_of(self, y: float | Fraction) -> int:
        y = Fraction(y)
        if y < 0 or y > 1:
            raise ValueError(f"coordinate {y} outside [0, 1]")
        if y == 1:
            return self.q - 1
        lo, hi = 0, self.q
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.sigma[mid] <= y:
                lo = mid
            else:
                hi = mid
        return lo

    def block_thresholds(self) -> np.ndarray:
        # m / 2**53 >= sigma_i  <=>  m >= ceil(sigma_i * 2**53)
        return np.array([_ceil_scaled(s) for s in self.sigma[1:-1]], dtype=np.int64)

    def probability_thresholds(self) -> np.ndarray:
        q = self.q
        out = np.empty((q, q), dtype=np.int64)
        for i in range(q):
            for j in range(q):
                out[i, j] = _ceil_scaled(self.values[i, j])
        return out


def _ceil_scaled(r: Fraction) -> int:
    return -((-r.numerator * _SCALE) // r.denominator)


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            yield lineno, toks


def _number(lineno: int, tok: str) -> Fraction:
    try:
        return parse_rational(tok)
    except ValueError:
        raise ParseError(lineno, f"not a number: {tok!r}") from None


def _integer(lineno: int, tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def _expect(lines, keyword: str):
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise ParseError(0, f"unexpected end of file, expected '{keyword}'") from None
    if toks[0] != keyword:
        raise ParseError(lineno, f"expected '{keyword}', found {toks[0]!r}")
    return lineno, toks[1:]


def parse_graphon(text: str) -> StepGraphon:
    """Read the ``hgraphon v1`` format; decimals become exact rationals."""
    lines = _tokens(text)
    lineno, rest = _expect(lines, "hgraphon")
    if rest != ["v1"]:
        raise ParseError(lineno, "unsupported header, expected 'hgraphon v1'")
    lineno, rest = _expect(lines, "q")
    if len(rest) != 1:
        raise ParseError(lineno, "expected 'q <integer>'")
    q = _integer(lineno, rest[0], "q")
    if q < 1:
        raise ParseError(lineno, "q must be positive")
    lineno, rest = _expect(lines, "sigma")
    if len(rest) != q + 1:
        raise ParseError(lineno, f"sigma needs {q + 1} values, got {len(rest)}")
    sigma = [_number(lineno, t) for t in rest]
    if sigma[0] != 0 or sigma[-1] != 1:
        raise ParseError(lineno, "sigma must start at 0 and end at 1")
    for a, b in zip(sigma, sigma[1:]):
        if a >= b:
            raise ParseError(lineno, "sigma is not strictly increasing")
    lineno, rest = _expect(lines, "W")
    if rest:
        raise ParseError(lineno, "unexpected tokens after 'W'")
    rows: list[list[Fraction]] = []
    row_lines: list[int] = []
    for _ in range(q):
        try:
            lineno, toks = next(lines)
        except StopIteration:
            raise ParseError(0, f"matrix has {len(rows)} rows, expected {q}") from None
        if len(toks) != q:
            raise ParseError(lineno, f"matrix row needs {q} values, got {len(toks)}")
        row = [_number(lineno, t) for t in toks]
        for v in row:
            if v < 0 or v > 1:
                raise ParseError(lineno, f"value out of range [0, 1]: {v}")
        rows.append(row)
        row_lines.append(lineno)
    extra = next(lines, None)
    if extra is not None:
        raise ParseError(extra[0], "trailing content after matrix")
    for i in range(q):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise ParseError(
                    row_lines[i], f"matrix is not symmetric at ({i + 1},{j + 1})"
                )
    return StepGraphon(tuple(sigma), RatMatrix.from_rows(rows))


def format_graphon(W: StepGraphon) -> str:
    out = ["hgraphon v1", f"q {W.q}", "sigma " + " ".join(map(format_rational, W.sigma)), "W"]
    for i in range(W.q):
        out.append(" ".join(map(format_rational, W.values.row(i))))
    return "\n".join(out) + "\n"


def load_graphon(path) -> StepGraphon:
    with open(path, encoding="utf-8") as fh:
        return parse_graphon(fh.read())


def value_at(W: StepGraphon, s: float | Fraction, t: float | Fraction) -> Fraction:
    """Block value at (s, t); half-open blocks, with 1 mapped to the last block."""
    return W.values[W.block_of(s), W.block_of(t)]


def concentration_vector(W: StepGraphon) -> tuple[Fraction, ...]:
    return tuple(b - a for a, b in zip(W.sigma, W.sigma[1:]))


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """A draw G_n: 0-based ``blocks`` and an ``(m, 2)`` array of edges ``i < j``, sorted."""

    n: int
    q: int
    blocks: np.ndarray
    edges: np.ndarray
    coords: np.ndarray | None = None
    has_blocks: bool = True
    _adj: list = field(default=None, repr=False, compare=False)

    def __eq__(self, other):
        if not isinstance(other, SampledGraph):
            return NotImplemented
        same_coords = (
            (self.coords is None and other.coords is None)
            or (self.coords is not None and other.coords is not None
                and np.array_equal(self.coords, other.coords))
        )
        return (
            self.n == other.n
            and self.q == other.q
            and np.array_equal(self.blocks, other.blocks)
            and np.array_equal(self.edges, other.edges)
            and same_coords
        )

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def adjacency(self) -> list[set[int]]:
        if self._adj is None:
            adj = [set() for _ in range(self.n)]
            for i, j in self.edges.tolist():
                adj[i].add(j)
                adj[j].add(i)
            object.__setattr__(self, "_adj", adj)
        return self._adj


def _edge_array(pairs: Iterable[Sequence[int]]) -> np.ndarray:
    arr = np.asarray(sorted(tuple(p) for p in pairs), dtype=np.int64)
    return arr.reshape(-1, 2)


def sample(W: StepGraphon, n: int, seed: int) -> SampledGraph:
    """Draw G_n ~ W; a pure function of ``(W, n, seed)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    mant, blocks, ei, ej = _kernels.sample_kernel(
        _kernels.as_seed(seed), n, W.block_thresholds(), W.probability_thresholds()
    )
    edges = np.stack([ei, ej], axis=1) if ei.size else np.zeros((0, 2), np.int64)
    coords = mant.astype(np.float64) / _SCALE
    return SampledGraph(n, W.q, blocks.astype(np.int64), edges.astype(np.int64), coords)


def sample_coordinates(W: StepGraphon, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates and blocks only, identical to those of ``sample(W, n, seed)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    mant, blocks = _kernels.coords_kernel(_kernels.as_seed(seed), n, W.block_thresholds())
    return mant.astype(np.float64) / _SCALE, blocks


def empirical_concentration(G: SampledGraph) -> tuple[Fraction, ...]:
    counts = np.bincount(G.blocks, minlength=G.q)
    return tuple(Fraction(int(c), G.n) for c in counts)


def refine_partition(W: StepGraphon, block: int, t) -> StepGraphon:
    """Split ``block`` at ``t``; the function W itself is unchanged."""
    t = Fraction(t)
    if not 0 <= block < W.q:
        raise ValueError(f"block {block} out of range")
    if not W.sigma[block] < t < W.sigma[block + 1]:
        raise ValueError("refinement point must lie strictly inside the block")
    sigma = W.sigma[: block + 1] + (t,) + W.sigma[block + 1:]
    src = list(range(W.q))
    src.insert(block + 1, block)
    rows = [[W.values[a, b] for b in src] for a in src]
    return StepGraphon(sigma, RatMatrix.from_rows(rows))


# ---------------------------------------------------------------- hgraph v1


def parse_graph(text: str) -> SampledGraph:
    """Read ``hgraph v1``. ``q`` and ``blocks`` may be omitted for a bare graph."""
    lines = _tokens(text)
    lineno, rest = _expect(lines, "hgraph")
    if rest != ["v1"]:
        raise ParseError(lineno, "unsupported header, expected 'hgraph v1'")
    lineno, rest = _expect(lines, "n")
    if len(rest) != 1:
        raise ParseError(lineno, "expected 'n <integer>'")
    n = _integer(lineno, rest[0], "n")
    if n < 1:
        raise ParseError(lineno, "n must be positive")
    q = None
    blocks = None
    coords = None
    m = None
    for lineno, toks in lines:
        key, rest = toks[0], toks[1:]
        if key == "q" and q is None and blocks is None:
            if len(rest) != 1:
                raise ParseError(lineno, "expected 'q <integer>'")
            q = _integer(lineno, rest[0], "q")
            if q < 1:
                raise ParseError(lineno, "q must be positive")
        elif key == "blocks" and blocks is None and q is not None:
            if len(rest) != n:
                raise ParseError(lineno, f"blocks needs {n} entries, got {len(rest)}")
            vals = [_integer(lineno, t, "block") for t in rest]
            if any(b < 1 or b > q for b in vals):
                raise ParseError(lineno, f"block index out of range 1..{q}")
            blocks = np.array(vals, dtype=np.int64) - 1
        elif key == "coords" and coords is None:
            if len(rest) != n:
                raise ParseError(lineno, f"coords needs {n} entries, got {len(rest)}")
            try:
                coords = np.array([float(t) for t in rest])
            except ValueError:
                raise ParseError(lineno, "coords must be decimals") from None
            if np.any(coords < 0) or np.any(coords > 1):
                raise ParseError(lineno, "coords must lie in [0, 1]")
        elif key == "edges":
            if len(rest) != 1:
                raise ParseError(lineno, "expected 'edges <count>'")
            m = _integer(lineno, rest[0], "edge count")
            if m < 0:
                raise ParseError(lineno, "edge count must be nonnegative")
            break
        else:
            raise ParseError(lineno, f"unexpected line starting with {key!r}")
    if m is None:
        raise ParseError(0, "missing 'edges' section")
    if q is not None and blocks is None:
        raise ParseError(0, "'q' given without 'blocks'")
    pairs = set()
    for _ in range(m):
        try:
            lineno, toks = next(lines)
        except StopIteration:
            raise ParseError(0, f"expected {m} edges, found {len(pairs)}") from None
        if len(toks) != 2:
            raise ParseError(lineno, "edge line must be 'i j'")
        i = _integer(lineno, toks[0], "node index")
        j = _integer(lineno, toks[1], "node index")
        if not 1 <= i < j <= n:
            raise ParseError(lineno, f"edge ({i},{j}) violates 1 <= i < j <= {n}")
        if (i - 1, j - 1) in pairs:
            raise ParseError(lineno, f"duplicate edge ({i},{j})")
        pairs.add((i - 1, j - 1))
    extra = next(lines, None)
    if extra is not None:
        raise ParseError(extra[0], "trailing content after edge list")
    has_blocks = blocks is not None
    if not has_blocks:
        q, blocks = 1, np.zeros(n, dtype=np.int64)
    return SampledGraph(n, q, blocks, _edge_array(pairs), coords, has_blocks)


def format_graph(G: SampledGraph, with_coords: bool = True) -> str:
    out = ["hgraph v1", f"n {G.n}", f"q {G.q}", "blocks " + " ".join(str(b + 1) for b in G.blocks.tolist())]
    if with_coords and G.coords is not None:
        out.append("coords " + " ".join(repr(float(c)) for c in G.coords.tolist()))
    out.append(f"edges {G.num_edges}")
    out.extend(f"{i + 1} {j + 1}" for i, j in G.edges.tolist())
    return "\n".join(out) + "\n"


def load_graph(path) -> SampledGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def graph_from_edges(n: int, edges: Iterable[Sequence[int]], blocks=None, q: int | None = None) -> SampledGraph:
    """Build a SampledGraph from 0-based edges (any orientation)."""
    pairs = set()
    for a, b in edges:
        if a == b:
            raise ValueError(f"self-loop on node {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"edge ({a},{b}) out of range")
        pairs.add((min(a, b), max(a, b)))
    if blocks is None:
        blocks = np.zeros(n, dtype=np.int64)
        q = 1
    blocks = np.asarray(blocks, dtype=np.int64)
    if q is None:
        q = int(blocks.max()) + 1 if n else 1
    return SampledGraph(n, q, blocks, _edge_array(pairs))
