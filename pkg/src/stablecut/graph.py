"""Immutable weighted-graph model: cuts, degrees, perturbations, contraction.

A Max-Cut instance is a symmetric nonnegative weight matrix with zero
diagonal.  All operations here are pure functions over immutable values, so
instances can be shared freely across threads.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError

__all__ = [
    "WeightedGraph",
    "Cut",
    "Perturbation",
    "DegreeStats",
    "cut_value",
    "weighted_degrees",
    "apply_perturbation",
    "merge_vertices",
    "load_graph",
    "save_graph",
    "loads_graph",
    "dumps_graph",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class WeightedGraph:
    """Dense symmetric nonnegative weight matrix with zero diagonal.

    The unweighted *support* is the graph of strictly positive entries;
    simple-degree statistics refer to it.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError(f"weight matrix must be square, got shape {w.shape}")
        if not np.array_equal(w, w.T):
            raise ValidationError("weight matrix must be symmetric")
        if np.any(w < 0):
            raise ValidationError("weights must be nonnegative")
        if np.any(np.diagonal(w) != 0):
            raise ValidationError("diagonal must be zero (no self-loops)")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def support(self) -> np.ndarray:
        """Boolean adjacency of strictly positive edges."""
        return self.weights > 0

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.support)))

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum() / 2.0)

    def edges(self) -> list[tuple[int, int, float]]:
        """Support edges as (u, v, w) with u < v, sorted."""
        iu, ju = np.nonzero(np.triu(self.support))
        return [(int(u), int(v), float(self.weights[u, v])) for u, v in zip(iu, ju)]

    def is_simple(self) -> bool:
        """True when every support edge has weight exactly 1."""
        w = self.weights
        return bool(np.all((w == 0) | (w == 1)))

    @classmethod
    def from_edges(
        cls, n: int, edges: list[tuple[int, int, float]] | None = None
    ) -> "WeightedGraph":
        w = np.zeros((n, n))
        for u, v, wt in edges or []:
            w[u, v] = wt
            w[v, u] = wt
        return cls(w)


@dataclass(frozen=True)
class Cut:
    """Partition of the vertices as a +/-1 sign vector.

    A cut and its negation are the same partition; the stored form is
    canonical with ``signs[0] == +1`` so equality is plain comparison.
    """

    signs: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.signs)
        if s.ndim != 1:
            raise ValidationError("cut signs must be a vector")
        if not np.all(np.abs(s) == 1):
            raise ValidationError("cut entries must be +1 or -1")
        s = s.astype(np.int8)
        if s.shape[0] > 0 and s[0] == -1:
            s = -s
        object.__setattr__(self, "signs", _frozen(s))

    @property
    def n(self) -> int:
        return self.signs.shape[0]

    def side(self, sign: int = 1) -> frozenset[int]:
        return frozenset(int(i) for i in np.nonzero(self.signs == sign)[0])

    def as_float(self) -> np.ndarray:
        return self.signs.astype(np.float64)

    def flipped(self, v: int) -> "Cut":
        s = self.signs.copy()
        s[v] = -s[v]
        return Cut(s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cut):
            return NotImplemented
        return np.array_equal(self.signs, other.signs)

    def __hash__(self) -> int:
        return hash(self.signs.tobytes())

    @classmethod
    def from_membership(cls, n: int, inside: set[int] | frozenset[int]) -> "Cut":
        s = np.full(n, -1, dtype=np.int8)
        s[list(inside)] = 1
        return cls(s)


@dataclass(frozen=True)
class Perturbation:
    """Symmetric multipliers in [1, gamma] applied to support edges."""

    factors: np.ndarray
    gamma: float

    def __post_init__(self) -> None:
        f = np.asarray(self.factors, dtype=np.float64)
        if self.gamma < 1:
            raise ValidationError(f"gamma must be >= 1, got {self.gamma}")
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValidationError("factor matrix must be square")
        if not np.array_equal(f, f.T):
            raise ValidationError("factor matrix must be symmetric")
        object.__setattr__(self, "factors", _frozen(f))

    @classmethod
    def uniform(cls, n: int, factor: float, gamma: float | None = None) -> "Perturbation":
        return cls(np.full((n, n), factor), gamma if gamma is not None else factor)


@dataclass(frozen=True)
class DegreeStats:
    """Weighted degrees plus support-degree extremes."""

    weighted: np.ndarray = field(repr=False)
    min_weighted: float
    max_simple: int
    min_simple: int


def cut_value(g: WeightedGraph, c: Cut) -> float:
    """Total weight of edges crossing the cut."""
    if c.n != g.n:
        raise DimensionError(f"cut has {c.n} entries for a {g.n}-vertex graph")
    s = c.as_float()
    return float((g.weights.sum() - s @ g.weights @ s) / 4.0)


def weighted_degrees(g: WeightedGraph) -> DegreeStats:
    """Row sums of the weight matrix and support-degree extremes."""
    w = g.weights.sum(axis=1)
    simple = g.support.sum(axis=1)
    if g.n == 0:
        return DegreeStats(_frozen(w), 0.0, 0, 0)
    return DegreeStats(
        weighted=_frozen(w),
        min_weighted=float(w.min()),
        max_simple=int(simple.max()),
        min_simple=int(simple.min()),
    )


def apply_perturbation(g: WeightedGraph, p: Perturbation) -> WeightedGraph:
    """Scale each support edge by its factor; factors off support are ignored."""
    if p.factors.shape[0] != g.n:
        raise DimensionError("perturbation size does not match graph")
    on = g.support
    f = p.factors[on]
    tol = 1e-12 * max(1.0, p.gamma)
    if f.size and (f.min() < 1.0 - tol or f.max() > p.gamma + tol):
        raise ValidationError(
            f"factors on support must lie in [1, {p.gamma}], "
            f"got range [{f.min()}, {f.max()}]"
        )
    new = g.weights.copy()
    new[on] = new[on] * np.clip(p.factors[on], 1.0, p.gamma)
    return WeightedGraph(new)


def merge_vertices(g: WeightedGraph, i: int, j: int) -> tuple[WeightedGraph, np.ndarray]:
    """Contract j into i, summing parallel edges and dropping the (i, j) edge.

    Returns the (n-1)-vertex graph and the old->new index map.  Any weight
    between i and j would become a self-loop, which never contributes to a
    cut, so it is discarded.
    """
    n = g.n
    if i == j:
        raise ValidationError("cannot merge a vertex with itself")
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionError(f"vertex out of range for n={n}")
    w = g.weights.copy()
    w[i, :] += w[j, :]
    w[:, i] += w[:, j]
    w[i, i] = 0.0
    keep = np.arange(n) != j
    w = w[np.ix_(keep, keep)]
    index_map = np.empty(n, dtype=np.int64)
    index_map[keep] = np.arange(n - 1)
    index_map[j] = index_map[i]
    return WeightedGraph(w), index_map


# --- graph file format -------------------------------------------------
#
# Text format, bit-exact under load/save round trips:
#   optional '#' comment lines, a header "n m", then m lines "u v w"
#   with 0 <= u < v < n and w a positive decimal.


def loads_graph(text: str) -> WeightedGraph:
    lines = [
        ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ValidationError("empty graph file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValidationError(f"bad header line: {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ValidationError(f"bad header line: {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise ValidationError("negative counts in header")
    if len(lines) - 1 != m:
        raise ValidationError(f"expected {m} edge lines, found {len(lines) - 1}")
    w = np.zeros((n, n))
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValidationError(f"bad edge line: {ln!r}")
        try:
            u, v, wt = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ValidationError(f"bad edge line: {ln!r}") from exc
        if not (0 <= u < v < n):
            raise ValidationError(f"edge endpoints must satisfy 0 <= u < v < n: {ln!r}")
        if wt <= 0 or not np.isfinite(wt):
            raise ValidationError(f"edge weight must be a positive decimal: {ln!r}")
        if w[u, v] != 0:
            raise ValidationError(f"duplicate edge ({u}, {v})")
        w[u, v] = wt
        w[v, u] = wt
    return WeightedGraph(w)


def dumps_graph(g: WeightedGraph) -> str:
    """Canonical text form: header then edges sorted by (u, v)."""
    buf = io.StringIO()
    edges = g.edges()
    buf.write(f"{g.n} {len(edges)}\n")
    for u, v, wt in edges:
        buf.write(f"{u} {v} {wt!r}\n")
    return buf.getvalue()


def load_graph(path: str) -> WeightedGraph:
    with open(path, "r", encoding="ascii") as fh:
        return loads_graph(fh.read())


def save_graph(g: WeightedGraph, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_graph(g))
