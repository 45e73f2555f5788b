"""Weighted star matrices B(k; r_1, ..., r_m) and their closed forms.

A star shape is a center of diagonal weight ``k`` joined to ``m`` type-A chains
of lengths ``r_i``.  The sign of the Schur scalar

    S = k - m + sum(1 / (r_i + 1))

decides everything: positive definite, affine (corank one), or exactly one
negative eigenvalue.  All closed forms here work on the compact shape and never
build the matrix; ``build_star_matrix`` exists for oracle cross-checks.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Sequence

import numpy as np

from weighted_stars.exact import ExactMatrix, Inertia, inertia_symmetric

DEFAULT_THRESHOLD = 10_000

__all__ = [
    "AffineSolution",
    "CoxeterLabels",
    "DEFAULT_THRESHOLD",
    "GraphType",
    "MatrixClass",
    "MatrixTooLarge",
    "NotAffineError",
    "StarShape",
    "WeightedGraph",
    "build_star_matrix",
    "build_weighted_matrix",
    "classify",
    "classify_general",
    "coxeter_labels",
    "coxeter_number",
    "determinant_closed",
    "dimension",
    "entry_sum",
    "label_vector",
    "schur_scalar",
    "star_graph",
    "tau_decompose",
    "tau_product",
    "trace",
    "verify_kernel",
]


class MatrixTooLarge(ValueError):
    """Raised instead of materializing a matrix above the size threshold."""

    def __init__(self, dim: int, threshold: int):
        super().__init__(f"matrix of dimension D = {dim} is too large to materialize "
                         f"(threshold {threshold})")
        self.dim = dim
        self.threshold = threshold


class NotAffineError(ValueError):
    pass


@dataclass(frozen=True)
class StarShape:
    """Central weight ``k`` plus the multiset of arm lengths, sorted ascending."""

    k: int
    arms: tuple[int, ...]

    def __init__(self, k: int, arms: Sequence[int]):
        arms = tuple(sorted(int(r) for r in arms))
        if k < 1:
            raise ValueError(f"central weight k must be >= 1, got {k}")
        if len(arms) < 2:
            raise ValueError(f"a star needs at least two arms, got {len(arms)}")
        if arms[0] < 1:
            raise ValueError("arm lengths must be >= 1")
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "arms", arms)

    @classmethod
    def from_denominators(cls, denominators: Sequence[int], p: int) -> StarShape:
        """Shape with arms N_i - 1 and center weight m - p."""
        return cls(len(denominators) - p, [n - 1 for n in denominators])

    @property
    def m(self) -> int:
        return len(self.arms)

    @property
    def p(self) -> int:
        return self.m - self.k

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(r + 1 for r in self.arms)

    def __str__(self) -> str:
        return f"B({self.k};{','.join(map(str, self.arms))})"


def dimension(shape: StarShape) -> int:
    return 1 + sum(shape.arms)


def trace(shape: StarShape) -> int:
    return 2 * sum(shape.arms) + shape.k


def entry_sum(shape: StarShape) -> int:
    # each arm contributes 2r - 2(r - 1) - 2 = 0 (chain plus the coupling pair)
    return shape.k


def schur_scalar(shape: StarShape) -> Fraction:
    return shape.k - shape.m + sum(Fraction(1, n) for n in shape.denominators)


def determinant_closed(shape: StarShape) -> int:
    det = prod(shape.denominators) * schur_scalar(shape)
    assert det.denominator == 1
    return int(det)


class MatrixClass(enum.Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


def classify(shape: StarShape) -> MatrixClass:
    """Trichotomy by the sign of the Schur scalar.

    ``INDEFINITE`` for a star always means exactly one negative eigenvalue.
    """
    s = schur_scalar(shape)
    if s > 0:
        return MatrixClass.FINITE
    if s == 0:
        return MatrixClass.AFFINE
    return MatrixClass.INDEFINITE


def _star_index(shape: StarShape) -> list[tuple[int, int, int]]:
    """(arm index, position in arm starting at 1, row) for each arm vertex."""
    out = []
    row = 0
    for i, r in enumerate(shape.arms):
        for j in range(1, r + 1):
            out.append((i, j, row))
            row += 1
    return out


def build_star_matrix(shape: StarShape, threshold: int = DEFAULT_THRESHOLD) -> ExactMatrix:
    """Dense matrix with arms first (root to center) and the center last."""
    dim = dimension(shape)
    if dim > threshold:
        raise MatrixTooLarge(dim, threshold)
    dtype = np.int64 if shape.k <= np.iinfo(np.int64).max else object
    data = np.zeros((dim, dim), dtype=dtype)
    center = dim - 1
    data[center, center] = shape.k
    start = 0
    for r in shape.arms:
        idx = np.arange(start, start + r)
        data[idx, idx] = 2
        data[idx[:-1], idx[1:]] = -1
        data[idx[1:], idx[:-1]] = -1
        last = start + r - 1
        data[last, center] = data[center, last] = -1
        start += r
    return ExactMatrix._build(data, symmetric=True)


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    weights: tuple[int, ...]
    edges: frozenset[frozenset[int]]

    def __init__(self, weights: Sequence[int], edges: Sequence[tuple[int, int]]):
        n = len(weights)
        if any(w < 1 for w in weights):
            raise ValueError("vertex weights must be positive integers")
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            e = frozenset((u, v))
            if e in es:
                raise ValueError(f"repeated edge ({u}, {v})")
            es.add(e)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", tuple(int(w) for w in weights))
        object.__setattr__(self, "edges", frozenset(es))

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n


def star_graph(shape: StarShape) -> WeightedGraph:
    """The star as a weighted graph, using the same vertex order as the matrix."""
    dim = dimension(shape)
    center = dim - 1
    edges = []
    row = 0
    for r in shape.arms:
        edges.extend((row + j, row + j + 1) for j in range(r - 1))
        edges.append((row + r - 1, center))
        row += r
    return WeightedGraph([2] * (dim - 1) + [shape.k], edges)


def build_weighted_matrix(g: WeightedGraph) -> ExactMatrix:
    rows = [[0] * g.n for _ in range(g.n)]
    for v, w in enumerate(g.weights):
        rows[v][v] = w
    for e in g.edges:
        u, v = tuple(e)
        rows[u][v] = rows[v][u] = -1
    return ExactMatrix.from_rows(rows, symmetric=True)


@dataclass(frozen=True)
class GraphType:
    kind: MatrixClass
    inertia: Inertia

    @property
    def corank(self) -> int:
        return self.inertia.n_zero

    @property
    def n_neg(self) -> int:
        return self.inertia.n_neg


def classify_general(g: WeightedGraph) -> GraphType:
    """Finite/affine/indefinite test for an arbitrary connected weighted graph.

    Affine requires inertia (n-1, 1, 0) and every proper principal submatrix
    positive definite.  Any proper principal submatrix sits inside some
    one-vertex deletion, and principal submatrices of a positive definite
    matrix are positive definite, so checking the n deletions suffices.
    """
    if not g.is_connected():
        raise ValueError("classify_general requires a connected graph")
    M = build_weighted_matrix(g)
    inertia = inertia_symmetric(M)
    n = g.n
    if inertia == (n, 0, 0):
        return GraphType(MatrixClass.FINITE, inertia)
    if inertia == (n - 1, 1, 0) and all(
        inertia_symmetric(M.delete_vertex(v)) == (n - 1, 0, 0) for v in range(n)
    ):
        return GraphType(MatrixClass.AFFINE, inertia)
    return GraphType(MatrixClass.INDEFINITE, inertia)


@dataclass(frozen=True)
class CoxeterLabels:
    """Center label plus one label sequence per arm, ordered root to center.

    Arm sequences built by :func:`coxeter_labels` are ``range`` objects, so the
    labels of a star with millions of vertices cost O(m) memory.
    """

    center: int
    arm_labels: tuple[Sequence[int], ...]

    def all_labels(self):
        yield from itertools.chain.from_iterable(self.arm_labels)
        yield self.center

    def gcd(self) -> int:
        g = self.center
        for seq in self.arm_labels:
            if isinstance(seq, range):
                g = gcd(g, seq.start, seq.step) if len(seq) else g
            else:
                g = gcd(g, *seq)
        return g

    def total(self) -> int:
        t = self.center
        for seq in self.arm_labels:
            if isinstance(seq, range) and len(seq):
                t += len(seq) * (seq[0] + seq[-1]) // 2
            else:
                t += sum(seq)
        return t


def _require_affine(shape: StarShape) -> None:
    if shape.p <= 0:
        raise NotAffineError(f"{shape} has p = m - k = {shape.p} <= 0; it is finite type")
    if classify(shape) is not MatrixClass.AFFINE:
        raise NotAffineError(f"{shape} is not affine (S = {schur_scalar(shape)})")


def coxeter_labels(shape: StarShape) -> CoxeterLabels:
    _require_affine(shape)
    s = lcm(*shape.denominators)
    arms = []
    for n in shape.denominators:
        x = s // n
        arms.append(range(x, x * n, x))
    return CoxeterLabels(s, tuple(arms))


def coxeter_number(shape: StarShape) -> int:
    labels = coxeter_labels(shape)
    h = labels.total()
    closed, rem = divmod(labels.center * (dimension(shape) + 1), 2)
    assert rem == 0 and h == closed, (h, closed)
    return h


def label_vector(shape: StarShape, labels: CoxeterLabels) -> list[int]:
    """Labels flattened in the vertex order of :func:`build_star_matrix`."""
    return list(labels.all_labels())


def verify_kernel(shape: StarShape, labels: CoxeterLabels) -> bool:
    """Check B c = 0 block by block, without building B.

    Arm rows read 2 c_j - c_{j-1} - c_{j+1} = 0 with c_0 = 0 and
    c_{r+1} = s, i.e. each arm is an arithmetic progression from 0 to the
    center label.  The center row reads k s - sum of the last arm labels = 0.
    """
    if len(labels.arm_labels) != shape.m:
        raise ValueError(f"{len(labels.arm_labels)} label arms for a star with {shape.m} arms")
    for r, seq in zip(shape.arms, labels.arm_labels):
        if len(seq) != r:
            raise ValueError(f"arm of length {r} given {len(seq)} labels")
    s = labels.center
    for seq in labels.arm_labels:
        if isinstance(seq, range):
            # a range is an arithmetic progression: second differences vanish
            if seq.start != seq.step or seq[-1] + seq.step != s:
                return False
            continue
        chain = [0, *seq, s]
        if any(2 * chain[j] != chain[j - 1] + chain[j + 1] for j in range(1, len(chain) - 1)):
            return False
    return shape.k * s - sum(seq[-1] for seq in labels.arm_labels) == 0


@dataclass(frozen=True)
class AffineSolution:
    """An affine star with its divisor labels and invariants."""

    shape: StarShape
    s: int = field(init=False)
    x: tuple[int, ...] = field(init=False)
    D: int = field(init=False)
    h: int = field(init=False)

    def __post_init__(self) -> None:
        _require_affine(self.shape)
        s = lcm(*self.shape.denominators)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "x", tuple(sorted((s // n for n in self.shape.denominators),
                                                   reverse=True)))
        object.__setattr__(self, "D", dimension(self.shape))
        object.__setattr__(self, "h", coxeter_number(self.shape))

    @classmethod
    def from_arms(cls, arms: Sequence[int], p: int) -> AffineSolution:
        return cls(StarShape(len(arms) - p, arms))

    @property
    def p(self) -> int:
        return self.shape.p

    @property
    def m(self) -> int:
        return self.shape.m

    @property
    def arms(self) -> tuple[int, ...]:
        return self.shape.arms

    @cached_property
    def labels(self) -> CoxeterLabels:
        return coxeter_labels(self.shape)

    def sort_key(self) -> tuple:
        return (self.D, self.s, self.arms)

    def __str__(self) -> str:
        return f"B^({self.p})({','.join(map(str, self.arms))})"


def tau_product(a: AffineSolution, b: AffineSolution) -> AffineSolution:
    """Multiset union of arms; p values (and center weights) add."""
    out = AffineSolution.from_arms(a.arms + b.arms, a.p + b.p)
    if not verify_kernel(out.shape, out.labels):
        raise AssertionError(f"tau product {out} failed kernel verification")
    return out


def _unit_sum(arms: Sequence[int]) -> Fraction:
    return sum((Fraction(1, r + 1) for r in arms), Fraction(0))


def tau_decompose(sol: AffineSolution) -> tuple[AffineSolution, AffineSolution] | None:
    """Split the arms into two affine stars, or return None if tau-primitive.

    Sub-multisets are tried smallest first, then in lexicographic order of
    multiplicities, so the answer is deterministic.
    """
    counts = sorted(Counter(sol.arms).items())
    values = [v for v, _ in counts]
    total = len(sol.arms)
    choices = sorted(
        itertools.product(*(range(c + 1) for _, c in counts)),
        key=lambda mult: (sum(mult), [-c for c in mult]),
    )
    for mult in choices:
        size = sum(mult)
        if size < 2 or 2 * size > total:
            continue
        part = [v for v, c in zip(values, mult) for _ in range(c)]
        q = _unit_sum(part)
        if q.denominator != 1 or q < 1:
            continue
        rest = list((Counter(sol.arms) - Counter(part)).elements())
        return (AffineSolution.from_arms(part, int(q)),
                AffineSolution.from_arms(rest, sol.p - int(q)))
    return None
