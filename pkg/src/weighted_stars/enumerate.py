"""Depth-first enumeration of affine weighted stars.

Affine stars with ``m`` arms and ``p = m - k`` correspond one-to-one with
solutions of

    1/N_1 + ... + 1/N_m = p,    2 <= N_1 <= ... <= N_m,

via ``r_i = N_i - 1``.  With residual ``rho`` and ``t`` terms left, the next
denominator lies in ``[ceil(1/rho), floor(t/rho)]``; together with
monotonicity this makes the search finite and complete.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from weighted_stars.star import AffineSolution, StarShape, verify_kernel

log = logging.getLogger(__name__)

__all__ = [
    "EnumQuery",
    "EnumResult",
    "count_affine",
    "denominator_bounds",
    "enumerate_affine",
    "iter_denominators",
]


@dataclass(frozen=True)
class EnumQuery:
    m: int
    p: int
    d_max: int | None = None
    limit: int | None = None
    count_only: bool = False

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")

    @property
    def feasible(self) -> bool:
        return 2 * self.p <= self.m


@dataclass(frozen=True)
class EnumResult:
    """Solutions that survived ``d_max``/``limit`` plus the untruncated total."""

    query: EnumQuery
    solutions: tuple[AffineSolution, ...]
    total: int
    diagnostic: str | None = field(default=None)

    def __iter__(self) -> Iterator[AffineSolution]:
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)


def denominator_bounds(rho: Fraction, t: int, n_prev: int) -> tuple[int, int]:
    """Admissible range for the next denominator; ``lo > hi`` means prune."""
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError(f"residual must be positive, got {rho}")
    if t < 1:
        raise ValueError(f"remaining term count must be >= 1, got {t}")
    a, b = rho.numerator, rho.denominator
    lo = max(2, n_prev, -(-b // a))
    hi = (t * b) // a
    return lo, hi


def _search(prefix: list[int], rho: Fraction, t: int) -> Iterator[tuple[int, ...]]:
    lo, hi = denominator_bounds(rho, t, prefix[-1] if prefix else 2)
    if t == 1:
        # the last term is forced: rho must itself be a unit fraction in range
        if rho.numerator == 1 and lo <= rho.denominator <= hi:
            yield (*prefix, rho.denominator)
        return
    for n in range(lo, hi + 1):
        rest = rho - Fraction(1, n)
        if rest <= 0:
            continue
        prefix.append(n)
        yield from _search(prefix, rest, t - 1)
        prefix.pop()


def iter_denominators(m: int, p: int) -> Iterator[tuple[int, ...]]:
    """Every non-decreasing denominator tuple of length ``m`` summing to ``p``.

    Yields in lexicographic order.
    """
    if 2 * p > m:
        return
    yield from _search([], Fraction(p), m)


def _subtree(m: int, p: int, first: int) -> list[tuple[int, ...]]:
    rest = Fraction(p) - Fraction(1, first)
    if m == 1:
        return [(first,)] if rest == 0 else []
    if rest <= 0:
        return []
    return list(_search([first], rest, m - 1))


def _all_denominators(m: int, p: int, workers: int | None) -> list[tuple[int, ...]]:
    if not workers or workers <= 1 or 2 * p > m:
        return list(iter_denominators(m, p))
    lo, hi = denominator_bounds(Fraction(p), m, 2)
    firsts = range(lo, hi + 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_subtree, [m] * len(firsts), [p] * len(firsts), firsts)
        out = [t for part in parts for t in part]
    # deterministic merge regardless of completion order
    out.sort()
    return out


def _to_solution(denoms: tuple[int, ...], p: int) -> AffineSolution:
    sol = AffineSolution(StarShape.from_denominators(denoms, p))
    if sum(Fraction(1, n) for n in denoms) != p or not verify_kernel(sol.shape, sol.labels):
        raise AssertionError(f"enumeration produced an invalid solution {denoms}")
    return sol


def enumerate_affine(q: EnumQuery, workers: int | None = None) -> EnumResult:
    """All affine stars for ``(m, p)``, sorted by (D, s, arms).

    ``d_max`` and ``limit`` trim the returned list after sorting; ``total``
    always counts every solution.  ``workers > 1`` fans the first search level
    out over processes; output is identical either way.
    """
    if not q.feasible:
        msg = f"no solutions: p = {q.p} exceeds m/2 = {q.m / 2} (each term is at most 1/2)"
        log.info(msg)
        return EnumResult(q, (), 0, msg)
    denoms = _all_denominators(q.m, q.p, workers)
    total = len(denoms)
    if q.count_only:
        return EnumResult(q, (), total)
    sols = sorted((_to_solution(d, q.p) for d in denoms), key=AffineSolution.sort_key)
    if q.d_max is not None:
        sols = [s for s in sols if s.D <= q.d_max]
    if q.limit is not None:
        sols = sols[: q.limit]
    return EnumResult(q, tuple(sols), total)


def count_affine(m: int, p: int) -> int:
    return enumerate_affine(EnumQuery(m, p, count_only=True)).total
