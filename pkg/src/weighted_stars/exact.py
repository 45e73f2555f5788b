"""Exact linear algebra over the integers for small symmetric matrices.

Everything here is an oracle: dense storage, no floating point.  Integers are
Python ints and rationals are :class:`fractions.Fraction`, both of which are
arbitrary precision and kept in canonical form by the standard library.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

_INT64_MAX = np.iinfo(np.int64).max

__all__ = [
    "ExactMatrix",
    "Inertia",
    "a_r_inverse_last",
    "bareiss_determinant",
    "char_poly",
    "exact_inverse",
    "inertia_symmetric",
    "sign_variations",
    "type_a_cartan",
]


def _fits_int64(values: Iterable[int]) -> bool:
    return all(-_INT64_MAX <= v <= _INT64_MAX for v in values)


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """Square integer matrix, immutable.

    Entries are held in a numpy array of ``int64`` when every entry fits and
    in an ``object`` array of Python ints otherwise.  Every accessor hands back
    Python ints, so callers never see fixed-width arithmetic.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise ValueError(f"matrix must be square, got shape {self.data.shape}")
        self.data.setflags(write=False)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], symmetric: bool = False) -> ExactMatrix:
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        flat = [int(v) for row in rows for v in row]
        dtype = np.int64 if _fits_int64(flat) else object
        data = np.array(flat, dtype=dtype).reshape(n, n)
        return cls._build(data, symmetric)

    @classmethod
    def _build(cls, data: np.ndarray, symmetric: bool) -> ExactMatrix:
        m = cls(data)
        if symmetric and not m.is_symmetric():
            raise ValueError("builder produced an asymmetric matrix")
        return m

    @property
    def order(self) -> int:
        return self.data.shape[0]

    @property
    def entries(self) -> tuple[int, ...]:
        """Row-major entries as Python ints."""
        return tuple(int(v) for v in self.data.ravel())

    def rows(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return int(self.data[ij])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows()!r})"

    def is_symmetric(self) -> bool:
        a = self.data
        n = a.shape[0]
        # tiled comparison keeps the transposed reads cache friendly
        b = 512
        for i in range(0, n, b):
            for j in range(i, n, b):
                if not np.array_equal(a[i:i + b, j:j + b], a[j:j + b, i:i + b].T):
                    return False
        return True

    @cached_property
    def max_abs(self) -> int:
        if self.order == 0:
            return 0
        return max(abs(int(self.data.max())), abs(int(self.data.min())))

    def trace(self) -> int:
        return sum(int(self.data[i, i]) for i in range(self.order))

    def entry_sum(self) -> int:
        return sum(int(v) for v in self.data.sum(axis=1))

    def principal_submatrix(self, keep: Sequence[int]) -> ExactMatrix:
        idx = np.asarray(keep, dtype=np.intp)
        return ExactMatrix(self.data[np.ix_(idx, idx)].copy())

    def delete_vertex(self, v: int) -> ExactMatrix:
        """Principal submatrix with row and column ``v`` removed."""
        return self.principal_submatrix([i for i in range(self.order) if i != v])

    def permuted(self, perm: Sequence[int]) -> ExactMatrix:
        """Simultaneous row/column permutation: entry (i, j) becomes M[perm[i], perm[j]]."""
        if sorted(perm) != list(range(self.order)):
            raise ValueError("not a permutation of the index set")
        return self.principal_submatrix(perm)

    def matvec(self, vec: Sequence[int]) -> list[int]:
        """Exact product ``M @ vec``.

        Uses int64 arithmetic only when a bound on every row sum proves it
        cannot overflow; otherwise falls back to Python ints.
        """
        if len(vec) != self.order:
            raise ValueError(f"vector length {len(vec)} != order {self.order}")
        if self.order == 0:
            return []
        vmax = max(abs(int(v)) for v in vec)
        if self.data.dtype == np.int64:
            row_bound = self.max_abs * vmax * self.order
            if row_bound <= _INT64_MAX:
                out = self.data @ np.asarray(vec, dtype=np.int64)
                return [int(v) for v in out]
        obj = np.asarray([int(v) for v in vec], dtype=object)
        return [int(v) for v in self.data.astype(object) @ obj]


class Inertia(NamedTuple):
    n_pos: int
    n_zero: int
    n_neg: int

    @property
    def order(self) -> int:
        return self.n_pos + self.n_zero + self.n_neg


def type_a_cartan(r: int) -> ExactMatrix:
    """Tridiagonal Cartan matrix of type A_r (2 on the diagonal, -1 beside it)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    rows = [[0] * r for _ in range(r)]
    for i in range(r):
        rows[i][i] = 2
        if i + 1 < r:
            rows[i][i + 1] = rows[i + 1][i] = -1
    return ExactMatrix.from_rows(rows, symmetric=True)


def bareiss_determinant(M: ExactMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination.

    Every intermediate value is an integer minor of ``M``.  The empty matrix
    has determinant 1.
    """
    a = M.rows()
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (akk * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


# 2**e - 1 is prime for each of these exponents
_MERSENNE_EXPONENTS = (61, 89, 107, 127, 521, 607, 1279, 2203, 2281, 3217, 4253, 4423,
                       9689, 9941, 11213, 19937)


def _coefficient_bound(M: ExactMatrix) -> int:
    """Bound on |coefficient| of the characteristic polynomial.

    Every eigenvalue is bounded by the largest absolute row sum R, and the
    degree-(n-i) coefficient is an elementary symmetric function of the
    eigenvalues, so it is at most C(n, i) R^i; the sum of those is (1 + R)^n.
    """
    if M.order == 0:
        return 1
    r = max(sum(abs(v) for v in row) for row in M.rows())
    return (1 + r) ** M.order


def char_poly(M: ExactMatrix) -> list[int]:
    """Coefficients of det(xI - M), leading coefficient first.

    Reduces ``M`` to upper Hessenberg form by similarity transforms and
    expands the Hessenberg determinant by the standard recurrence.  The work
    is done modulo a Mersenne prime larger than twice a coefficient bound, so
    the symmetric residues are the exact integer coefficients; if the bound is
    out of range the same algorithm runs over the rationals.
    """
    bound = _coefficient_bound(M)
    for e in _MERSENNE_EXPONENTS:
        prime = (1 << e) - 1
        if prime > 2 * bound:
            half = prime // 2
            return [c - prime if c > half else c for c in _char_poly_mod(M.rows(), prime)]
    return _char_poly_rational(M.rows())


def _char_poly_mod(h: list[list[int]], prime: int) -> list[int]:
    n = len(h)
    h = [[v % prime for v in row] for row in h]
    for m in range(1, n - 1):
        col = m - 1
        pivot = next((i for i in range(m, n) if h[i][col]), None)
        if pivot is None:
            continue
        if pivot != m:
            h[m], h[pivot] = h[pivot], h[m]
            for row in h:
                row[m], row[pivot] = row[pivot], row[m]
        inv = pow(h[m][col], -1, prime)
        row_m = h[m]
        for i in range(m + 1, n):
            if not h[i][col]:
                continue
            u = h[i][col] * inv % prime
            row_i = h[i]
            for j in range(n):
                if row_m[j]:
                    row_i[j] = (row_i[j] - u * row_m[j]) % prime
            for row in h:
                if row[i]:
                    row[m] = (row[m] + u * row[i]) % prime

    # polys[k]: characteristic polynomial of the leading k x k block, low degree first
    polys: list[list[int]] = [[1]]
    for k in range(n):
        prev = polys[k]
        nxt = [0] + prev
        hkk = h[k][k]
        if hkk:
            for d, c in enumerate(prev):
                nxt[d] -= hkk * c
        t = 1
        for i in range(k - 1, -1, -1):
            t = t * h[i + 1][i] % prime
            if not t:
                break
            hik = h[i][k]
            if hik:
                f = t * hik % prime
                for d, c in enumerate(polys[i]):
                    nxt[d] -= f * c
        polys.append([c % prime for c in nxt])
    return polys[n][::-1]


def _char_poly_rational(h: list[list[Fraction | int]]) -> list[int]:
    n = len(h)
    for m in range(1, n - 1):
        col = m - 1
        pivot = next((i for i in range(m, n) if h[i][col] != 0), None)
        if pivot is None:
            continue
        if pivot != m:
            h[m], h[pivot] = h[pivot], h[m]
            for row in h:
                row[m], row[pivot] = row[pivot], row[m]
        piv = h[m][col]
        for i in range(m + 1, n):
            if h[i][col] == 0:
                continue
            u = Fraction(h[i][col]) / piv
            row_i, row_m = h[i], h[m]
            for j in range(n):
                if row_m[j]:
                    row_i[j] -= u * row_m[j]
            for row in h:
                if row[i]:
                    row[m] += u * row[i]

    polys: list[list[Fraction | int]] = [[1]]
    for k in range(n):
        prev = polys[k]
        nxt: list[Fraction | int] = [0] + prev
        hkk = h[k][k]
        if hkk:
            for d, c in enumerate(prev):
                nxt[d] -= hkk * c
        t: Fraction | int = 1
        for i in range(k - 1, -1, -1):
            t *= h[i + 1][i]
            if t == 0:
                break
            hik = h[i][k]
            if hik:
                f = t * hik
                for d, c in enumerate(polys[i]):
                    nxt[d] -= f * c
        polys.append(nxt)
    out = []
    for c in reversed(polys[n]):
        c = Fraction(c)
        if c.denominator != 1:
            raise ArithmeticError("non-integral characteristic polynomial coefficient")
        out.append(int(c))
    return out


def sign_variations(coeffs: Sequence[int]) -> int:
    """Number of sign changes in a coefficient sequence, zeros ignored."""
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def inertia_symmetric(M: ExactMatrix) -> Inertia:
    """Eigenvalue sign counts of a symmetric integer matrix.

    The characteristic polynomial of a symmetric matrix is real-rooted, so
    Descartes' rule of signs is exact: the number of positive roots equals
    the number of sign variations once the root at zero is divided out.
    """
    if not M.is_symmetric():
        raise ValueError("inertia_symmetric requires a symmetric matrix")
    coeffs = char_poly(M)
    n = M.order
    n_zero = 0
    while n_zero < n and coeffs[n - n_zero] == 0:
        n_zero += 1
    n_pos = sign_variations(coeffs[: n + 1 - n_zero])
    return Inertia(n_pos, n_zero, n - n_pos - n_zero)


def exact_inverse(M: ExactMatrix) -> list[list[Fraction]]:
    """Inverse by Gauss-Jordan elimination over the rationals."""
    n = M.order
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.rows())]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def a_r_inverse_last(r: int) -> Fraction:
    """Last diagonal entry of the inverse of A_r, which is r/(r+1)."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return Fraction(r, r + 1)
