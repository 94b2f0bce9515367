"""Exact rational linear algebra on integer rows.

Vertex coordinates are 0/1 integers and inequality coefficients are
rationals, so every rank / elimination step here uses arbitrary-precision
integers (fraction-free row reduction with gcd normalization).  Floating
point never enters this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = int | Fraction


def integerize(vec: Sequence[Rational]) -> tuple[int, ...]:
    """Scale a rational vector by a positive integer so all entries are int."""
    denoms = [v.denominator for v in vec if isinstance(v, Fraction)]
    if not denoms:
        return tuple(int(v) for v in vec)
    m = 1
    for d in denoms:
        m = m * d // gcd(m, d)
    return tuple(int(v * m) for v in vec)


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (orientation kept)."""
    g = 0
    for v in vec:
        g = gcd(g, v)
        if g == 1:
            return tuple(vec)
    if g == 0:
        return tuple(vec)
    return tuple(v // g for v in vec)


class IntRowSpace:
    """Incremental row space over the rationals, stored as integer rows.

    Rows are kept in echelon form (one pivot column per row).  ``add``
    reduces the candidate against the current basis and reports whether it
    increased the rank.
    """

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self.pivots: list[tuple[int, tuple[int, ...]]] = []  # (pivot col, row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Sequence[Rational]) -> tuple[int, ...]:
        r = list(integerize(row))
        if len(r) != self.n_cols:
            raise ValueError(f"expected row of length {self.n_cols}, got {len(r)}")
        for col, prow in self.pivots:
            if r[col]:
                a, b = prow[col], r[col]
                r = [a * ri - b * pi for ri, pi in zip(r, prow)]
        return primitive(r)

    def add(self, row: Sequence[Rational]) -> bool:
        r = self.reduce(row)
        for col, v in enumerate(r):
            if v:
                if v < 0:
                    r = tuple(-x for x in r)
                self.pivots.append((col, tuple(r)))
                self.pivots.sort(key=lambda p: p[0])
                return True
        return False

    def contains(self, row: Sequence[Rational]) -> bool:
        return not any(self.reduce(row))


def matrix_rank(rows: Iterable[Sequence[Rational]], n_cols: int) -> int:
    space = IntRowSpace(n_cols)
    for row in rows:
        space.add(row)
    return space.rank


def affine_rank(points: Sequence[Sequence[Rational]]) -> int:
    """Dimension of the affine hull of the given rational points."""
    if not points:
        raise ValueError("affine_rank needs at least one point")
    base = list(points[0])
    n = len(base)
    space = IntRowSpace(n)
    for p in points[1:]:
        space.add([pi - bi for pi, bi in zip(p, base)])
    return space.rank


def solve_basis_columns(rows: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Integer generators r_j with ``B r_j = c_j e_j`` (c_j > 0) for square B.

    ``rows`` must be a nonsingular square integer matrix.  The returned
    vectors are the (primitive, sign-fixed) columns of B^{-1}: the extreme
    rays of the simplicial cone {y : B y >= 0}.
    """
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    # Gauss-Jordan over the rationals
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [v / inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * p for v, p in zip(aug[r], aug[col])]
    cols = []
    for j in range(n):
        col_vec = [aug[i][n + j] for i in range(n)]
        r = integerize(col_vec)
        r = primitive(r)
        # B r = c e_j with c != 0; fix the sign so c > 0
        c = sum(rows[j][k] * r[k] for k in range(n))
        if c < 0:
            r = tuple(-x for x in r)
        cols.append(tuple(r))
    return cols
