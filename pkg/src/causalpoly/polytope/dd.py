"""Facet enumeration of a polytope from its vertices (double description).

Given points spanning a full-dimensional polytope P in R^d, lift each point
p to the integer generator (s, s*p) in R^(d+1).  The valid inequalities
{(r, -n) : n.x <= r on P} form the polar cone {y : G y >= 0} cut out by the
lifted generators G, and the facets of P are exactly its extreme rays.  The
extreme rays are built incrementally (Motzkin's double description): start
from a simplicial subcone given by d+1 independent generators, then insert
the remaining generator inequalities one at a time, in lexicographic order,
combining adjacent rays across the new hyperplane.

All arithmetic is over arbitrary-precision integers; adjacency uses the
standard combinatorial test on tight-set bitmasks.
"""

from __future__ import annotations

from typing import Sequence

from ._exact import IntRowSpace, Rational, integerize, primitive

# Hard cap on the intermediate ray count, to fail loudly instead of thrashing.
MAX_INTERMEDIATE_RAYS = 200_000


def _lift(points: Sequence[Sequence[Rational]]) -> list[tuple[int, ...]]:
    rows = []
    for p in points:
        row = integerize([1] + list(p))
        rows.append(primitive(row))
    return rows


def _dot(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _initial_basis(rows: list[tuple[int, ...]], dim: int) -> list[int]:
    space = IntRowSpace(dim)
    chosen = []
    for i, row in enumerate(rows):
        if space.add(row):
            chosen.append(i)
            if len(chosen) == dim:
                return chosen
    raise ValueError(f"points span only {space.rank} of {dim} lifted dimensions; polytope is not full-dimensional")


def extreme_rays(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : row . y >= 0 for each row}.

    ``rows`` must have full column rank (which makes the cone pointed).
    """
    from ._exact import solve_basis_columns

    dim = len(rows[0])
    basis_idx = _initial_basis(rows, dim)
    order = basis_idx + [i for i in range(len(rows)) if i not in set(basis_idx)]

    rays = solve_basis_columns([rows[i] for i in basis_idx])
    # tight-set bitmask per ray, bit j <-> order[j]; a basis ray r_k is tight
    # at every basis row except its own
    zsets = []
    for k in range(dim):
        z = 0
        for j in range(dim):
            if j != k:
                z |= 1 << j
        zsets.append(z)

    for step in range(dim, len(order)):
        row = rows[order[step]]
        dots = [_dot(row, r) for r in rays]
        if all(d >= 0 for d in dots):
            for i, d in enumerate(dots):
                if d == 0:
                    zsets[i] |= 1 << step
            continue

        plus = [i for i, d in enumerate(dots) if d > 0]
        zero = [i for i, d in enumerate(dots) if d == 0]
        minus = [i for i, d in enumerate(dots) if d < 0]

        new_rays: list[tuple[int, ...]] = []
        new_zsets: list[int] = []
        processed_rows = [rows[order[j]] for j in range(step + 1)]
        for ip in plus:
            zp = zsets[ip]
            for im in minus:
                zc = zp & zsets[im]
                if zc.bit_count() < dim - 2:
                    continue
                adjacent = True
                for io in range(len(rays)):
                    if io == ip or io == im:
                        continue
                    if zc & zsets[io] == zc:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vec = tuple(
                    dots[ip] * rm - dots[im] * rp for rp, rm in zip(rays[ip], rays[im])
                )
                vec = primitive(vec)
                z = 0
                for j, prow in enumerate(processed_rows):
                    if _dot(prow, vec) == 0:
                        z |= 1 << j
                new_rays.append(vec)
                new_zsets.append(z)

        kept_rays = [rays[i] for i in plus] + [rays[i] for i in zero]
        kept_zsets = [zsets[i] for i in plus] + [zsets[i] | (1 << step) for i in zero]
        rays = kept_rays + new_rays
        zsets = kept_zsets + new_zsets
        if len(rays) > MAX_INTERMEDIATE_RAYS:
            raise RuntimeError(f"double description exceeded {MAX_INTERMEDIATE_RAYS} intermediate rays")
        if len(set(rays)) != len(rays):
            raise AssertionError("double description produced duplicate rays")
    return rays


def facets_of_points(points: Sequence[Sequence[Rational]]) -> list[tuple[tuple[int, ...], int]]:
    """Irredundant facet list of the full-dimensional polytope conv(points).

    Returns primitive integer pairs (normal, rhs) meaning normal . x <= rhs;
    every facet of the polytope appears exactly once.
    """
    if not points:
        raise ValueError("need at least one point")
    d = len(points[0])
    if d == 0:
        raise ValueError("points must have at least one coordinate")
    rows = sorted(set(_lift(points)))
    rays = extreme_rays(rows)
    facets = []
    for ray in rays:
        rhs, normal = ray[0], tuple(-c for c in ray[1:])
        facets.append((normal, rhs))
    facets.sort()
    return facets


def check_facets(
    points: Sequence[Sequence[Rational]],
    facets: Sequence[tuple[tuple[int, ...], int]],
) -> None:
    """Exact sanity check: every point satisfies every facet, each is tight somewhere."""
    for normal, rhs in facets:
        tight = 0
        for p in points:
            v = sum(c * x for c, x in zip(normal, p))
            if v > rhs:
                raise AssertionError(f"facet {normal} <= {rhs} violated by a point (value {v})")
            if v == rhs:
                tight += 1
        if tight == 0:
            raise AssertionError(f"facet {normal} <= {rhs} is not supported by any point")
