"""Facet enumeration of causal polytopes and relabeling-orbit classification.

Correlation tables live in the affine subspace cut out by the per-(x,y)
normalization constraints, so facet enumeration runs in a full-dimensional
chart obtained by dropping the last outcome pair (a,b) = (k_A-1, k_B-1) of
every block.  Facets are mapped back to coefficient tensors and compared in
canonical form.

The relabeling group of the binary scenario is generated by the party swap,
input flips and input-conditioned output flips a -> a ⊕ a1·x ⊕ a0 (and the
analogue for b); it has 128 elements and acts on tables, inequalities and
vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from ._exact import affine_rank
from .dd import facets_of_points
from .inequalities import (
    CausalInequality,
    gyni_inequality,
    lgyni_inequality,
    nonnegativity_inequality,
)
from .tables import CorrelationTable, Scenario


class UnsupportedScenarioError(ValueError):
    """Operation implemented only for binary inputs and outputs."""


def _chart_columns(s: Scenario) -> list[int]:
    cols = []
    for x, y in s.iter_xy():
        for a in range(s.k_a):
            for b in range(s.k_b):
                if (a, b) != (s.k_a - 1, s.k_b - 1):
                    cols.append(s.index(x, y, a, b))
    return cols


def enumerate_facets(vertices: Sequence[CorrelationTable]) -> list[CausalInequality]:
    """Complete, irredundant facet list of conv(vertices), in canonical form.

    The vertex list must be exact (rational entries) and span the full
    normalization subspace of its scenario; every returned inequality is
    satisfied by every vertex (checked exactly).
    """
    if not vertices:
        raise ValueError("need at least one vertex")
    s = vertices[0].scenario
    if any(v.scenario != s for v in vertices):
        raise ValueError("vertices must share a scenario")
    if not all(v.is_exact for v in vertices):
        raise ValueError("facet enumeration requires exact rational vertices")
    cols = _chart_columns(s)
    points = [tuple(v.values[c] for c in cols) for v in vertices]
    dim = affine_rank(points)
    if dim == 0:
        raise ValueError("degenerate input: vertices span a single point")
    if dim < len(cols):
        raise ValueError(
            f"vertices span an affine subspace of dimension {dim} < {len(cols)}; "
            "facet enumeration needs the full-dimensional vertex set"
        )
    halfspaces = facets_of_points(points)
    facets = []
    for normal, rhs in halfspaces:
        coeffs = [0] * s.n_entries
        for c, col in zip(normal, cols):
            coeffs[col] = c
        facets.append(CausalInequality(s, coeffs, rhs).canonical())
    for f in facets:
        for v in vertices:
            if f.evaluate(v) > f.bound:
                raise AssertionError("enumerated facet violated by an input vertex")
    facets.sort(key=lambda f: f.canonical_key())
    return facets


@dataclass(frozen=True)
class Relabeling:
    """One symmetry of the binary scenario: party swap, then input flips,
    then output flips conditioned on the (already flipped) inputs."""

    swap_parties: bool = False
    flip_x: int = 0
    flip_y: int = 0
    a_flip: tuple[int, int] = (0, 0)  # (a0, a1): a -> a ⊕ a1·x ⊕ a0
    b_flip: tuple[int, int] = (0, 0)

    def apply(self, x: int, y: int, a: int, b: int) -> tuple[int, int, int, int]:
        if self.swap_parties:
            x, y, a, b = y, x, b, a
        x ^= self.flip_x
        y ^= self.flip_y
        a ^= (self.a_flip[1] & x) ^ self.a_flip[0]
        b ^= (self.b_flip[1] & y) ^ self.b_flip[0]
        return x, y, a, b

    def permutation(self, s: Scenario) -> tuple[int, ...]:
        """Flat index map: entry i of the original lands at position perm[i]."""
        perm = [0] * s.n_entries
        for x, y, a, b in s.iter_xyab():
            xx, yy, aa, bb = self.apply(x, y, a, b)
            perm[s.index(x, y, a, b)] = s.index(xx, yy, aa, bb)
        return tuple(perm)


def relabeling_group(s: Scenario) -> list[Relabeling]:
    """All 128 relabelings of the binary scenario (distinct index actions)."""
    if not s.is_binary:
        raise UnsupportedScenarioError("the relabeling group is implemented for the binary scenario")
    group = []
    seen = set()
    for swap, fx, fy, a0, a1, b0, b1 in product((False, True), *([(0, 1)] * 6)):
        g = Relabeling(swap, fx, fy, (a0, a1), (b0, b1))
        perm = g.permutation(s)
        if perm in seen:
            raise AssertionError("relabeling parameterization is not faithful")
        seen.add(perm)
        group.append(g)
    return group


def relabel_table(t: CorrelationTable, g: Relabeling) -> CorrelationTable:
    perm = g.permutation(t.scenario)
    vals = [0] * t.scenario.n_entries
    for i, v in enumerate(t.values):
        vals[perm[i]] = v
    return CorrelationTable(t.scenario, vals)


def relabel_inequality(ineq: CausalInequality, g: Relabeling) -> CausalInequality:
    perm = g.permutation(ineq.scenario)
    coeffs = [0] * ineq.scenario.n_entries
    for i, c in enumerate(ineq.coeffs):
        coeffs[perm[i]] = c
    return CausalInequality(ineq.scenario, coeffs, ineq.bound)


@dataclass(frozen=True)
class FacetOrbit:
    family: str
    representative: CausalInequality
    members: tuple[CausalInequality, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def _family_keys(s: Scenario) -> dict[str, set]:
    nonneg = {
        nonnegativity_inequality(s, x, y, a, b).canonical_key() for x, y, a, b in s.iter_xyab()
    }
    flips = list(product((0, 1), repeat=4))
    gyni = {gyni_inequality(*f).canonical_key() for f in flips}
    lgyni = {lgyni_inequality(*f).canonical_key() for f in flips}
    return {"nonnegativity": nonneg, "gyni": gyni, "lgyni": lgyni}


def classify_facets(facets: Sequence[CausalInequality]) -> list[FacetOrbit]:
    """Partition facets into orbits of the relabeling group.

    Each orbit is labeled by comparing canonical coefficient tensors against
    the three known binary families (nonnegativity, GYNI type, LGYNI type);
    anything else is labeled "other".  The returned representative is the
    member with the lexicographically smallest canonical form.
    """
    if not facets:
        return []
    s = facets[0].scenario
    group = relabeling_group(s)
    by_key = {f.canonical_key(): f.canonical() for f in facets}
    if len(by_key) != len(facets):
        raise ValueError("facet list contains duplicates (up to normalization)")
    families = _family_keys(s)

    orbits = []
    unassigned = dict(by_key)
    while unassigned:
        key = min(unassigned)
        seed = unassigned[key]
        orbit_keys = set()
        for g in group:
            image_key = relabel_inequality(seed, g).canonical_key()
            if image_key not in by_key:
                raise AssertionError(
                    "relabeling image of a facet is missing from the facet list"
                )
            orbit_keys.add(image_key)
        members = tuple(by_key[k] for k in sorted(orbit_keys))
        family = next((name for name, keys in families.items() if orbit_keys <= keys), "other")
        orbits.append(FacetOrbit(family=family, representative=members[0], members=members))
        for k in orbit_keys:
            unassigned.pop(k, None)
    orbits.sort(key=lambda o: (o.family, o.representative.canonical_key()))
    return orbits
