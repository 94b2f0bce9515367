"""Causal inequalities: builders, exact bounds and facet certification.

An inequality is the statement sum_{x,y,a,b} c(x,y,a,b) p(a,b|x,y) <= bound.
Adding any multiple of a normalization constraint sum_{a,b} p(a,b|x,y) = 1
yields an equivalent inequality, so comparisons go through a canonical form:
shift each (x,y) block so its minimum coefficient is zero, then rescale to a
primitive integer tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from ._exact import Rational, affine_rank
from .tables import CorrelationTable, DeterministicStrategy, Scenario
from .vertices import DEFAULT_VERTEX_LIMIT, enumerate_vertices


@dataclass(frozen=True)
class CausalInequality:
    """Rational linear functional with an upper bound on correlation tables."""

    scenario: Scenario
    coeffs: tuple
    bound: Rational

    def __init__(self, scenario: Scenario, coeffs: Sequence, bound: Rational):
        coeffs = tuple(coeffs)
        if len(coeffs) != scenario.n_entries:
            raise ValueError(f"expected {scenario.n_entries} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "scenario", scenario)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "bound", bound)

    def coeff(self, x: int, y: int, a: int, b: int):
        return self.coeffs[self.scenario.index(x, y, a, b)]

    def evaluate(self, t: CorrelationTable):
        if t.scenario != self.scenario:
            raise ValueError("table scenario does not match inequality scenario")
        return sum(c * p for c, p in zip(self.coeffs, t.values) if c)

    def evaluate_strategy(self, strat: DeterministicStrategy):
        s = self.scenario
        total = 0
        for x, y in s.iter_xy():
            a, b = strat.outputs(x, y)
            total += self.coeffs[s.index(x, y, a, b)]
        return total

    def is_satisfied_by(self, t: CorrelationTable) -> bool:
        return self.evaluate(t) <= self.bound

    def canonical(self) -> "CausalInequality":
        """Unique representative modulo normalization shifts and positive scale."""
        s = self.scenario
        coeffs = [Fraction(c) for c in self.coeffs]
        bound = Fraction(self.bound)
        for x, y in s.iter_xy():
            block = [s.index(x, y, a, b) for a in range(s.k_a) for b in range(s.k_b)]
            t = min(coeffs[i] for i in block)
            if t:
                for i in block:
                    coeffs[i] -= t
                bound -= t
        entries = coeffs + [bound]
        denom = 1
        for e in entries:
            denom = denom * e.denominator // gcd(denom, e.denominator)
        ints = [int(e * denom) for e in entries]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        return CausalInequality(s, tuple(ints[:-1]), ints[-1])

    def canonical_key(self) -> tuple:
        c = self.canonical()
        return (c.coeffs, c.bound)


def nonnegativity_inequality(s: Scenario, x: int, y: int, a: int, b: int) -> CausalInequality:
    """The trivial facet p(a,b|x,y) >= 0, written as -p(a,b|x,y) <= 0."""
    coeffs = [0] * s.n_entries
    coeffs[s.index(x, y, a, b)] = -1
    return CausalInequality(s, coeffs, 0)


def gyni_inequality(a0: int = 0, a1: int = 0, b0: int = 0, b1: int = 0) -> CausalInequality:
    """Guess-your-neighbor's-input facet family of the binary causal polytope.

    Winning condition (uniform inputs): a ⊕ a1·x ⊕ a0 = y and
    b ⊕ b1·y ⊕ b0 = x; causal bound 1/2.  The identity labels (0,0,0,0)
    give p(a=y, b=x) <= 1/2.
    """
    s = Scenario(2, 2, 2, 2)
    q = Fraction(1, 4)
    coeffs = [0] * s.n_entries
    for x, y, a, b in s.iter_xyab():
        if (a ^ (a1 & x) ^ a0) == y and (b ^ (b1 & y) ^ b0) == x:
            coeffs[s.index(x, y, a, b)] = q
    return CausalInequality(s, coeffs, Fraction(1, 2))


def lgyni_inequality(a0: int = 0, a1: int = 0, b0: int = 0, b1: int = 0) -> CausalInequality:
    """Lazy-guess facet family: guessing is only scored on relabeled input 1.

    Winning condition: (x ⊕ a1)(a ⊕ a0 ⊕ y) = 0 and (y ⊕ b1)(b ⊕ b0 ⊕ x) = 0;
    causal bound 3/4.
    """
    s = Scenario(2, 2, 2, 2)
    q = Fraction(1, 4)
    coeffs = [0] * s.n_entries
    for x, y, a, b in s.iter_xyab():
        if (x ^ a1) * (a ^ a0 ^ y) == 0 and (y ^ b1) * (b ^ b0 ^ x) == 0:
            coeffs[s.index(x, y, a, b)] = q
    return CausalInequality(s, coeffs, Fraction(3, 4))


def weighted_signaling_inequality(alpha: Rational, beta: Rational, bound: Rational) -> CausalInequality:
    """alpha * p(a=y) + beta * p(b=x) <= bound in the binary scenario.

    With weights (±1/2, ±1/2) these are the four inequalities bounding the
    projection of the causal polytope onto the signaling plane (bounds 3/4,
    1/4, 1/4, -1/4).
    """
    s = Scenario(2, 2, 2, 2)
    alpha, beta = Fraction(alpha), Fraction(beta)
    coeffs = [0] * s.n_entries
    for x, y, a, b in s.iter_xyab():
        c = (alpha if a == y else 0) + (beta if b == x else 0)
        coeffs[s.index(x, y, a, b)] = c / 4
    return CausalInequality(s, coeffs, Fraction(bound))


def affine_dimension(points: Sequence[CorrelationTable]) -> int:
    """Exact dimension of the affine hull of rational correlation tables."""
    if not points:
        raise ValueError("need at least one point")
    if not all(p.is_exact for p in points):
        raise ValueError("affine dimension requires exact rational tables")
    return affine_rank([p.values for p in points])


def causal_bound(ineq: CausalInequality, limit: int = DEFAULT_VERTEX_LIMIT) -> Fraction:
    """Exact maximum of the inequality's left-hand side over causal correlations.

    The causal polytope is the convex hull of its deterministic vertices, so
    the maximum over vertices is the causal bound.
    """
    best = None
    for strat, _ in enumerate_vertices(ineq.scenario, limit=limit):
        v = ineq.evaluate_strategy(strat)
        if best is None or v > best:
            best = v
    return Fraction(best)


@dataclass(frozen=True)
class FacetReport:
    saturating_vertex_count: int
    saturating_affine_dim: int
    polytope_dim: int
    max_value: Fraction
    is_facet: bool


def facet_report(ineq: CausalInequality, limit: int = DEFAULT_VERTEX_LIMIT) -> FacetReport:
    """Check whether an inequality supports a facet of the causal polytope.

    Counts the vertices that attain the bound and computes the exact affine
    dimension of that saturating set; the inequality is a facet iff this
    dimension is one below the polytope dimension.
    """
    vertices = enumerate_vertices(ineq.scenario, limit=limit)
    values = [(ineq.evaluate_strategy(strat), table) for strat, table in vertices]
    max_value = max(v for v, _ in values)
    if max_value > ineq.bound:
        raise ValueError(
            f"inequality is violated by a causal vertex (max {max_value} > bound {ineq.bound})"
        )
    saturating = [t.values for v, t in values if v == ineq.bound]
    polytope_dim = affine_rank([t.values for _, t in values])
    sat_dim = affine_rank(saturating) if saturating else -1
    return FacetReport(
        saturating_vertex_count=len(saturating),
        saturating_affine_dim=sat_dim,
        polytope_dim=polytope_dim,
        max_value=Fraction(max_value),
        is_facet=bool(saturating) and sat_dim == polytope_dim - 1,
    )


def _frac_str(v: Rational) -> str:
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def _frac_parse(text: str) -> Fraction:
    return Fraction(text)


def inequality_to_json(ineq: CausalInequality) -> dict:
    s = ineq.scenario
    coeffs = {}
    for x, y, a, b in s.iter_xyab():
        c = ineq.coeffs[s.index(x, y, a, b)]
        if c:
            coeffs[f"{x},{y},{a},{b}"] = _frac_str(c)
    return {
        "scenario": [s.m_a, s.m_b, s.k_a, s.k_b],
        "coeffs": coeffs,
        "bound": _frac_str(ineq.bound),
    }


def inequality_from_json(data: dict) -> CausalInequality:
    s = Scenario(*(int(v) for v in data["scenario"]))
    coeffs = [0] * s.n_entries
    for key, val in data["coeffs"].items():
        x, y, a, b = (int(p) for p in key.split(","))
        coeffs[s.index(x, y, a, b)] = _frac_parse(val)
    return CausalInequality(s, coeffs, _frac_parse(data["bound"]))
