"""Vertex enumeration of the causal polytope.

The vertices are exactly the deterministic strategies compatible with one
of the two causal orders; non-signaling strategies are compatible with both
and must be counted once.  For cardinalities (m_A, m_B, k_A, k_B) the count
is k_A^m_A k_B^(m_A m_B) + k_A^(m_A m_B) k_B^m_B - k_A^m_A k_B^m_B.
"""

from __future__ import annotations

from itertools import product

from .tables import CausalOrder, CorrelationTable, DeterministicStrategy, Scenario

DEFAULT_VERTEX_LIMIT = 10**6


class ScenarioTooLargeError(ValueError):
    """Enumeration refused: the vertex count exceeds the configured limit."""


def vertex_count(s: Scenario) -> int:
    """Closed-form number of distinct deterministic causal correlations."""
    m_a, m_b, k_a, k_b = s.m_a, s.m_b, s.k_a, s.k_b
    return k_a**m_a * k_b ** (m_a * m_b) + k_a ** (m_a * m_b) * k_b**m_b - k_a**m_a * k_b**m_b


def enumerate_vertices(
    s: Scenario,
    limit: int = DEFAULT_VERTEX_LIMIT,
) -> list[tuple[DeterministicStrategy, CorrelationTable]]:
    """All polytope vertices as (strategy, 0/1 table) pairs.

    Strategies where Bob acts first but Alice's response ignores Bob's input
    are non-signaling duplicates of Alice-first strategies and are skipped.
    """
    count = vertex_count(s)
    if count > limit:
        raise ScenarioTooLargeError(f"scenario {s} has {count} vertices, above the limit {limit}")

    out: list[tuple[DeterministicStrategy, CorrelationTable]] = []
    # Alice first: a = alpha(x), b = beta(x, y)
    for alpha in product(range(s.k_a), repeat=s.m_a):
        for beta_flat in product(range(s.k_b), repeat=s.m_a * s.m_b):
            beta = tuple(beta_flat[x * s.m_b : (x + 1) * s.m_b] for x in range(s.m_a))
            strat = DeterministicStrategy(CausalOrder.A_FIRST, alpha, beta)
            out.append((strat, strat.table(s)))
    # Bob first: b = beta(y), a = alpha(x, y); skip y-independent alpha (non-signaling)
    for beta in product(range(s.k_b), repeat=s.m_b):
        for alpha_flat in product(range(s.k_a), repeat=s.m_a * s.m_b):
            alpha = tuple(alpha_flat[x * s.m_b : (x + 1) * s.m_b] for x in range(s.m_a))
            if all(all(row[y] == row[0] for y in range(s.m_b)) for row in alpha):
                continue
            strat = DeterministicStrategy(CausalOrder.B_FIRST, beta, alpha)
            out.append((strat, strat.table(s)))

    if len(out) != count:
        raise AssertionError(f"enumerated {len(out)} vertices, closed form gives {count}")
    return out


def vertex_tables(s: Scenario, limit: int = DEFAULT_VERTEX_LIMIT) -> list[CorrelationTable]:
    return [t for _, t in enumerate_vertices(s, limit=limit)]
