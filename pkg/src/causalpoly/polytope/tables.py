"""Scenarios, correlation tables and causally ordered deterministic strategies.

A scenario fixes the input/output cardinalities (m_A, m_B, k_A, k_B).  A
correlation table stores the conditional distribution p(a,b|x,y) flattened
with the row-major index ((x*m_B + y)*k_A + a)*k_B + b; entries are exact
rationals (int / Fraction) for polytope work or floats for process-matrix
numerics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

from ._exact import Rational

FLOAT_TOL = 1e-12


class CausalOrder(enum.Enum):
    A_FIRST = "A<B"
    B_FIRST = "B<A"


@dataclass(frozen=True)
class Scenario:
    """Input/output cardinalities of a bipartite correlation experiment."""

    m_a: int
    m_b: int
    k_a: int
    k_b: int

    def __post_init__(self):
        for name in ("m_a", "m_b", "k_a", "k_b"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def n_entries(self) -> int:
        return self.m_a * self.m_b * self.k_a * self.k_b

    @property
    def is_binary(self) -> bool:
        return (self.m_a, self.m_b, self.k_a, self.k_b) == (2, 2, 2, 2)

    def index(self, x: int, y: int, a: int, b: int) -> int:
        return ((x * self.m_b + y) * self.k_a + a) * self.k_b + b

    def iter_xyab(self) -> Iterator[tuple[int, int, int, int]]:
        return product(range(self.m_a), range(self.m_b), range(self.k_a), range(self.k_b))

    def iter_xy(self) -> Iterator[tuple[int, int]]:
        return product(range(self.m_a), range(self.m_b))

    @classmethod
    def from_string(cls, text: str) -> "Scenario":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"scenario must be 'm_A,m_B,k_A,k_B', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self) -> str:
        return f"{self.m_a},{self.m_b},{self.k_a},{self.k_b}"


BINARY = Scenario(2, 2, 2, 2)


def _is_exact(values: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


@dataclass(frozen=True)
class CorrelationTable:
    """Conditional distribution p(a,b|x,y), nonnegative and normalized."""

    scenario: Scenario
    values: tuple

    def __init__(self, scenario: Scenario, values: Sequence, validate: bool = True, tol: float = FLOAT_TOL):
        values = tuple(values)
        object.__setattr__(self, "scenario", scenario)
        object.__setattr__(self, "values", values)
        if len(values) != scenario.n_entries:
            raise ValueError(f"expected {scenario.n_entries} entries, got {len(values)}")
        if validate:
            self._validate(tol)

    def _validate(self, tol: float) -> None:
        s = self.scenario
        exact = self.is_exact
        for v in self.values:
            if exact:
                if v < 0:
                    raise ValueError(f"negative probability {v}")
            elif v < -tol:
                raise ValueError(f"negative probability {v}")
        for x, y in s.iter_xy():
            total = sum(self.values[s.index(x, y, a, b)] for a in range(s.k_a) for b in range(s.k_b))
            if exact:
                if total != 1:
                    raise ValueError(f"block (x={x}, y={y}) sums to {total}, not 1")
            elif abs(total - 1) > tol * s.k_a * s.k_b:
                raise ValueError(f"block (x={x}, y={y}) sums to {total}, not 1")

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.values)

    def p(self, x: int, y: int, a: int, b: int):
        return self.values[self.scenario.index(x, y, a, b)]

    def marginal_a(self, x: int, y: int, a: int):
        s = self.scenario
        return sum(self.values[s.index(x, y, a, b)] for b in range(s.k_b))

    def marginal_b(self, x: int, y: int, b: int):
        s = self.scenario
        return sum(self.values[s.index(x, y, a, b)] for a in range(s.k_a))

    def as_floats(self) -> "CorrelationTable":
        return CorrelationTable(self.scenario, tuple(float(v) for v in self.values), validate=False)


def uniform_table(scenario: Scenario) -> CorrelationTable:
    p = Fraction(1, scenario.k_a * scenario.k_b)
    return CorrelationTable(scenario, (p,) * scenario.n_entries)


def table_from_function(scenario: Scenario, f: Callable[[int, int, int, int], Rational]) -> CorrelationTable:
    vals = [0] * scenario.n_entries
    for x, y, a, b in scenario.iter_xyab():
        vals[scenario.index(x, y, a, b)] = f(x, y, a, b)
    return CorrelationTable(scenario, vals)


@dataclass(frozen=True)
class SignalingReport:
    signals_to_a: bool
    signals_to_b: bool


def check_signaling(t: CorrelationTable, tol: float = FLOAT_TOL) -> SignalingReport:
    """Flag which directions of signaling the correlation exhibits.

    ``signals_to_a`` is true iff some marginal p(a|x,y) depends on y, i.e.
    Bob's input is readable from Alice's side; symmetric for ``signals_to_b``.
    """
    s = t.scenario
    exact = t.is_exact

    def differs(u, v) -> bool:
        return u != v if exact else abs(u - v) > tol

    to_a = any(
        differs(t.marginal_a(x, y, a), t.marginal_a(x, 0, a))
        for x in range(s.m_a)
        for y in range(1, s.m_b)
        for a in range(s.k_a)
    )
    to_b = any(
        differs(t.marginal_b(x, y, b), t.marginal_b(0, y, b))
        for x in range(1, s.m_a)
        for y in range(s.m_b)
        for b in range(s.k_b)
    )
    return SignalingReport(signals_to_a=to_a, signals_to_b=to_b)


def q_mix(q: Rational, p_ab: CorrelationTable, p_ba: CorrelationTable) -> CorrelationTable:
    """Convex mixture q * p_ab + (1-q) * p_ba of causally ordered tables.

    ``p_ab`` must not signal to Alice (it describes runs where Alice acts
    first) and ``p_ba`` must not signal to Bob.  The mixture is then a causal
    correlation by construction.
    """
    if p_ab.scenario != p_ba.scenario:
        raise ValueError("mixed tables must share a scenario")
    if not 0 <= q <= 1:
        raise ValueError(f"q must be in [0, 1], got {q}")
    if check_signaling(p_ab).signals_to_a:
        raise ValueError("first table signals to Alice; not compatible with Alice acting first")
    if check_signaling(p_ba).signals_to_b:
        raise ValueError("second table signals to Bob; not compatible with Bob acting first")
    one_minus = 1 - q if isinstance(q, (int, Fraction)) else 1.0 - q
    vals = tuple(q * u + one_minus * v for u, v in zip(p_ab.values, p_ba.values))
    return CorrelationTable(p_ab.scenario, vals)


def project_signaling_plane(t: CorrelationTable) -> tuple[float, float]:
    """Coordinates (p(a=y), p(b=x)) of the two-signaling-direction plane.

    Inputs are averaged uniformly: pa = (1/4) sum over x,y,a,b of
    [a == y] p(a,b|x,y), and symmetrically pb with [b == x].
    """
    s = t.scenario
    if not s.is_binary:
        raise ValueError("signaling-plane projection is defined for the binary scenario")
    pa = sum(t.values[s.index(x, y, a, b)] for x, y, a, b in s.iter_xyab() if a == y)
    pb = sum(t.values[s.index(x, y, a, b)] for x, y, a, b in s.iter_xyab() if b == x)
    return float(pa) / 4.0, float(pb) / 4.0


@dataclass(frozen=True)
class DeterministicStrategy:
    """A causally ordered deterministic strategy.

    The first party answers from its own input only; the second party sees
    both inputs.  ``first_response[u]`` is the first party's output on input
    ``u``; ``second_response[x][y]`` is the second party's output (indexed by
    Alice's input then Bob's, regardless of order).
    """

    order: CausalOrder
    first_response: tuple[int, ...]
    second_response: tuple[tuple[int, ...], ...]

    def outputs(self, x: int, y: int) -> tuple[int, int]:
        if self.order is CausalOrder.A_FIRST:
            return self.first_response[x], self.second_response[x][y]
        return self.second_response[x][y], self.first_response[y]

    def table(self, scenario: Scenario) -> CorrelationTable:
        vals = [0] * scenario.n_entries
        for x, y in scenario.iter_xy():
            a, b = self.outputs(x, y)
            vals[scenario.index(x, y, a, b)] = 1
        return CorrelationTable(scenario, vals)
