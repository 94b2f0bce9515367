"""Alternating maximization of correlation functionals over process matrices.

Each restart draws random instruments for both parties and then cycles
through three semidefinite steps (process matrix, Alice's instruments,
Bob's instruments) until the objective stops improving.  Every step can
only increase the objective, so each restart converges to a local maximum;
the returned best-over-restarts value is a lower bound on the global one,
never a certificate.
"""

from __future__ import annotations

import concurrent.futures
import logging
from dataclasses import dataclass, field
from math import cos, pi, sin
from typing import Sequence

import numpy as np

from .linalg import hermitize
from .polytope import CorrelationTable, Scenario
from .process import (
    InstrumentSet,
    ProcessDims,
    ProcessMatrix,
    correlation,
    random_instruments,
    validate_instrument_set,
    validate_process_matrix,
)
from .sdp import (
    SdpOptions,
    build_party_step,
    build_w_step,
    instrument_feasible_projector,
    instrument_set_from_blocks,
    polish_to_feasible,
    process_feasible_projector,
    solve,
    warm_start_from,
)

logger = logging.getLogger(__name__)

BINARY = Scenario(2, 2, 2, 2)

CYCLE_LIMIT = 200
CYCLE_TOL = 1e-7
TRIPLE_TOL = 1e-8


class SeeSawError(RuntimeError):
    """Every restart failed inside the semidefinite subsolver."""


@dataclass(frozen=True)
class Objective:
    """Linear functional sum coeff(x,y,a,b) p(a,b|x,y) to maximize."""

    coeffs: np.ndarray
    label: str

    @property
    def scenario(self) -> Scenario:
        m_a, m_b, k_a, k_b = self.coeffs.shape
        return Scenario(m_a, m_b, k_a, k_b)

    @property
    def algebraic_max(self) -> float:
        return float(np.sum(np.maximum(self.coeffs, 0.0)))

    def evaluate(self, table: CorrelationTable) -> float:
        s = self.scenario
        if table.scenario != s:
            raise ValueError("table scenario does not match objective")
        total = 0.0
        for x, y, a, b in s.iter_xyab():
            c = self.coeffs[x, y, a, b]
            if c:
                total += c * float(table.values[s.index(x, y, a, b)])
        return total


def objective_gyni() -> Objective:
    """Mutual input guessing with uniform inputs: (1/4) sum p(a=y, b=x|x,y)."""
    coeffs = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            coeffs[x, y, y, x] = 0.25
    return Objective(coeffs, "gyni")


def objective_lgyni() -> Objective:
    """Lazy variant: guesses are only scored when the guesser's input is 1."""
    coeffs = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    if x * (a ^ y) == 0 and y * (b ^ x) == 0:
                        coeffs[x, y, a, b] = 0.25
    return Objective(coeffs, "lgyni")


def objective_weighted(alpha: float, beta: float) -> Objective:
    """alpha p(a=y) + beta p(b=x) with uniformly weighted inputs."""
    coeffs = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    coeffs[x, y, a, b] = (alpha / 4 if a == y else 0.0) + (
                        beta / 4 if b == x else 0.0
                    )
    return Objective(coeffs, f"weighted({alpha:g},{beta:g})")


def objective_custom(coeffs: np.ndarray, label: str = "custom") -> Objective:
    return Objective(np.asarray(coeffs, dtype=float), label)


def objective_from_inequality(ineq) -> Objective:
    """Use a causal inequality's coefficient tensor as an objective."""
    s = ineq.scenario
    coeffs = np.zeros((s.m_a, s.m_b, s.k_a, s.k_b))
    for x, y, a, b in s.iter_xyab():
        coeffs[x, y, a, b] = float(ineq.coeffs[s.index(x, y, a, b)])
    return Objective(coeffs, "custom")


def default_restarts(dims: ProcessDims) -> int:
    d = max(dims.factors)
    if d <= 2:
        return 50
    if d == 3:
        return 20
    return 10


@dataclass
class SeeSawOptions:
    cycle_limit: int = CYCLE_LIMIT
    cycle_tol: float = CYCLE_TOL
    sdp: SdpOptions = field(default_factory=lambda: SdpOptions(tol=1e-9))
    threads: int = 1


@dataclass
class RestartOutcome:
    values: list[float]
    w: ProcessMatrix | None
    a_set: InstrumentSet | None
    b_set: InstrumentSet | None
    failed: bool = False

    @property
    def best(self) -> float:
        return self.values[-1] if self.values else -np.inf

    @property
    def cycles(self) -> int:
        return len(self.values)


@dataclass
class SeeSawResult:
    """Best triple found over all restarts; a lower bound on the optimum."""

    objective: str
    dims: ProcessDims
    seed: int
    best_value: float
    w: ProcessMatrix
    a_set: InstrumentSet
    b_set: InstrumentSet
    per_restart_values: list[float]
    iterations_per_restart: list[int]
    restart_value_traces: list[list[float]]
    bound_kind: str = "lower bound"

    @property
    def table(self) -> CorrelationTable:
        return correlation(self.w, self.a_set, self.b_set, tol=TRIPLE_TOL)


def _objective_value(
    obj: Objective, w: ProcessMatrix, a_set: InstrumentSet, b_set: InstrumentSet
) -> float:
    # direct trace evaluation; intermediate iterates are only feasible to
    # solver tolerance, so no probability-table validation here
    from .linalg import kron

    total = 0.0
    for x, inst_a in enumerate(a_set.instruments):
        for y, inst_b in enumerate(b_set.instruments):
            for a, ma in enumerate(inst_a.maps):
                for b, mb in enumerate(inst_b.maps):
                    c = obj.coeffs[x, y, a, b]
                    if c:
                        total += c * float(np.trace(kron(ma, mb) @ w.w).real)
    return total


def _run_restart(
    obj: Objective,
    dims: ProcessDims,
    seed: np.random.SeedSequence,
    options: SeeSawOptions,
) -> RestartOutcome:
    rng = np.random.default_rng(seed)
    a_set = random_instruments(dims.d_ai, dims.d_ao, rng, obj.scenario.m_a, obj.scenario.k_a)
    b_set = random_instruments(dims.d_bi, dims.d_bo, rng, obj.scenario.m_b, obj.scenario.k_b)
    w: ProcessMatrix | None = None
    values: list[float] = []
    prev = -np.inf
    warm_w = warm_a = warm_b = None
    try:
        for _ in range(options.cycle_limit):
            prob_w = build_w_step(obj.coeffs, a_set, b_set, dims)
            sol_w = solve(prob_w, options.sdp, warm_start=warm_w)
            if sol_w.status == "infeasible":
                raise SeeSawError("process step reported infeasible")
            warm_w = warm_start_from(sol_w, prob_w)
            w = ProcessMatrix(dims, hermitize(sol_w.blocks[0]))

            prob_a = build_party_step(obj.coeffs, w, b_set, "alice")
            sol_a = solve(prob_a, options.sdp, warm_start=warm_a)
            if sol_a.status == "infeasible":
                raise SeeSawError("instrument step reported infeasible")
            warm_a = warm_start_from(sol_a, prob_a)
            a_set = instrument_set_from_blocks(prob_a, sol_a.blocks)

            prob_b = build_party_step(obj.coeffs, w, a_set, "bob")
            sol_b = solve(prob_b, options.sdp, warm_start=warm_b)
            if sol_b.status == "infeasible":
                raise SeeSawError("instrument step reported infeasible")
            warm_b = warm_start_from(sol_b, prob_b)
            b_set = instrument_set_from_blocks(prob_b, sol_b.blocks)

            value = _objective_value(obj, w, a_set, b_set)
            values.append(value)
            if value - prev < options.cycle_tol:
                break
            prev = value
    except (SeeSawError, ValueError) as exc:
        logger.warning("restart discarded: %s", exc)
        return RestartOutcome(values=[], w=None, a_set=None, b_set=None, failed=True)
    return RestartOutcome(values=values, w=w, a_set=a_set, b_set=b_set)


def _restart_worker(args) -> RestartOutcome:
    obj, dims, seed, options = args
    return _run_restart(obj, dims, seed, options)


def _polish_triple(
    w: ProcessMatrix, a_set: InstrumentSet, b_set: InstrumentSet
) -> tuple[ProcessMatrix, InstrumentSet, InstrumentSet]:
    """Squeeze solver slack out of a triple so the 1e-8 validators pass.

    Alternating projections between the affine constraints and the PSD cone;
    the objective changes by at most the initial feasibility gap.
    """
    from .process import Instrument

    dims = w.dims
    w_blocks = polish_to_feasible(process_feasible_projector(dims), [hermitize(w.w)])
    w = ProcessMatrix(dims, hermitize(w_blocks[0]))
    polished_sets = []
    for party, d_in, d_out in ((a_set, dims.d_ai, dims.d_ao), (b_set, dims.d_bi, dims.d_bo)):
        k = party.n_outcomes
        projector = instrument_feasible_projector(d_in, d_out, party.n_inputs, k)
        blocks = [hermitize(m) for inst in party.instruments for m in inst.maps]
        blocks = polish_to_feasible(projector, blocks)
        instruments = [
            Instrument([hermitize(b) for b in blocks[x * k : (x + 1) * k]])
            for x in range(party.n_inputs)
        ]
        polished_sets.append(InstrumentSet(d_in, d_out, instruments))
    return w, polished_sets[0], polished_sets[1]


def optimize(
    obj: Objective,
    dims: ProcessDims,
    restarts: int | None = None,
    seed: int = 0,
    options: SeeSawOptions | None = None,
) -> SeeSawResult:
    """Best value of the objective over (W, instruments) found by restarts.

    Deterministic for fixed (seed, dims, objective, options): restart seeds
    are spawned from the master seed, and restarts are aggregated by index
    regardless of the number of worker threads.
    """
    options = options or SeeSawOptions()
    if restarts is None:
        restarts = default_restarts(dims)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    jobs = [(obj, dims, s, options) for s in seeds]
    if options.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=options.threads) as pool:
            outcomes = list(pool.map(_restart_worker, jobs))
    else:
        outcomes = [_run_restart(*job) for job in jobs]

    usable = [o for o in outcomes if not o.failed and o.w is not None]
    if not usable:
        raise SeeSawError("all restarts failed")
    best = max(usable, key=lambda o: o.best)
    w, a_set, b_set = _polish_triple(best.w, best.a_set, best.b_set)

    report = validate_process_matrix(w, tol=TRIPLE_TOL)
    if not report.passed:
        raise SeeSawError(f"optimized process matrix failed validation: {report.residuals}")
    for party in (a_set, b_set):
        for rep in validate_instrument_set(party, tol=TRIPLE_TOL):
            if not rep.passed:
                raise SeeSawError("optimized instruments failed validation")
    best_value = obj.evaluate(correlation(w, a_set, b_set, tol=TRIPLE_TOL))

    return SeeSawResult(
        objective=obj.label,
        dims=dims,
        seed=seed,
        best_value=best_value,
        w=w,
        a_set=a_set,
        b_set=b_set,
        per_restart_values=[o.best for o in outcomes],
        iterations_per_restart=[o.cycles for o in outcomes],
        restart_value_traces=[o.values for o in outcomes],
    )


@dataclass
class BoundaryPoint:
    theta: float
    alpha: float
    beta: float
    value: float
    pa: float
    pb: float
    result: SeeSawResult


def boundary_scan(
    dims: ProcessDims,
    n_angles: int,
    restarts: int | None = None,
    seed: int = 0,
    options: SeeSawOptions | None = None,
) -> list[BoundaryPoint]:
    """Scan the reachable region in the (p(a=y), p(b=x)) plane.

    For each angle theta the weighted objective cos(theta) p(a=y) +
    sin(theta) p(b=x) is maximized and the optimizer's correlation projected
    onto the plane.  Points are reported in angle order; they trace a lower
    bound for the boundary of the reachable set at these dimensions.
    """
    from .polytope import project_signaling_plane

    if n_angles < 4:
        raise ValueError("n_angles must be >= 4")
    master = np.random.SeedSequence(seed)
    angle_seeds = master.spawn(n_angles)
    points = []
    for i in range(n_angles):
        theta = 2 * pi * i / n_angles
        alpha, beta = cos(theta), sin(theta)
        obj = objective_weighted(alpha, beta)
        # spawn keys are deterministic per angle; pass entropy through as int
        sub_seed = int(angle_seeds[i].generate_state(1, np.uint32)[0])
        result = optimize(obj, dims, restarts=restarts, seed=sub_seed, options=options)
        pa, pb = project_signaling_plane(result.table)
        points.append(
            BoundaryPoint(theta=theta, alpha=alpha, beta=beta, value=result.best_value, pa=pa, pb=pb, result=result)
        )
    return points
