"""Process-matrix calculus for two parties.

A process matrix W is a Hermitian operator on the four-factor space
A_I ⊗ A_O ⊗ B_I ⊗ B_O (always in that order, row-major flattening) that
yields valid probabilities

    p(a,b|x,y) = tr[(M_{a|x} ⊗ M_{b|y}) W]

for every pair of instruments.  Instruments are collections of CP maps in
the (unnormalized) channel-operator representation

    CJ(E) = sum_{ij} |i><j| ⊗ E(|i><j|),

which sends the identity channel to 2|Φ+><Φ+| and a measure-in-basis /
re-prepare map to |a><a| ⊗ |ψ><ψ|.  Validity of W is equivalent to five
conditions: positivity, trace d_AO·d_BO, two reduced-operator conditions
(tracing out one party must leave the identity on the other party's output
factor) and the exclusion of terms acting nontrivially on both output
factors at once (which would create an action loop between the parties).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .linalg import (
    TensorSpace,
    eye,
    frobenius,
    hermitize,
    is_hermitian,
    kron,
    kron_all,
    matrix_from_json,
    matrix_to_json,
    min_eigenvalue,
    partial_trace,
    pauli_x,
    pauli_y,
    pauli_z,
    permute_factors,
    replace_with_identity,
)

# Factor indices within the global A_I ⊗ A_O ⊗ B_I ⊗ B_O order.
A_IN, A_OUT, B_IN, B_OUT = 0, 1, 2, 3

DEFAULT_TOL = 1e-9


class ValidationError(ValueError):
    """A process matrix or instrument failed validation."""


@dataclass(frozen=True)
class ProcessDims:
    """Hilbert-space dimensions of the four factors."""

    d_ai: int
    d_ao: int
    d_bi: int
    d_bo: int

    def __post_init__(self):
        if min(self.d_ai, self.d_ao, self.d_bi, self.d_bo) < 1:
            raise ValueError("all dimensions must be >= 1")

    @classmethod
    def uniform(cls, d: int) -> "ProcessDims":
        return cls(d, d, d, d)

    @property
    def factors(self) -> tuple[int, int, int, int]:
        return (self.d_ai, self.d_ao, self.d_bi, self.d_bo)

    @property
    def space(self) -> TensorSpace:
        return TensorSpace(self.factors)

    @property
    def total(self) -> int:
        return self.d_ai * self.d_ao * self.d_bi * self.d_bo

    @property
    def target_trace(self) -> float:
        return float(self.d_ao * self.d_bo)


@dataclass(frozen=True)
class ProcessMatrix:
    dims: ProcessDims
    w: np.ndarray

    def __post_init__(self):
        n = self.dims.total
        if self.w.shape != (n, n):
            raise ValueError(f"matrix shape {self.w.shape} does not match dims {self.dims}")
        if not is_hermitian(self.w):
            raise ValidationError("process matrix must be Hermitian")


@dataclass(frozen=True)
class Instrument:
    """CP maps of one operation, indexed by the classical outcome."""

    maps: tuple[np.ndarray, ...]

    def __init__(self, maps: Iterable[np.ndarray]):
        object.__setattr__(self, "maps", tuple(np.asarray(m, dtype=complex) for m in maps))
        if not self.maps:
            raise ValueError("instrument needs at least one outcome")

    @property
    def n_outcomes(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class InstrumentSet:
    """One instrument per classical input, all on the same in/out factors."""

    d_in: int
    d_out: int
    instruments: tuple[Instrument, ...]

    def __init__(self, d_in: int, d_out: int, instruments: Iterable[Instrument]):
        object.__setattr__(self, "d_in", int(d_in))
        object.__setattr__(self, "d_out", int(d_out))
        object.__setattr__(self, "instruments", tuple(instruments))
        n = self.d_in * self.d_out
        for inst in self.instruments:
            for m in inst.maps:
                if m.shape != (n, n):
                    raise ValueError(f"map shape {m.shape} does not match dims ({self.d_in},{self.d_out})")

    @property
    def n_inputs(self) -> int:
        return len(self.instruments)

    @property
    def n_outcomes(self) -> int:
        return self.instruments[0].n_outcomes


@dataclass(frozen=True)
class ProcessValidityReport:
    """Residual of each validity condition; pass iff all are within tol."""

    min_eig: float
    trace_residual: float
    reduced_alice_residual: float
    reduced_bob_residual: float
    loop_residual: float
    tol: float

    @property
    def residuals(self) -> dict[str, float]:
        return {
            "psd": max(0.0, -self.min_eig),
            "trace": self.trace_residual,
            "reduced_alice": self.reduced_alice_residual,
            "reduced_bob": self.reduced_bob_residual,
            "loop": self.loop_residual,
        }

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())


def validate_process_matrix(
    w: ProcessMatrix | np.ndarray,
    dims: ProcessDims | None = None,
    tol: float = DEFAULT_TOL,
) -> ProcessValidityReport:
    """Residuals of the five process-matrix validity conditions."""
    if isinstance(w, ProcessMatrix):
        dims = w.dims
        mat = w.w
    else:
        if dims is None:
            raise ValueError("dims required when validating a raw matrix")
        mat = np.asarray(w, dtype=complex)
    space = dims.space
    space.check_matrix(mat)
    if not is_hermitian(mat, tol=tol * max(1.0, frobenius(mat))):
        raise ValidationError("matrix is not Hermitian within tolerance")

    def rw(m: np.ndarray, factors: Sequence[int]) -> np.ndarray:
        return replace_with_identity(m, space, factors)

    red_b = rw(mat, (B_IN, B_OUT)) - rw(mat, (A_OUT, B_IN, B_OUT))
    red_a = rw(mat, (A_IN, A_OUT)) - rw(mat, (A_IN, A_OUT, B_OUT))
    loop = mat - rw(mat, (B_OUT,)) - rw(mat, (A_OUT,)) + rw(mat, (A_OUT, B_OUT))
    return ProcessValidityReport(
        min_eig=min_eigenvalue(mat),
        trace_residual=abs(float(np.trace(mat).real) - dims.target_trace),
        reduced_alice_residual=frobenius(red_a),
        reduced_bob_residual=frobenius(red_b),
        loop_residual=frobenius(loop),
        tol=tol,
    )


@dataclass(frozen=True)
class InstrumentValidityReport:
    min_eig: float
    completeness_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.min_eig >= -self.tol and self.completeness_residual <= self.tol


def validate_instrument(
    inst: Instrument,
    d_in: int,
    d_out: int,
    tol: float = DEFAULT_TOL,
) -> InstrumentValidityReport:
    """Check positivity of each map and completeness of the instrument.

    Completeness: tracing the output factor out of the summed maps must give
    the identity on the input factor.
    """
    n = d_in * d_out
    total = np.zeros((n, n), dtype=complex)
    worst = np.inf
    for m in inst.maps:
        if m.shape != (n, n):
            raise ValueError(f"map shape {m.shape} does not match ({d_in}, {d_out})")
        if not is_hermitian(m, tol=max(tol, tol * frobenius(m))):
            raise ValidationError("instrument map is not Hermitian within tolerance")
        worst = min(worst, min_eigenvalue(m))
        total = total + m
    reduced = partial_trace(total, (d_in, d_out), {1})
    residual = frobenius(reduced - eye(d_in))
    return InstrumentValidityReport(min_eig=float(worst), completeness_residual=residual, tol=tol)


def validate_instrument_set(s: InstrumentSet, tol: float = DEFAULT_TOL) -> list[InstrumentValidityReport]:
    return [validate_instrument(inst, s.d_in, s.d_out, tol=tol) for inst in s.instruments]


def correlation(
    w: ProcessMatrix,
    a_set: InstrumentSet,
    b_set: InstrumentSet,
    tol: float = DEFAULT_TOL,
    validate: bool = True,
):
    """Probability table p(a,b|x,y) = tr[(M_{a|x} ⊗ M_{b|y}) W].

    With valid inputs the result is a valid correlation table; negative
    probabilities beyond tolerance signal inconsistent inputs.
    """
    from .polytope import CorrelationTable, Scenario

    dims = w.dims
    if (a_set.d_in, a_set.d_out) != (dims.d_ai, dims.d_ao):
        raise ValueError("Alice's instruments do not match the process dimensions")
    if (b_set.d_in, b_set.d_out) != (dims.d_bi, dims.d_bo):
        raise ValueError("Bob's instruments do not match the process dimensions")
    if validate:
        report = validate_process_matrix(w, tol=tol)
        if not report.passed:
            raise ValidationError(f"invalid process matrix: residuals {report.residuals}")
        for party in (a_set, b_set):
            for rep in validate_instrument_set(party, tol=tol):
                if not rep.passed:
                    raise ValidationError("invalid instrument set")

    scenario = Scenario(a_set.n_inputs, b_set.n_inputs, a_set.n_outcomes, b_set.n_outcomes)
    # inputs that are only valid to within tol can push probabilities below
    # zero by a comparable amount; anything worse signals inconsistent inputs
    neg_tol = max(1e-10, 10.0 * tol)
    vals = [0.0] * scenario.n_entries
    for x, inst_a in enumerate(a_set.instruments):
        for y, inst_b in enumerate(b_set.instruments):
            for a, ma in enumerate(inst_a.maps):
                for b, mb in enumerate(inst_b.maps):
                    p = float(np.trace(kron(ma, mb) @ w.w).real)
                    if p < -neg_tol:
                        raise ValidationError(f"negative probability {p} at (x={x},y={y},a={a},b={b})")
                    vals[scenario.index(x, y, a, b)] = max(p, 0.0)
    return CorrelationTable(scenario, vals, tol=neg_tol)


# ---------------------------------------------------------------------------
# canonical examples


def noncausal_qubit_example() -> ProcessMatrix:
    """The simple qubit process matrix that beats both guessing games.

    W = (1/4)[1111 + (ZZZ1 + Z1XX)/sqrt(2)], letters meaning the operator on
    factors A_I A_O B_I B_O.  With :func:`standard_instruments` for both
    parties it wins the mutual guessing game with probability
    (5/16)(1 + 1/sqrt 2) ≈ 0.5335 > 1/2.
    """
    one = eye(2)
    z = pauli_z()
    x = pauli_x()
    w = 0.25 * (
        kron_all(one, one, one, one)
        + (kron_all(z, z, z, one) + kron_all(z, one, x, x)) / sqrt(2.0)
    )
    return ProcessMatrix(ProcessDims.uniform(2), hermitize(w))


def _phi_plus() -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / sqrt(2.0)
    return np.outer(v, v.conj())


def standard_instruments() -> InstrumentSet:
    """The qubit instruments used by both parties in the canonical examples.

    Input 0: pass the incoming system through untouched and output 1 (the
    outcome-0 map is zero, the outcome-1 map is the identity-channel
    operator 2|Φ+><Φ+|).  Input 1: measure in the z basis, report the result
    and send out the fixed state |0><0|.
    """
    zero = np.zeros((4, 4), dtype=complex)
    ket0 = np.array([[1, 0], [0, 0]], dtype=complex)
    ket1 = np.array([[0, 0], [0, 1]], dtype=complex)
    inst0 = Instrument([zero, 2.0 * _phi_plus()])
    inst1 = Instrument([kron(ket0, ket0), kron(ket1, ket0)])
    return InstrumentSet(2, 2, [inst0, inst1])


# Quartic coefficient tables (highest degree first) and the 4-decimal values
# used to select the intended real root of each polynomial.
_BEST_QUBIT_QUARTICS = [
    ([4608, -1575, 525, -117, -1], 0.2744),
    ([221184, 142479, -19701, -15603, 2363], 0.2178),
    ([9216, -16857, 11724, -3660, 430], 0.3628),
    ([221184, -50895, -16200, 1368, 602], 0.3114),
    ([221184, 16335, -37008, -11400, 3440], 0.2097),
]
_BEST_QUBIT_QUARTICS_PRIMED = [
    ([4608, 8595, 5583, 873, -43], 0.0390),
    ([221184, -101601, -1701, 2745, 305], 0.3355),
    ([3072, -2229, 540, -60, 4], 0.2451),
    ([221184, -294975, 145080, -31224, 2492], 0.4291),
    ([221184, 16335, -37008, -11400, 3440], 0.2097),
]
# Quartic whose smallest real root is the best-known qubit value of the
# mutual guessing game (about 0.5694).
BEST_QUBIT_VALUE_QUARTIC = [1769472, -2884032, 1630800, -380052, 34087]


class RootBracketError(RuntimeError):
    """No real root of the polynomial within the expected bracket."""


def real_root_near(coeffs: Sequence[float], target: float, radius: float = 0.05) -> float:
    """The real root of the polynomial closest to ``target`` within ``radius``.

    Refined by Newton iterations after selection.
    """
    roots = np.roots(np.asarray(coeffs, dtype=float))
    real = [float(r.real) for r in roots if abs(r.imag) < 1e-8]
    candidates = [r for r in real if abs(r - target) <= radius]
    if not candidates:
        raise RootBracketError(f"no real root within {radius} of {target} (roots: {roots})")
    x = min(candidates, key=lambda r: abs(r - target))
    poly = np.asarray(coeffs, dtype=float)
    dpoly = np.polyder(poly)
    for _ in range(60):
        f = float(np.polyval(poly, x))
        df = float(np.polyval(dpoly, x))
        if df == 0.0:
            break
        step = f / df
        x -= step
        if abs(step) < 1e-16 * max(1.0, abs(x)):
            break
    return x


def smallest_real_root(coeffs: Sequence[float]) -> float:
    roots = np.roots(np.asarray(coeffs, dtype=float))
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-8)
    if not real:
        raise RootBracketError("polynomial has no real roots")
    return real[0]


def best_known_qubit_process(primed: bool = False) -> ProcessMatrix:
    """Best-known qubit process matrix for the mutual guessing game.

    The expansion coefficients are real roots of fixed quartic polynomials,
    selected near their 4-decimal reference values; both the plain and the
    primed variant (and any mixture of the two) reach the same value with
    :func:`standard_instruments`.
    """
    table = _BEST_QUBIT_QUARTICS_PRIMED if primed else _BEST_QUBIT_QUARTICS
    a = [real_root_near(coeffs, target) for coeffs, target in table]
    one = eye(2)
    z, x, y = pauli_z(), pauli_x(), pauli_y()
    w = (
        kron_all(one, one, one, one)
        + a[0] * kron_all(z, one, z, one)
        - a[1] * (kron_all(z, one, one, one) + kron_all(one, one, z, one))
        - a[2] * (kron_all(z, one, one, z) + kron_all(one, z, z, one))
        + a[3] * (kron_all(z, one, z, z) + kron_all(z, z, z, one))
        + a[4]
        * (
            kron_all(z, one, x, x)
            - kron_all(z, one, y, y)
            + kron_all(x, x, z, one)
            - kron_all(y, y, z, one)
        )
    ) / 4.0
    return ProcessMatrix(ProcessDims.uniform(2), hermitize(w))


def best_known_qubit_mixture(q: float) -> ProcessMatrix:
    """Convex combination q·W + (1-q)·W' of the two best-known qubit processes."""
    if not 0 <= q <= 1:
        raise ValueError(f"q must be in [0, 1], got {q}")
    w0 = best_known_qubit_process(primed=False)
    w1 = best_known_qubit_process(primed=True)
    return ProcessMatrix(w0.dims, q * w0.w + (1 - q) * w1.w)


def mix_processes(q: float, w0: ProcessMatrix, w1: ProcessMatrix) -> ProcessMatrix:
    if w0.dims != w1.dims:
        raise ValueError("mixed process matrices must share dimensions")
    if not 0 <= q <= 1:
        raise ValueError(f"q must be in [0, 1], got {q}")
    return ProcessMatrix(w0.dims, q * w0.w + (1 - q) * w1.w)


def maximally_mixed_process(dims: ProcessDims) -> ProcessMatrix:
    """The fully depolarizing process: identity scaled to trace d_AO·d_BO."""
    n = dims.total
    return ProcessMatrix(dims, eye(n) * (dims.target_trace / n))


# ---------------------------------------------------------------------------
# convexity lift


def _embed_input_factors(w: ProcessMatrix, dims: ProcessDims) -> ProcessMatrix:
    """Embed a process into larger input factors by zero-padding."""
    old, new = w.dims, dims
    if (old.d_ao, old.d_bo) != (new.d_ao, new.d_bo):
        raise ValueError("only input factors can be embedded; output dimensions must match")
    if old.d_ai > new.d_ai or old.d_bi > new.d_bi:
        raise ValueError("embedding cannot shrink input factors")
    if old == new:
        return w
    t = np.zeros(new.factors * 2, dtype=complex)
    view = w.w.reshape(old.factors * 2)
    t[
        : old.d_ai, :, : old.d_bi, :,
        : old.d_ai, :, : old.d_bi, :,
    ] = view
    return ProcessMatrix(new, t.reshape(new.total, new.total))


def _embed_instrument_set(s: InstrumentSet, d_in: int) -> InstrumentSet:
    """Zero-pad instruments onto a larger input factor.

    Plain padding would break completeness (the traced-out sum must equal the
    identity on the whole enlarged input), so the deficit on the padded
    subspace is completed into outcome 0 with a fixed re-prepared state.
    Correlations are unchanged whenever the process has no support on the
    padded subspace.
    """
    if d_in == s.d_in:
        return s
    if d_in < s.d_in:
        raise ValueError("embedding cannot shrink the input factor")
    pad = np.zeros((d_in, d_in), dtype=complex)
    for i in range(s.d_in, d_in):
        pad[i, i] = 1.0
    ket0 = np.zeros((s.d_out, s.d_out), dtype=complex)
    ket0[0, 0] = 1.0
    completion = kron(pad, ket0)
    out = []
    for inst in s.instruments:
        maps = []
        for k, m in enumerate(inst.maps):
            big = np.zeros((d_in * s.d_out, d_in * s.d_out), dtype=complex)
            view = big.reshape(d_in, s.d_out, d_in, s.d_out)
            view[: s.d_in, :, : s.d_in, :] = m.reshape(s.d_in, s.d_out, s.d_in, s.d_out)
            if k == 0:
                big = big + completion
            maps.append(big)
        out.append(Instrument(maps))
    return InstrumentSet(d_in, s.d_out, out)


def lift_mixture(
    w0: ProcessMatrix,
    w1: ProcessMatrix,
    q: float,
    a0: InstrumentSet,
    a1: InstrumentSet,
    b0: InstrumentSet,
    b1: InstrumentSet,
) -> tuple[ProcessMatrix, InstrumentSet, InstrumentSet]:
    """Realize q·p0 + (1-q)·p1 with a single process and single instruments.

    An ancillary qubit is appended to each party's input factor; the lifted
    process is block diagonal, q |00><00| ⊗ W0 + (1-q) |11><11| ⊗ W1, and the
    lifted instruments route each block to the corresponding original maps.
    The resulting correlation is exactly the convex combination of the two
    original correlations, which shows the set of achievable correlations is
    convex (at the price of doubling the input dimensions).
    """
    if not 0 <= q <= 1:
        raise ValueError(f"q must be in [0, 1], got {q}")
    if (w0.dims.d_ao, w0.dims.d_bo) != (w1.dims.d_ao, w1.dims.d_bo):
        raise ValueError("output dimensions must match")
    if (a0.n_inputs, a0.n_outcomes) != (a1.n_inputs, a1.n_outcomes):
        raise ValueError("Alice's instrument sets must have matching inputs/outcomes")
    if (b0.n_inputs, b0.n_outcomes) != (b1.n_inputs, b1.n_outcomes):
        raise ValueError("Bob's instrument sets must have matching inputs/outcomes")

    d_ai = max(w0.dims.d_ai, w1.dims.d_ai)
    d_bi = max(w0.dims.d_bi, w1.dims.d_bi)
    common = ProcessDims(d_ai, w0.dims.d_ao, d_bi, w0.dims.d_bo)
    w0 = _embed_input_factors(w0, common)
    w1 = _embed_input_factors(w1, common)
    a0 = _embed_instrument_set(a0, d_ai)
    a1 = _embed_instrument_set(a1, d_ai)
    b0 = _embed_instrument_set(b0, d_bi)
    b1 = _embed_instrument_set(b1, d_bi)

    p0 = np.zeros((2, 2), dtype=complex)
    p0[0, 0] = 1.0
    p1 = np.zeros((2, 2), dtype=complex)
    p1[1, 1] = 1.0

    # build on (A_anc, B_anc, A_I, A_O, B_I, B_O) then interleave the ancillas
    blocks = q * kron_all(p0, p0, w0.w) + (1 - q) * kron_all(p1, p1, w1.w)
    dims6 = (2, 2) + common.factors
    lifted = permute_factors(blocks, dims6, (0, 2, 3, 1, 4, 5))
    lifted_dims = ProcessDims(2 * d_ai, common.d_ao, 2 * d_bi, common.d_bo)
    w_lift = ProcessMatrix(lifted_dims, lifted)

    def lift_party(s0: InstrumentSet, s1: InstrumentSet) -> InstrumentSet:
        out = []
        for inst0, inst1 in zip(s0.instruments, s1.instruments):
            maps = [kron(p0, m0) + kron(p1, m1) for m0, m1 in zip(inst0.maps, inst1.maps)]
            out.append(Instrument(maps))
        return InstrumentSet(2 * s0.d_in, s0.d_out, out)

    return w_lift, lift_party(a0, a1), lift_party(b0, b1)


# ---------------------------------------------------------------------------
# random instruments


def _random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    qmat, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases = phases / np.abs(phases)
    return qmat * phases


def _random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def _cj_of_unitary(u: np.ndarray) -> np.ndarray:
    d = u.shape[0]
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            eij = np.zeros((d, d), dtype=complex)
            eij[i, j] = 1.0
            m += kron(eij, u @ eij @ u.conj().T)
    return m


def random_instruments(
    d_in: int,
    d_out: int,
    seed: int | np.random.Generator,
    n_inputs: int = 2,
    n_outcomes: int = 2,
) -> InstrumentSet:
    """A random valid instrument set, suitable as an optimization start.

    Per input: a measure-and-prepare instrument (random orthonormal basis on
    the input factor, basis vectors partitioned at random over the outcomes,
    one random re-prepared pure state per outcome) mixed half-and-half with
    the operator of a random unitary channel split across outcomes with
    random weights.  This covers both sharply measuring and coherently
    transmitting behavior; outcomes may carry the zero map.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    instruments = []
    for _ in range(n_inputs):
        basis = _random_unitary(d_in, rng)
        assignment = rng.integers(0, n_outcomes, size=d_in)
        prepared = [_random_pure_state(d_out, rng) for _ in range(n_outcomes)]
        mp_maps = []
        for k in range(n_outcomes):
            proj = np.zeros((d_in, d_in), dtype=complex)
            for i in range(d_in):
                if assignment[i] == k:
                    v = basis[:, i]
                    proj += np.outer(v, v.conj())
            # CJ of rho -> <v|rho|v> sigma carries the conjugated basis vector
            mp_maps.append(kron(proj.conj(), prepared[k]))
        if d_out == d_in:
            cj = _cj_of_unitary(_random_unitary(d_out, rng))
        else:
            # rectangular case: send a fixed pure state through after measuring
            cj = kron(eye(d_in), _random_pure_state(d_out, rng))
        weights = rng.dirichlet(np.ones(n_outcomes))
        maps = [0.5 * mp + 0.5 * float(wk) * cj for mp, wk in zip(mp_maps, weights)]
        instruments.append(Instrument(maps))
    return InstrumentSet(d_in, d_out, instruments)


# ---------------------------------------------------------------------------
# JSON wire formats


def process_to_json(w: ProcessMatrix) -> dict:
    return {"dims": list(w.dims.factors), "matrix": matrix_to_json(w.w)}


def process_from_json(data: dict) -> ProcessMatrix:
    dims = ProcessDims(*(int(d) for d in data["dims"]))
    return ProcessMatrix(dims, hermitize(matrix_from_json(data["matrix"])))


def instrument_set_to_json(s: InstrumentSet) -> dict:
    return {
        "dims": [s.d_in, s.d_out],
        "instruments": [
            {"input": x, "maps": [matrix_to_json(m) for m in inst.maps]}
            for x, inst in enumerate(s.instruments)
        ],
    }


def instrument_set_from_json(data: dict) -> InstrumentSet:
    d_in, d_out = (int(d) for d in data["dims"])
    entries = sorted(data["instruments"], key=lambda e: int(e["input"]))
    instruments = [Instrument([matrix_from_json(m) for m in e["maps"]]) for e in entries]
    return InstrumentSet(d_in, d_out, instruments)
