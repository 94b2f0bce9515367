"""A small semidefinite-programming solver for process and instrument steps.

Problems have the shape: maximize sum_k Re tr(C_k X_k) over Hermitian PSD
blocks X_k subject to affine equality constraints.  The solver is ADMM
operator splitting: alternate (i) exact projection onto the affine feasible
set, shifted by the objective gradient, (ii) eigenvalue clipping onto the
PSD cone per block, (iii) a scaled dual update, with residual-balancing
adaptation of the penalty parameter.

The affine projection comes either from a closed-form projector callback
(the process and instrument feasible sets are intersections of kernels of
commuting orthogonal projections, so their projectors compose exactly) or,
for generic problems, from an orthonormalized constraint system.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import sqrt
from typing import Callable, Sequence

import numpy as np

from .linalg import eye, hermitize, kron, partial_trace, psd_project, replace_with_identity
from .process import A_IN, A_OUT, B_IN, B_OUT, InstrumentSet, ProcessDims, ProcessMatrix

# Precompute the affine projector as a dense matrix on the stacked block
# vectorization when it stays this small; above that, apply it operator-wise.
MATRIX_PROJECTOR_MAX_VEC = 2048

Blocks = list[np.ndarray]
AffineProjector = Callable[[Blocks], Blocks]


@dataclass(frozen=True)
class SdpProblem:
    """Block-diagonal SDP in equality form.

    ``objective`` holds one Hermitian cost operator per block; the value is
    sum_k Re tr(objective[k] @ X[k]).  ``project_affine`` must be the exact
    orthogonal projection onto the affine feasible subspace (all equality
    constraints at once).  ``meta`` carries builder bookkeeping such as the
    block layout.
    """

    block_dims: tuple[int, ...]
    objective: tuple[np.ndarray, ...]
    project_affine: AffineProjector
    meta: dict = field(default_factory=dict)

    def value(self, blocks: Sequence[np.ndarray]) -> float:
        return float(sum(np.einsum("ij,ji->", c, x).real for c, x in zip(self.objective, blocks)))


@dataclass(frozen=True)
class SdpOptions:
    rho: float = 1.0
    tol: float = 1e-8
    max_iter: int = 50_000
    check_every: int = 4
    adapt_every: int = 20
    balance_clip: float = 2.0
    over_relaxation: float = 1.0
    stagnation_window: int = 5_000
    stagnation_level: float = 1e-3

    def tightened(self, tol: float) -> "SdpOptions":
        return replace(self, tol=tol)


@dataclass
class SdpSolution:
    blocks: Blocks
    value: float
    primal_residual: float
    dual_residual: float
    iterations: int
    status: str  # converged | max_iter | infeasible
    z_blocks: Blocks | None = None
    u_blocks: Blocks | None = None
    rho: float = 1.0

    @property
    def converged(self) -> bool:
        return self.status == "converged"


@dataclass
class WarmStart:
    x: Blocks
    z: Blocks
    u: Blocks
    rho: float


def _zeros(dims: Sequence[int]) -> Blocks:
    return [np.zeros((d, d), dtype=complex) for d in dims]


def _norm(blocks: Blocks) -> float:
    return sqrt(sum(float(np.linalg.norm(b)) ** 2 for b in blocks))


def _psd_clip(m: np.ndarray) -> np.ndarray:
    # fast in-loop PSD projection; input is made Hermitian by the caller
    w, v = np.linalg.eigh(m)
    if w[0] >= 0.0:
        return m
    np.maximum(w, 0.0, out=w)
    return (v * w) @ v.conj().T


def solve(
    problem: SdpProblem,
    options: SdpOptions | None = None,
    warm_start: WarmStart | None = None,
) -> SdpSolution:
    """Run ADMM until the primal and dual residuals drop below tolerance.

    Returns the affine-feasible iterate; on convergence its smallest block
    eigenvalue is above -tol.  Status is ``max_iter`` when the budget runs
    out and ``infeasible`` when the residuals stagnate at a high level,
    which is how inconsistent constraints surface in this scheme.
    """
    opts = options or SdpOptions()
    dims = problem.block_dims
    alpha = opts.over_relaxation
    if warm_start is not None:
        x = [b.copy() for b in warm_start.x]
        z = [b.copy() for b in warm_start.z]
        u = [b.copy() for b in warm_start.u]
        rho = warm_start.rho
    else:
        x = problem.project_affine(_zeros(dims))
        z = [b.copy() for b in x]
        u = _zeros(dims)
        rho = opts.rho

    best_stagnant = np.inf
    stagnant_since = 0
    it = 0
    primal = dual = np.inf
    for it in range(1, opts.max_iter + 1):
        shifted = [zk - uk + ck / rho for zk, uk, ck in zip(z, u, problem.objective)]
        x = problem.project_affine(shifted)
        z_old = z
        z = []
        u_new = []
        for xk, zk_old, uk in zip(x, z_old, u):
            xr = xk if alpha == 1.0 else alpha * xk + (1.0 - alpha) * zk_old
            m = xr + uk
            m = (m + m.conj().T) * 0.5
            zk = _psd_clip(m)
            z.append(zk)
            u_new.append(m - zk)  # u + xr - z with hermitization folded in
        u = u_new

        # residuals are only inspected every few iterations; they move slowly
        if it % opts.check_every and it > 8:
            continue
        primal = _norm([xk - zk for xk, zk in zip(x, z)])
        dual = rho * _norm([zk - zo for zk, zo in zip(z, z_old)])
        ref = max(1.0, _norm(x), _norm(z))
        if primal <= opts.tol * ref and dual <= opts.tol * ref:
            return SdpSolution(x, problem.value(x), primal, dual, it, "converged", z, u, rho)

        # infeasibility heuristic: primal residual pinned at a high level
        if primal > opts.stagnation_level * ref:
            if primal < best_stagnant * 0.99:
                best_stagnant = primal
                stagnant_since = it
            elif it - stagnant_since > opts.stagnation_window:
                return SdpSolution(x, problem.value(x), primal, dual, it, "infeasible", z, u, rho)
        else:
            best_stagnant = np.inf
            stagnant_since = it

        # residual balancing keeps the two residuals within a bounded ratio
        if it % opts.adapt_every == 0 and primal > 0.0 and dual > 0.0:
            factor = sqrt(primal / dual)
            factor = min(max(factor, 1.0 / opts.balance_clip), opts.balance_clip)
            if abs(factor - 1.0) > 0.05:
                rho *= factor
                u = [uk / factor for uk in u]

    return SdpSolution(x, problem.value(x), primal, dual, it, "max_iter", z, u, rho)


def polish_to_feasible(
    project_affine: AffineProjector,
    blocks: Blocks,
    tol: float = 1e-10,
    max_rounds: int = 5000,
) -> Blocks:
    """Drive nearly feasible blocks into the affine ∩ PSD intersection.

    Plain alternating projections: they converge to a nearby point of the
    intersection, trading an objective change of the order of the initial
    feasibility gap for exact-to-tolerance feasibility.  Returns the
    affine-side iterate.
    """
    x = project_affine([b.copy() for b in blocks])
    for _ in range(max_rounds):
        y = []
        gap = 0.0
        for xk in x:
            m = (xk + xk.conj().T) * 0.5
            zk = _psd_clip(m)
            gap += float(np.linalg.norm(zk - xk)) ** 2
            y.append(zk)
        if sqrt(gap) <= tol * max(1.0, _norm(x)):
            return x
        x = project_affine(y)
    return x


def warm_start_from(solution: SdpSolution, problem: SdpProblem) -> WarmStart:
    """Reuse a previous solution's full ADMM state as the next starting point."""
    if solution.z_blocks is not None and solution.u_blocks is not None:
        return WarmStart(
            x=[b.copy() for b in solution.blocks],
            z=[b.copy() for b in solution.z_blocks],
            u=[b.copy() for b in solution.u_blocks],
            rho=solution.rho,
        )
    z = [psd_project(hermitize(b)) for b in solution.blocks]
    return WarmStart(x=[b.copy() for b in solution.blocks], z=z, u=_zeros(problem.block_dims), rho=solution.rho)


# ---------------------------------------------------------------------------
# constraint projectors

# The structural process constraints are kernels of commuting orthogonal
# projections built from replace-with-identity maps; multiplying out the
# complementary projections collapses to this fixed 7-term combination
# (cross terms cancel because unions of the factor sets saturate).
_PROCESS_PROJECTION_TERMS: tuple[tuple[float, tuple[int, ...]], ...] = (
    (+1.0, (A_OUT,)),
    (+1.0, (B_OUT,)),
    (-1.0, (A_OUT, B_OUT)),
    (-1.0, (B_IN, B_OUT)),
    (+1.0, (A_OUT, B_IN, B_OUT)),
    (-1.0, (A_IN, A_OUT)),
    (+1.0, (A_IN, A_OUT, B_OUT)),
)


def _matrixify(projector: AffineProjector, block_dims: Sequence[int]) -> AffineProjector | None:
    """Precompute a complex-linear affine projector as (matrix, offset).

    Only valid for projectors that are complex-linear in their input (the
    structured ones below are); returns None when the stacked vectorization
    would be too large.
    """
    sizes = [d * d for d in block_dims]
    total = sum(sizes)
    if total > MATRIX_PROJECTOR_MAX_VEC:
        return None
    splits = np.cumsum(sizes)[:-1]

    def stack(blocks: Blocks) -> np.ndarray:
        return np.concatenate([b.reshape(-1) for b in blocks])

    def unstack(v: np.ndarray) -> Blocks:
        parts = np.split(v, splits)
        return [p.reshape(d, d) for p, d in zip(parts, block_dims)]

    offset = stack(projector(_zeros(block_dims)))
    columns = np.empty((total, total), dtype=complex)
    basis = _zeros(block_dims)
    pos = 0
    for k, d in enumerate(block_dims):
        for i in range(d):
            for j in range(d):
                basis[k][i, j] = 1.0
                columns[:, pos] = stack(projector(basis)) - offset
                basis[k][i, j] = 0.0
                pos += 1
    mat = np.ascontiguousarray(columns)

    def project(blocks: Blocks) -> Blocks:
        return unstack(mat @ stack(blocks) + offset)

    return project


def _structural_term(factor_dims: tuple[int, ...], factors: tuple[int, ...]):
    """One replace-with-identity term as fused transpose/trace/outer calls.

    Operates on the 2n-axis tensor view of the operator and returns the same
    layout; precomputes the axis permutations once.
    """
    nf = len(factor_dims)
    keep = [f for f in range(nf) if f not in factors]
    d_s = 1
    for f in factors:
        d_s *= factor_dims[f]
    d_k = 1
    for f in keep:
        d_k *= factor_dims[f]
    perm = [*keep, *factors, *(nf + k for k in keep), *(nf + f for f in factors)]
    inv = np.argsort(perm)
    shape_perm = (
        tuple(factor_dims[f] for f in keep)
        + tuple(factor_dims[f] for f in factors)
        + tuple(factor_dims[f] for f in keep)
        + tuple(factor_dims[f] for f in factors)
    )
    eye_s = np.eye(d_s, dtype=complex) / d_s

    def apply(w_tensor: np.ndarray) -> np.ndarray:
        t = w_tensor.transpose(perm).reshape(d_k, d_s, d_k, d_s)
        traced = np.trace(t, axis1=1, axis2=3)
        out = np.multiply.outer(traced, eye_s).transpose(0, 2, 1, 3)
        return out.reshape(shape_perm).transpose(inv)

    return apply


@lru_cache(maxsize=16)
def _cached_process_projector(dims: ProcessDims) -> AffineProjector:
    facs = dims.factors
    n = dims.total
    target = dims.target_trace
    ident = eye(n)
    terms = [
        (coeff, _structural_term(facs, factors))
        for coeff, factors in _PROCESS_PROJECTION_TERMS
    ]
    shape8 = facs + facs

    def project(blocks: Blocks) -> Blocks:
        (w,) = blocks
        w8 = w.reshape(shape8)
        out = None
        for coeff, term in terms:
            t = term(w8)
            out = coeff * t if out is None else out + coeff * t
        out = out.reshape(n, n)
        tr = complex(np.trace(w))
        out += (target - tr) / n * ident
        return [out]

    return _matrixify(project, (n,)) or project


def process_feasible_projector(dims: ProcessDims) -> AffineProjector:
    """Exact projection onto the affine process-matrix constraints.

    The structural conditions project in closed form through the
    replace-with-identity algebra; the trace is restored along the identity
    direction, which lies inside the structural kernel.
    """
    return _cached_process_projector(dims)


@lru_cache(maxsize=32)
def _cached_instrument_projector(d_in: int, d_out: int, n_outcomes: int) -> AffineProjector:
    ident_in = eye(d_in)
    ident_out = eye(d_out)

    def project_group(blocks: Blocks) -> Blocks:
        total = blocks[0].copy()
        for g in blocks[1:]:
            total = total + g
        defect = partial_trace(total, (d_in, d_out), {1}) - ident_in
        corr = kron(defect, ident_out) / (n_outcomes * d_out)
        return [g - corr for g in blocks]

    m = d_in * d_out
    return _matrixify(project_group, (m,) * n_outcomes) or project_group


def instrument_feasible_projector(
    d_in: int, d_out: int, n_inputs: int, n_outcomes: int
) -> AffineProjector:
    """Exact projection onto completeness: tr_out sum_a M_{a|x} = 1 per input."""
    group_projector = _cached_instrument_projector(d_in, d_out, n_outcomes)

    def project(blocks: Blocks) -> Blocks:
        out: Blocks = []
        for x in range(n_inputs):
            out.extend(group_projector(blocks[x * n_outcomes : (x + 1) * n_outcomes]))
        return out

    return project


def dense_constraint_projector(
    block_dims: Sequence[int],
    constraints: Sequence[tuple[Sequence[np.ndarray], float]],
) -> AffineProjector:
    """Affine projector for explicit constraints Re sum_k tr(A_k X_k) = b.

    Constraint normals are vectorized over the real Hermitian structure and
    orthonormalized once; the projector then subtracts the least-norm
    correction.  Meant for small, generic problems.
    """
    dims = list(block_dims)

    def vec(blocks: Blocks) -> np.ndarray:
        # real vectorization of Hermitian blocks: Re and Im parts, Frobenius-isometric
        parts = []
        for b in blocks:
            parts.append(b.real.reshape(-1))
            parts.append(b.imag.reshape(-1))
        return np.concatenate(parts)

    def unvec(v: np.ndarray) -> Blocks:
        blocks = []
        pos = 0
        for d in dims:
            re = v[pos : pos + d * d].reshape(d, d)
            pos += d * d
            im = v[pos : pos + d * d].reshape(d, d)
            pos += d * d
            blocks.append(hermitize(re + 1j * im))
        return blocks

    rows = []
    rhs = []
    for mats, b in constraints:
        rows.append(vec([hermitize(np.asarray(m, dtype=complex)) for m in mats]))
        rhs.append(float(b))
    nmat = np.array(rows)
    rvec = np.array(rhs)
    pinv = np.linalg.pinv(nmat @ nmat.T)

    def project(blocks: Blocks) -> Blocks:
        v = vec([hermitize(b) for b in blocks])
        corr = nmat.T @ (pinv @ (nmat @ v - rvec))
        return unvec(v - corr)

    return project


def problem_from_constraints(
    objective: Sequence[np.ndarray],
    constraints: Sequence[tuple[Sequence[np.ndarray], float]],
) -> SdpProblem:
    dims = tuple(int(c.shape[0]) for c in objective)
    return SdpProblem(
        block_dims=dims,
        objective=tuple(hermitize(np.asarray(c, dtype=complex)) for c in objective),
        project_affine=dense_constraint_projector(dims, constraints),
        meta={"kind": "generic"},
    )


# ---------------------------------------------------------------------------
# the two step shapes of the alternating optimization


def build_w_step(
    objective_coeffs: np.ndarray,
    a_set: InstrumentSet,
    b_set: InstrumentSet,
    dims: ProcessDims,
) -> SdpProblem:
    """Maximize the objective over process matrices with instruments fixed.

    The cost operator is C = sum coeff(x,y,a,b) (M_{a|x} ⊗ M_{b|y}); the
    feasible set is the process-matrix spectrahedron.
    """
    coeffs = np.asarray(objective_coeffs, dtype=float)
    n = dims.total
    c = np.zeros((n, n), dtype=complex)
    for x, inst_a in enumerate(a_set.instruments):
        for y, inst_b in enumerate(b_set.instruments):
            for a, ma in enumerate(inst_a.maps):
                for b, mb in enumerate(inst_b.maps):
                    w = coeffs[x, y, a, b]
                    if w:
                        c += w * kron(ma, mb)
    return SdpProblem(
        block_dims=(n,),
        objective=(hermitize(c),),
        project_affine=process_feasible_projector(dims),
        meta={"kind": "w_step", "dims": dims},
    )


def build_party_step(
    objective_coeffs: np.ndarray,
    w: ProcessMatrix,
    other_set: InstrumentSet,
    which_party: str,
) -> SdpProblem:
    """Maximize over one party's instruments with W and the other party fixed.

    For Alice, the cost of block (x, a) is the contraction
    G_{a|x} = sum_{y,b} coeff(x,y,a,b) tr_B[(1_A ⊗ M_{b|y}) W]; the blocks
    decouple across inputs and share only the per-input completeness
    constraint.  The Bob case is symmetric.
    """
    coeffs = np.asarray(objective_coeffs, dtype=float)
    dims = w.dims
    space = dims.space
    if which_party == "alice":
        d_in, d_out = dims.d_ai, dims.d_ao
        n_inputs, n_outcomes = coeffs.shape[0], coeffs.shape[2]
        other_axis = (B_IN, B_OUT)
        id_party = eye(dims.d_ai * dims.d_ao)
        reduced = [
            [
                partial_trace(kron(id_party, mb) @ w.w, space, other_axis)
                for mb in inst.maps
            ]
            for inst in other_set.instruments
        ]
        costs = []
        for x in range(n_inputs):
            for a in range(n_outcomes):
                g = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
                for y in range(coeffs.shape[1]):
                    for b in range(coeffs.shape[3]):
                        c = coeffs[x, y, a, b]
                        if c:
                            g += c * reduced[y][b]
                costs.append(hermitize(g))
    elif which_party == "bob":
        d_in, d_out = dims.d_bi, dims.d_bo
        n_inputs, n_outcomes = coeffs.shape[1], coeffs.shape[3]
        id_party = eye(dims.d_bi * dims.d_bo)
        reduced = [
            [
                partial_trace(kron(ma, id_party) @ w.w, space, (A_IN, A_OUT))
                for ma in inst.maps
            ]
            for inst in other_set.instruments
        ]
        costs = []
        for y in range(n_inputs):
            for b in range(n_outcomes):
                g = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
                for x in range(coeffs.shape[0]):
                    for a in range(coeffs.shape[2]):
                        c = coeffs[x, y, a, b]
                        if c:
                            g += c * reduced[x][a]
                costs.append(hermitize(g))
    else:
        raise ValueError(f"which_party must be 'alice' or 'bob', got {which_party!r}")

    block_dim = d_in * d_out
    return SdpProblem(
        block_dims=(block_dim,) * (n_inputs * n_outcomes),
        objective=tuple(costs),
        project_affine=instrument_feasible_projector(d_in, d_out, n_inputs, n_outcomes),
        meta={
            "kind": f"{which_party}_step",
            "d_in": d_in,
            "d_out": d_out,
            "n_inputs": n_inputs,
            "n_outcomes": n_outcomes,
        },
    )


def instrument_set_from_blocks(problem: SdpProblem, blocks: Blocks) -> InstrumentSet:
    """Reassemble a party step's solution blocks into an instrument set."""
    from .process import Instrument

    meta = problem.meta
    k = meta["n_outcomes"]
    instruments = [
        Instrument([hermitize(b) for b in blocks[x * k : (x + 1) * k]])
        for x in range(meta["n_inputs"])
    ]
    return InstrumentSet(meta["d_in"], meta["d_out"], instruments)
