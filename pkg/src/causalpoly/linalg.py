"""Complex Hermitian matrix calculus over tensor-product spaces.

Everything here operates on dense ``numpy`` arrays of ``complex128``.  A
"matrix" is a 2-D square array unless stated otherwise; tensor factors are
tracked separately through :class:`TensorSpace`, which records the ordered
list of Hilbert-space dimensions.  The factor order is fixed once per space
and index flattening is row-major, so ``kron(A, B)`` acts on ``(factor 0,
factor 1)`` in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TensorSpace",
    "NotHermitianError",
    "eye",
    "pauli_x",
    "pauli_y",
    "pauli_z",
    "dagger",
    "hermitize",
    "is_hermitian",
    "frobenius",
    "kron",
    "kron_all",
    "permute_factors",
    "partial_trace",
    "replace_with_identity",
    "hermitian_eig",
    "psd_project",
    "min_eigenvalue",
    "matrix_to_json",
    "matrix_from_json",
]

# Hermiticity acceptance and eigen-residual tolerances (relative to ||m||_F).
TOL_HERM = 1e-10
TOL_EIG = 1e-11


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within the accepted tolerance."""


@dataclass(frozen=True)
class TensorSpace:
    """An ordered tensor product of finite-dimensional factors."""

    factor_dims: tuple[int, ...]

    def __init__(self, factor_dims: Iterable[int]):
        dims = tuple(int(d) for d in factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.factor_dims)

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    def check_matrix(self, m: np.ndarray) -> None:
        n = self.total_dim
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match space of total dimension {n}")


def _as_space(space: TensorSpace | Sequence[int]) -> TensorSpace:
    return space if isinstance(space, TensorSpace) else TensorSpace(space)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def pauli_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def pauli_y() -> np.ndarray:
    return np.array([[0, -1j], [1j, 0]], dtype=complex)


def pauli_z() -> np.ndarray:
    return np.array([[1, 0], [0, -1]], dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m†)/2."""
    return (m + m.conj().T) / 2


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def is_hermitian(m: np.ndarray, tol: float | None = None) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if tol is None:
        tol = TOL_HERM * max(1.0, frobenius(m))
    return float(np.linalg.norm(m - m.conj().T)) <= tol


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; (A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of several factors, left to right."""
    if not factors:
        raise ValueError("kron_all needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def permute_factors(m: np.ndarray, space: TensorSpace | Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator.

    ``perm[j]`` is the index (in the current ``space``) of the factor placed
    at position ``j`` of the result.
    """
    space = _as_space(space)
    space.check_matrix(m)
    dims = space.factor_dims
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{n - 1}")
    t = m.reshape(dims + dims)
    axes = list(perm) + [p + n for p in perm]
    d = space.total_dim
    return np.ascontiguousarray(t.transpose(axes)).reshape(d, d)


def partial_trace(
    m: np.ndarray,
    space: TensorSpace | Sequence[int],
    traced_factors: Iterable[int],
) -> np.ndarray:
    """Trace out the given factors; the remaining factors keep their order.

    Preserves the total trace: tr(result) = tr(m).
    """
    space = _as_space(space)
    space.check_matrix(m)
    dims = space.factor_dims
    n = len(dims)
    traced = sorted(set(int(f) for f in traced_factors))
    if any(f < 0 or f >= n for f in traced):
        raise ValueError(f"traced factors {traced} out of range for {n} factors")
    if len(traced) == n:
        return np.array([[np.trace(m)]], dtype=complex)
    t = m.reshape(dims + dims)
    # einsum with a repeated index on the (row, col) axes of each traced factor
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for f in traced:
        col[f] = row[f]
    keep = [i for i in range(n) if i not in traced]
    out_sub = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    t = np.einsum("".join(row) + "".join(col) + "->" + out_sub, t)
    d = prod(dims[i] for i in keep)
    return t.reshape(d, d)


def replace_with_identity(
    w: np.ndarray,
    space: TensorSpace | Sequence[int],
    factors: Iterable[int],
) -> np.ndarray:
    """Trace out the given factors and re-insert the normalized identity.

    The result lives on the same space as ``w``; the map is an orthogonal
    projection (idempotent, self-adjoint) and preserves the trace.
    """
    space = _as_space(space)
    factors = sorted(set(int(f) for f in factors))
    if not factors:
        raise ValueError("factors must be nonempty")
    dims = space.factor_dims
    n = len(dims)
    rest = [i for i in range(n) if i not in factors]
    d_f = prod(dims[f] for f in factors)
    traced = partial_trace(w, space, factors)
    out = kron(eye(d_f) / d_f, traced)
    # current factor order is factors + rest; permute back to 0..n-1
    current = factors + rest
    perm = [current.index(i) for i in range(n)]
    return permute_factors(out, [dims[i] for i in current], perm)


def hermitian_eig(m: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``m = v @ diag(w) @ v†`` and the columns of ``v``
    orthonormal.  Raises :class:`NotHermitianError` when the input deviates
    from Hermiticity beyond ``tol`` (default ``1e-10 * ||m||_F``).
    """
    m = np.asarray(m, dtype=complex)
    if tol is None:
        tol = TOL_HERM * max(1.0, frobenius(m))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if float(np.linalg.norm(m - m.conj().T)) > tol:
        raise NotHermitianError(f"matrix is not Hermitian within tolerance {tol:g}")
    w, v = np.linalg.eigh(hermitize(m))
    return w[::-1].copy(), v[:, ::-1].copy()


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    w, _ = hermitian_eig(m)
    return float(w[-1])


def psd_project(m: np.ndarray) -> np.ndarray:
    """Nearest positive-semidefinite matrix in Frobenius norm.

    Clips negative eigenvalues of the Hermitian input to zero.
    """
    w, v = hermitian_eig(m)
    w = np.maximum(w, 0.0)
    return hermitize((v * w) @ v.conj().T)


def matrix_to_json(m: np.ndarray) -> dict:
    """JSON form {"rows": n, "cols": n, "entries": [[re, im], ...]} row-major."""
    m = np.asarray(m, dtype=complex)
    rows, cols = m.shape
    entries = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"rows": int(rows), "cols": int(cols), "entries": entries}


def matrix_from_json(data: dict) -> np.ndarray:
    rows = int(data["rows"])
    cols = int(data["cols"])
    entries = data["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    if not np.all(np.isfinite(flat.view(float))):
        raise ValueError("matrix entries must be finite")
    return flat.reshape(rows, cols)
