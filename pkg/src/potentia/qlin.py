"""Dense complex linear-algebra substrate.

Everything here works on plain ``numpy`` arrays (complex128, row-major).
Matrices are immutable by convention: operations return fresh arrays and
never mutate their inputs, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import CapacityError, DomainError, ShapeError

#: Total matrix dimension cap (rows); six qubits or mixed factors fit well below.
DIM_CAP = 4096

#: Absolute tolerance on the max entry of M - M† for "Hermitian".
HERMITICITY_TOL = 1e-9

#: Default tolerance for commutator tests.
COMMUTE_TOL = 1e-8

#: Eigenvalues in [-PSD_CLIP, 0) are treated as eigensolver noise on
#: rank-deficient projectors and clipped to zero in PSD contexts.
PSD_CLIP = 1e-7


def as_complex(matrix: np.ndarray | Sequence) -> np.ndarray:
    """Return ``matrix`` as a C-contiguous complex128 2-D array."""
    arr = np.ascontiguousarray(matrix, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise DomainError("matrix has non-finite entries")
    return arr


def dagger(matrix: np.ndarray) -> np.ndarray:
    return matrix.conj().T


def max_abs(matrix: np.ndarray) -> float:
    """Max-entry magnitude; 0.0 for empty input."""
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def is_hermitian(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    matrix = as_complex(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        return False
    return max_abs(matrix - dagger(matrix)) <= tol


def kron(a: np.ndarray, b: np.ndarray, dim_cap: int = DIM_CAP) -> np.ndarray:
    """Kronecker product with a capacity cap on the output dimension."""
    a = as_complex(a)
    b = as_complex(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > dim_cap:
        raise CapacityError(
            f"kron output {rows}x{cols} exceeds the configured cap of {dim_cap}"
        )
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray], dim_cap: int = DIM_CAP) -> np.ndarray:
    """Left-to-right Kronecker product of a nonempty factor list."""
    if not factors:
        raise DomainError("kron_all needs at least one factor")
    out = as_complex(factors[0])
    for factor in factors[1:]:
        out = kron(out, factor, dim_cap=dim_cap)
    return out


def partial_trace(
    rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]
) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``dims`` are the factor dimensions in tensor order (factor 0 most
    significant); ``keep`` holds 0-based factor indices.  Tracing all
    factors returns the 1x1 matrix ``[[Tr rho]]``.
    """
    rho = as_complex(rho)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims):
        raise ShapeError(f"factor dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ShapeError(
            f"matrix is {rho.shape[0]}x{rho.shape[1]} but dims {dims} multiply to {total}"
        )
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ShapeError(f"keep indices {keep} out of range for {n} factors")

    if not keep:
        return np.array([[np.trace(rho)]], dtype=np.complex128)

    tensor = rho.reshape(dims + dims)
    # Trace the discarded factors innermost-first so earlier axis numbers stay valid.
    traced = 0
    for factor in range(n - 1, -1, -1):
        if factor in keep:
            continue
        remaining = n - traced
        tensor = np.trace(tensor, axis1=factor, axis2=factor + remaining)
        traced += 1
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return np.ascontiguousarray(tensor.reshape(kept_dim, kept_dim))


def partial_transpose(
    rho: np.ndarray, dims: Sequence[int], party: Literal["A", "B"] = "B"
) -> np.ndarray:
    """Transpose one factor of a bipartite operator."""
    rho = as_complex(rho)
    dims = [int(d) for d in dims]
    if len(dims) != 2:
        raise ShapeError(f"partial transpose expects two factors, got dims {dims}")
    d_a, d_b = dims
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise ShapeError(
            f"matrix is {rho.shape[0]}x{rho.shape[1]} but dims {dims} multiply to {d_a * d_b}"
        )
    if party not in ("A", "B"):
        raise DomainError(f"party must be 'A' or 'B', got {party!r}")
    tensor = rho.reshape(d_a, d_b, d_a, d_b)
    if party == "B":
        tensor = tensor.transpose(0, 3, 2, 1)
    else:
        tensor = tensor.transpose(2, 1, 0, 3)
    return np.ascontiguousarray(tensor.reshape(d_a * d_b, d_a * d_b))


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted descending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.  For degenerate eigenvalues
    the basis of the eigenspace is solver-dependent; callers must not rely on
    a particular choice.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ dagger(self.eigenvectors)


def herm_eig(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> HermitianSpectrum:
    """Descending-order eigendecomposition; rejects non-Hermitian input."""
    matrix = as_complex(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"eigendecomposition needs a square matrix, got {matrix.shape}")
    if max_abs(matrix - dagger(matrix)) > tol:
        raise DomainError(
            f"matrix is not Hermitian within {tol:g} "
            f"(max asymmetry {max_abs(matrix - dagger(matrix)):.3e})"
        )
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    order = np.argsort(eigenvalues)[::-1]
    vals = np.ascontiguousarray(eigenvalues[order])
    vecs = np.ascontiguousarray(eigenvectors[:, order])
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return HermitianSpectrum(vals, vecs)


def commutes(p: np.ndarray, q: np.ndarray, tol: float = COMMUTE_TOL) -> bool:
    """True iff the max-entry magnitude of PQ - QP is at most ``tol``."""
    p = as_complex(p)
    q = as_complex(q)
    if p.shape != q.shape or p.shape[0] != p.shape[1]:
        raise ShapeError(f"commutator needs equal square shapes, got {p.shape} vs {q.shape}")
    return max_abs(p @ q - q @ p) <= tol


def clip_spectrum(values: np.ndarray, clip: float = PSD_CLIP) -> np.ndarray:
    """Zero out eigenvalues in [-clip, 0); leave anything below -clip alone."""
    out = np.array(values, dtype=np.float64)
    out[(out < 0) & (out >= -clip)] = 0.0
    return out
