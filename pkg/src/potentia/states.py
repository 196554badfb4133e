"""State representations: pure vectors, density operators, Bloch geometry,
the two rival purity predicates, shadows, and mixture decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qlin
from .errors import DomainError, ShapeError
from .qlin import dagger, herm_eig, max_abs

NORM_TOL = 1e-9
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-7
#: Mixture components below this weight are dropped.
WEIGHT_FLOOR = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PureVector:
    """Normalized state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"vector norm is {norm:.12f}, expected 1 within {NORM_TOL:g}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "PureVector":
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amplitudes: Sequence) -> "PureVector":
        """Normalize and wrap; rejects the zero vector."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if norm < 1e-12:
            raise DomainError("cannot normalize the zero vector")
        return cls(amps / norm)


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one positive-semidefinite Hermitian matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = qlin.as_complex(self.matrix)
        if mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"density operator must be square, got {mat.shape}")
        asym = max_abs(mat - dagger(mat))
        if asym > qlin.HERMITICITY_TOL:
            raise DomainError(f"not Hermitian: max asymmetry {asym:.3e}")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > TRACE_TOL:
            raise DomainError(f"trace is {trace:.12g}, expected 1 within {TRACE_TOL:g}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < EIGENVALUE_FLOOR:
            raise DomainError(f"negative eigenvalue {min_eig:.3e} below floor {EIGENVALUE_FLOOR:g}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class BlochPoint:
    """Point of the qubit Bloch ball in Cartesian coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm > 1.0 + NORM_TOL:
            raise DomainError(f"Bloch point norm {self.norm:.12f} exceeds 1")

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochPoint":
        """Surface point for polar angle theta, azimuth phi."""
        return cls(
            float(np.sin(theta) * np.cos(phi)),
            float(np.sin(theta) * np.sin(phi)),
            float(np.cos(theta)),
        )

    def angles(self) -> tuple[float, float]:
        """(theta, phi) with theta in [0, pi], phi in [0, 2*pi)."""
        theta = float(np.arccos(np.clip(self.z / max(self.norm, 1e-300), -1.0, 1.0)))
        phi = float(np.arctan2(self.y, self.x)) % (2 * np.pi)
        return theta, phi


@dataclass(frozen=True)
class MixtureDecomposition:
    """Convex mixture of pure states reproducing a density operator."""

    weights: np.ndarray
    components: tuple[PureVector, ...] = field(repr=False)

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if len(weights) != len(self.components):
            raise ShapeError("weights and components differ in length")
        if np.any(weights < -1e-12):
            raise DomainError("mixture weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > NORM_TOL:
            raise DomainError(f"mixture weights sum to {weights.sum():.12f}, expected 1")
        weights = weights.copy()
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", tuple(self.components))

    def reconstruct(self) -> DensityOperator:
        dim = self.components[0].dim
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for weight, comp in zip(self.weights, self.components):
            mat += weight * np.outer(comp.amplitudes, comp.amplitudes.conj())
        return DensityOperator(mat)


def density_from_vector(vector: PureVector) -> DensityOperator:
    """Rank-one projector |v><v|."""
    amps = vector.amplitudes
    return DensityOperator(np.outer(amps, amps.conj()))


def abstract_purity(rho: DensityOperator, tol: float = 1e-9) -> bool:
    """Basis-independent purity: Tr(rho^2) >= 1 - tol."""
    return rho.purity() >= 1.0 - tol


def _basis_columns(basis: np.ndarray, dim: int) -> np.ndarray:
    basis = qlin.as_complex(basis)
    if basis.shape != (dim, dim):
        raise ShapeError(f"basis is {basis.shape}, state needs {dim}x{dim}")
    gram = dagger(basis) @ basis
    if max_abs(gram - np.eye(dim)) > 1e-9:
        raise DomainError("basis columns are not orthonormal within 1e-9")
    return basis


def operational_purity(rho: DensityOperator, basis: np.ndarray, tol: float = 1e-9) -> bool:
    """Basis-dependent purity: some detector fires with certainty.

    ``basis`` holds the detector vectors as orthonormal columns.  True iff
    some column b has <b|rho|b> >= 1 - tol; for a trace-one PSD operator that
    pins rho to that projector within tol.
    """
    basis = _basis_columns(basis, rho.dim)
    diagonal = np.real(np.einsum("ij,jk,ki->i", dagger(basis), rho.matrix, basis))
    return bool(np.max(diagonal) >= 1.0 - tol)


def operational_purity_exists(rho: DensityOperator, tol: float = 1e-9) -> bool:
    """Existential reading: is there *any* basis with a certain detector?

    The best basis is the eigenbasis, so this is a max-eigenvalue test.
    """
    return float(np.linalg.eigvalsh(rho.matrix)[-1]) >= 1.0 - tol


@dataclass(frozen=True)
class PurityReport:
    abstract: bool
    operational: bool


def purity_agreement_report(
    rho: DensityOperator, basis: np.ndarray, tol: float = 1e-9
) -> PurityReport:
    """Both purity predicates side by side; they are not equivalent."""
    return PurityReport(
        abstract=abstract_purity(rho, tol),
        operational=operational_purity(rho, basis, tol),
    )


def density_from_bloch(point: BlochPoint) -> DensityOperator:
    """rho = (I + x*sx + y*sy + z*sz) / 2 on the qubit."""
    mat = (
        np.eye(2, dtype=np.complex128)
        + point.x * PAULI_X
        + point.y * PAULI_Y
        + point.z * PAULI_Z
    ) / 2.0
    return DensityOperator(mat)


def bloch_from_density(rho: DensityOperator) -> BlochPoint:
    if rho.dim != 2:
        raise ShapeError(f"Bloch coordinates are defined for qubits only, got dim {rho.dim}")
    return BlochPoint(
        float(np.real(np.trace(rho.matrix @ PAULI_X))),
        float(np.real(np.trace(rho.matrix @ PAULI_Y))),
        float(np.real(np.trace(rho.matrix @ PAULI_Z))),
    )


def shadow(vector: PureVector, axis: PureVector) -> tuple[complex, np.ndarray]:
    """Projection of ``vector`` onto the ray spanned by ``axis``.

    Returns (<axis|vector>, <axis|vector> * |axis>); the squared magnitude of
    the coefficient is the intensity on that axis.
    """
    if vector.dim != axis.dim:
        raise ShapeError(f"dimension mismatch {vector.dim} vs {axis.dim}")
    coefficient = complex(np.vdot(axis.amplitudes, vector.amplitudes))
    return coefficient, coefficient * axis.amplitudes


def projective_distance(p: DensityOperator, q: DensityOperator, tol: float = 1e-9) -> float:
    """Hilbert-Schmidt distance sqrt(Tr((P-Q)^2)) between rank-one projectors.

    Equals sqrt(2) exactly on orthogonal pairs.
    """
    if not abstract_purity(p, tol) or not abstract_purity(q, tol):
        raise DomainError("projective distance is defined for rank-one projectors")
    if p.dim != q.dim:
        raise ShapeError(f"dimension mismatch {p.dim} vs {q.dim}")
    diff = p.matrix - q.matrix
    return float(np.sqrt(max(0.0, float(np.real(np.trace(diff @ diff))))))


def spectral_decomposition(rho: DensityOperator) -> MixtureDecomposition:
    """Eigenvalue mixture; zero-weight components dropped."""
    spectrum = herm_eig(rho.matrix)
    weights = []
    components = []
    for value, column in zip(spectrum.eigenvalues, spectrum.eigenvectors.T):
        if value < WEIGHT_FLOOR:
            continue
        weights.append(float(value))
        components.append(PureVector.normalized(column))
    total = sum(weights)
    weights = [w / total for w in weights]
    return MixtureDecomposition(np.array(weights), tuple(components))


def alternative_decomposition(
    decomposition: MixtureDecomposition, mixer: np.ndarray
) -> MixtureDecomposition:
    """Re-express a mixture through an isometric mixing matrix.

    ``mixer`` is m x k with orthonormal columns, k the current component
    count.  New unnormalized components are sqrt(w'_i)|v'_i> =
    sum_j mixer[i, j] sqrt(w_j)|v_j>; the mixture reproduces the same
    density operator.
    """
    mixer = qlin.as_complex(mixer)
    k = len(decomposition.components)
    if mixer.ndim != 2 or mixer.shape[1] != k:
        raise ShapeError(f"mixer must have {k} columns, got shape {mixer.shape}")
    if mixer.shape[0] < k:
        raise DomainError("mixer must have at least as many rows as columns")
    gram = dagger(mixer) @ mixer
    if max_abs(gram - np.eye(k)) > 1e-9:
        raise DomainError("mixer columns are not orthonormal (not an isometry)")

    dim = decomposition.components[0].dim
    scaled = np.stack(
        [
            np.sqrt(w) * comp.amplitudes
            for w, comp in zip(decomposition.weights, decomposition.components)
        ]
    )  # k x dim
    mixed = mixer @ scaled  # m x dim
    weights = []
    components = []
    for row in mixed:
        weight = float(np.real(np.vdot(row, row)))
        if weight < WEIGHT_FLOOR:
            continue
        weights.append(weight)
        components.append(PureVector.normalized(row))
    return MixtureDecomposition(np.array(weights), tuple(components))
