"""Experimental arrangements: a state viewed through a choice of screens
(tensor factorization) and detectors (per-screen orthonormal bases).

The arrangement keeps two coordinates systems in sync: the ambient canonical
space, and detector coordinates in which the diagonal entries are the
intensities of the arrangement's powers.  Multi-indices map to flat indices
by canonical mixed radix with screen 0 most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qlin
from .errors import DegenerateConditioningError, DomainError, ShapeError
from .qlin import dagger, kron_all, max_abs
from .states import DensityOperator

INTENSITY_TOL = 1e-8
#: Conditioning refuses projectors with smaller overlap.
OVERLAP_FLOOR = 1e-12


@dataclass(frozen=True)
class Factorization:
    """Screen layout: screen k offers screen_dims[k] detector slots."""

    screen_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.screen_dims)
        if not dims or any(d < 1 for d in dims):
            raise DomainError(f"screen dims must be positive, got {dims}")
        object.__setattr__(self, "screen_dims", dims)

    @property
    def degree(self) -> int:
        return int(np.prod(self.screen_dims))

    @property
    def screens(self) -> int:
        return len(self.screen_dims)

    def flat_index(self, multi_index: Sequence[int]) -> int:
        if len(multi_index) != self.screens:
            raise ShapeError(
                f"multi-index has {len(multi_index)} entries for {self.screens} screens"
            )
        flat = 0
        for k, dim in zip(multi_index, self.screen_dims):
            if not 0 <= int(k) < dim:
                raise IndexError(f"detector index {k} out of range for screen of size {dim}")
            flat = flat * dim + int(k)
        return flat

    def multi_index(self, flat: int) -> tuple[int, ...]:
        if not 0 <= flat < self.degree:
            raise IndexError(f"flat index {flat} out of range for degree {self.degree}")
        out = []
        for dim in reversed(self.screen_dims):
            out.append(flat % dim)
            flat //= dim
        return tuple(reversed(out))


@dataclass(frozen=True)
class DetectorBasis:
    """One orthonormal basis per screen; columns are detector vectors."""

    screens: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = []
        for k, raw in enumerate(self.screens):
            mat = qlin.as_complex(raw)
            if mat.shape[0] != mat.shape[1]:
                raise ShapeError(f"screen {k} basis is not square: {mat.shape}")
            if max_abs(dagger(mat) @ mat - np.eye(mat.shape[0])) > 1e-9:
                raise DomainError(f"screen {k} basis columns are not orthonormal within 1e-9")
            mat = mat.copy()
            mat.flags.writeable = False
            mats.append(mat)
        object.__setattr__(self, "screens", tuple(mats))

    @classmethod
    def computational(cls, factorization: Factorization) -> "DetectorBasis":
        return cls(tuple(np.eye(d, dtype=np.complex128) for d in factorization.screen_dims))

    def product_matrix(self) -> np.ndarray:
        return kron_all(self.screens)


@dataclass(frozen=True)
class ExperimentalArrangement:
    """A density operator carved into screens and detectors.

    ``matrix`` is the state in detector coordinates; ``basis_matrix`` maps
    detector coordinates back to the ambient canonical space (its columns
    are the detector product vectors).
    """

    matrix: np.ndarray
    factorization: Factorization
    basis_matrix: np.ndarray

    def __post_init__(self):
        mat = qlin.as_complex(self.matrix)
        basis = qlin.as_complex(self.basis_matrix)
        n = self.factorization.degree
        if mat.shape != (n, n):
            raise ShapeError(f"matrix is {mat.shape}, factorization degree is {n}")
        if basis.shape != (n, n):
            raise ShapeError(f"basis matrix is {basis.shape}, expected {n}x{n}")
        if max_abs(dagger(basis) @ basis - np.eye(n)) > 1e-9:
            raise DomainError("basis matrix is not unitary within 1e-9")
        diag = np.real(np.diag(mat))
        if np.any(diag < -INTENSITY_TOL) or np.any(diag > 1 + INTENSITY_TOL):
            raise DomainError("diagonal intensities stray outside [0, 1]")
        if abs(float(diag.sum()) - 1.0) > INTENSITY_TOL:
            raise DomainError(f"intensities sum to {diag.sum():.12f}, expected 1")
        mat = mat.copy()
        mat.flags.writeable = False
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "basis_matrix", basis)

    @property
    def degree(self) -> int:
        return self.factorization.degree

    def intensities(self) -> np.ndarray:
        """Flat potentia vector (clipped to [0, 1])."""
        return np.clip(np.real(np.diag(self.matrix)), 0.0, 1.0)

    def canonical_density(self) -> DensityOperator:
        """The state in ambient canonical coordinates, basis unwound."""
        return DensityOperator(self.basis_matrix @ self.matrix @ dagger(self.basis_matrix))


def make_ea(
    rho: DensityOperator, factorization: Factorization, basis: DetectorBasis
) -> ExperimentalArrangement:
    """Express an ambient state in the detector coordinates of a screen layout."""
    if len(basis.screens) != factorization.screens:
        raise ShapeError(
            f"{len(basis.screens)} screen bases for {factorization.screens} screens"
        )
    for k, (mat, dim) in enumerate(zip(basis.screens, factorization.screen_dims)):
        if mat.shape[0] != dim:
            raise ShapeError(f"screen {k} basis is {mat.shape[0]}-dimensional, expected {dim}")
    if factorization.degree != rho.dim:
        raise ShapeError(
            f"state dim {rho.dim} does not match factorization degree {factorization.degree}"
        )
    product = basis.product_matrix()
    represented = dagger(product) @ rho.matrix @ product
    return ExperimentalArrangement(represented, factorization, product)


def power_intensity(ea: ExperimentalArrangement, multi_index: Sequence[int]) -> float:
    """The potentia of one power: the diagonal entry at the multi-index."""
    flat = ea.factorization.flat_index(multi_index)
    return float(np.clip(np.real(ea.matrix[flat, flat]), 0.0, 1.0))


def change_detectors(
    ea: ExperimentalArrangement, screen: int, new_basis: np.ndarray
) -> ExperimentalArrangement:
    """Swap the detectors of one screen.

    ``new_basis`` columns are the new detector vectors written in the
    screen's current detector coordinates.  The ambient state is untouched;
    only its representation moves.
    """
    dims = ea.factorization.screen_dims
    if not 0 <= screen < len(dims):
        raise IndexError(f"screen {screen} out of range for {len(dims)} screens")
    v = qlin.as_complex(new_basis)
    if v.shape != (dims[screen], dims[screen]):
        raise ShapeError(f"screen {screen} basis must be {dims[screen]}x{dims[screen]}, got {v.shape}")
    if max_abs(dagger(v) @ v - np.eye(dims[screen])) > 1e-9:
        raise DomainError("new detector basis is not orthonormal within 1e-9")
    factors = [np.eye(d, dtype=np.complex128) for d in dims]
    factors[screen] = v
    rotation = kron_all(factors)
    return ExperimentalArrangement(
        dagger(rotation) @ ea.matrix @ rotation,
        ea.factorization,
        ea.basis_matrix @ rotation,
    )


def refactor(
    ea: ExperimentalArrangement, new_factorization: Factorization
) -> ExperimentalArrangement:
    """Reinterpret the same detectors under a different screen layout.

    The flat detector list and the state entries are untouched; only the
    multi-index bookkeeping changes, so intensities survive as a flat list.
    """
    if new_factorization.degree != ea.degree:
        raise ShapeError(
            f"new factorization degree {new_factorization.degree} != arrangement degree {ea.degree}"
        )
    return ExperimentalArrangement(ea.matrix, new_factorization, ea.basis_matrix)


def ea_equivalent(
    ea1: ExperimentalArrangement, ea2: ExperimentalArrangement, tol: float = 1e-10
) -> bool:
    """Same degree and same ambient state once both bases are unwound."""
    if ea1.degree != ea2.degree:
        return False
    return (
        max_abs(ea1.canonical_density().matrix - ea2.canonical_density().matrix) <= tol
    )


def restrict(
    ea: ExperimentalArrangement, kept_detectors: Sequence[Sequence[int]]
) -> ExperimentalArrangement:
    """Condition the arrangement on a subset of detectors per screen.

    Projects onto the span of the kept detector vectors and renormalizes
    (P rho P / Tr(P rho P)); the result lives on the kept detectors in
    their own coordinates.
    """
    dims = ea.factorization.screen_dims
    if len(kept_detectors) != len(dims):
        raise ShapeError(f"{len(kept_detectors)} kept sets for {len(dims)} screens")
    kept: list[tuple[int, ...]] = []
    for screen, (subset, dim) in enumerate(zip(kept_detectors, dims)):
        indices = tuple(sorted(set(int(i) for i in subset)))
        if not indices:
            raise DomainError(f"screen {screen} keeps no detectors")
        if indices[0] < 0 or indices[-1] >= dim:
            raise IndexError(f"screen {screen} kept detectors {indices} out of range 0..{dim - 1}")
        kept.append(indices)

    flat_kept = []
    for multi in np.ndindex(*[len(k) for k in kept]):
        original = [kept[s][i] for s, i in enumerate(multi)]
        flat_kept.append(ea.factorization.flat_index(original))
    flat_kept = np.array(flat_kept, dtype=np.int64)

    block = ea.matrix[np.ix_(flat_kept, flat_kept)]
    overlap = float(np.real(np.trace(block)))
    if overlap <= OVERLAP_FLOOR:
        raise DegenerateConditioningError(
            f"kept detectors carry total intensity {overlap:.3e}; cannot condition"
        )
    reduced = Factorization(tuple(len(k) for k in kept))
    return ExperimentalArrangement(
        block / overlap,
        reduced,
        np.eye(reduced.degree, dtype=np.complex128),
    )


def multiscreen_effect(
    ea: ExperimentalArrangement, multi_index: Sequence[int]
) -> list[float]:
    """Per-screen marginal intensity of one power.

    Screen k's entry is the total intensity landing on detector
    multi_index[k] of screen k, all other screens summed over.
    """
    factorization = ea.factorization
    factorization.flat_index(multi_index)  # validates the index
    diag = np.real(np.diag(ea.matrix))
    marginals = []
    for screen, wanted in enumerate(multi_index):
        total = 0.0
        for flat, value in enumerate(diag):
            if factorization.multi_index(flat)[screen] == int(wanted):
                total += float(value)
        marginals.append(min(max(total, 0.0), 1.0))
    return marginals


@dataclass(frozen=True)
class ChainLink:
    """States how one arrangement is carved from the next-larger one."""

    kept_detectors: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ChainFailure:
    link: int
    reason: str


@dataclass(frozen=True)
class ChainReport:
    degrees: tuple[int, ...]
    failures: tuple[ChainFailure, ...]

    @property
    def valid(self) -> bool:
        return not self.failures


def complexity_chain_check(
    eas: Sequence[ExperimentalArrangement],
    links: Sequence[ChainLink] = (),
    tol: float = 1e-9,
) -> ChainReport:
    """Validate an ascending complexity chain of arrangements.

    ``eas`` is ordered smallest degree first; ``links[i]`` states the
    restriction deriving eas[i] from eas[i+1].  The degree sequence is the
    knowledge-quantification measure reported either way.
    """
    degrees = tuple(ea.degree for ea in eas)
    failures: list[ChainFailure] = []
    if len(eas) > 1 and len(links) != len(eas) - 1:
        raise ShapeError(f"{len(eas)} arrangements need {len(eas) - 1} links, got {len(links)}")
    for i in range(len(eas) - 1):
        if degrees[i] >= degrees[i + 1]:
            failures.append(
                ChainFailure(i, f"degree does not increase: {degrees[i]} -> {degrees[i + 1]}")
            )
            continue
        try:
            derived = restrict(eas[i + 1], links[i].kept_detectors)
        except (DomainError, ShapeError, IndexError) as exc:
            failures.append(ChainFailure(i, f"stated restriction fails: {exc}"))
            continue
        if derived.factorization != eas[i].factorization:
            failures.append(
                ChainFailure(
                    i,
                    "restriction yields factorization "
                    f"{derived.factorization.screen_dims}, chain claims "
                    f"{eas[i].factorization.screen_dims}",
                )
            )
            continue
        gap = max_abs(derived.matrix - eas[i].matrix)
        if gap > tol:
            failures.append(
                ChainFailure(i, f"restricted state differs by {gap:.3e} (> {tol:g})")
            )
    return ChainReport(degrees, tuple(failures))
