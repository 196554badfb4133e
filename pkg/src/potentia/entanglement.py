"""Separability and entanglement machinery.

Verdicts are three-valued: criteria that are merely necessary for
separability answer Inconclusive when they fail to detect anything, and a
Separable verdict is only ever issued where positivity of the partial
transpose is sufficient (2x2 and 2x3).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qlin
from .errors import DomainError, NoWitnessError, ShapeError
from .qlin import dagger, herm_eig, max_abs, partial_trace, partial_transpose
from .states import DensityOperator, PureVector, abstract_purity

PT_NEGATIVITY_TOL = 1e-9
MAJORIZATION_TOL = 1e-9
ENTROPY_TOL = 1e-9
#: Schmidt coefficients below this count as zero when ranking.
SCHMIDT_FLOOR = 1e-9

#: Bipartite shapes where PPT is sufficient for separability.
PPT_SUFFICIENT = {(2, 2), (2, 3), (3, 2)}


class Verdict(enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    INCONCLUSIVE = "Inconclusive"


class WernerRegion(enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED_LOCAL = "EntangledLocal"
    NONLOCAL = "Nonlocal"


@dataclass(frozen=True)
class SeparabilityVerdict:
    verdict: Verdict
    criterion: str
    evidence: float

    def __post_init__(self):
        if self.verdict is Verdict.ENTANGLED and not self.evidence < 0:
            raise DomainError(
                "an Entangled verdict must carry strictly negative evidence "
                f"(violation margin), got {self.evidence!r}"
            )


def _bipartite(rho: DensityOperator, dims: Sequence[int]) -> tuple[int, int]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise ShapeError(f"expected two factors, got dims {dims}")
    if dims[0] * dims[1] != rho.dim:
        raise ShapeError(f"dims {dims} multiply to {dims[0] * dims[1]}, state dim is {rho.dim}")
    return dims


def schmidt(vector: PureVector, dims: Sequence[int]) -> np.ndarray:
    """Schmidt coefficients (descending); exactly one above threshold means product."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or dims[0] * dims[1] != vector.dim:
        raise ShapeError(f"dims {dims} do not factor a {vector.dim}-dimensional vector")
    coefficients = np.linalg.svd(
        vector.amplitudes.reshape(dims), compute_uv=False
    )
    return coefficients


def schmidt_rank(vector: PureVector, dims: Sequence[int], floor: float = SCHMIDT_FLOOR) -> int:
    return int(np.sum(schmidt(vector, dims) > floor))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """-sum(p log2 p) over the spectrum, in bits; zero iff abstractly pure."""
    values = qlin.clip_spectrum(np.linalg.eigvalsh(rho.matrix))
    positive = values[values > 0]
    return float(-np.sum(positive * np.log2(positive))) + 0.0


def entropy_additivity_check(
    a: DensityOperator, b: DensityOperator, tol: float = ENTROPY_TOL
) -> bool:
    """|S(a (x) b) - S(a) - S(b)| <= tol."""
    joint = DensityOperator(qlin.kron(a.matrix, b.matrix))
    return abs(von_neumann_entropy(joint) - von_neumann_entropy(a) - von_neumann_entropy(b)) <= tol


def entropy_criterion(
    rho: DensityOperator, dims: Sequence[int], tol: float = ENTROPY_TOL
) -> SeparabilityVerdict:
    """Necessary criterion: a separable state is at least as entropic as its parts."""
    d_a, d_b = _bipartite(rho, dims)
    joint = von_neumann_entropy(rho)
    part_a = von_neumann_entropy(DensityOperator(partial_trace(rho.matrix, (d_a, d_b), (0,))))
    part_b = von_neumann_entropy(DensityOperator(partial_trace(rho.matrix, (d_a, d_b), (1,))))
    margin = min(joint - part_a, joint - part_b)
    if margin < -tol:
        return SeparabilityVerdict(Verdict.ENTANGLED, "entropy", margin)
    return SeparabilityVerdict(Verdict.INCONCLUSIVE, "entropy", margin)


def _majorization_margin(global_spec: np.ndarray, reduced_spec: np.ndarray) -> float:
    """Most negative slack of the reduced partial sums over the global ones."""
    padded = np.zeros_like(global_spec)
    padded[: len(reduced_spec)] = reduced_spec
    return float(np.min(np.cumsum(padded) - np.cumsum(global_spec)))


def majorization_criterion(
    rho: DensityOperator, dims: Sequence[int], tol: float = MAJORIZATION_TOL
) -> SeparabilityVerdict:
    """Necessary criterion: the global spectrum of a separable state is
    majorized by each reduced spectrum (zero-padded partial sums)."""
    d_a, d_b = _bipartite(rho, dims)
    global_spec = np.sort(np.linalg.eigvalsh(rho.matrix))[::-1]
    margins = []
    for keep in ((0,), (1,)):
        reduced = partial_trace(rho.matrix, (d_a, d_b), keep)
        reduced_spec = np.sort(np.linalg.eigvalsh(reduced))[::-1]
        margins.append(_majorization_margin(global_spec, reduced_spec))
    margin = min(margins)
    if margin < -tol:
        return SeparabilityVerdict(Verdict.ENTANGLED, "majorization", margin)
    return SeparabilityVerdict(Verdict.INCONCLUSIVE, "majorization", margin)


def min_pt_eigenvalue(rho: DensityOperator, dims: Sequence[int]) -> float:
    d_a, d_b = _bipartite(rho, dims)
    return float(np.linalg.eigvalsh(partial_transpose(rho.matrix, (d_a, d_b), "B"))[0])


def ppt_criterion(
    rho: DensityOperator, dims: Sequence[int], tol: float = PT_NEGATIVITY_TOL
) -> SeparabilityVerdict:
    """Partial-transpose test; an exact oracle at 2x2 and 2x3."""
    d_a, d_b = _bipartite(rho, dims)
    minimum = min_pt_eigenvalue(rho, dims)
    if minimum < -tol:
        return SeparabilityVerdict(Verdict.ENTANGLED, "ppt", minimum)
    if (d_a, d_b) in PPT_SUFFICIENT:
        return SeparabilityVerdict(Verdict.SEPARABLE, "ppt", minimum)
    return SeparabilityVerdict(Verdict.INCONCLUSIVE, "ppt", minimum)


@dataclass(frozen=True)
class WitnessOperator:
    """Hermitian observable separating one entangled state from all product states."""

    matrix: np.ndarray
    reference_state: DensityOperator

    def __post_init__(self):
        mat = qlin.as_complex(self.matrix)
        if max_abs(mat - dagger(mat)) > 1e-9:
            raise DomainError("witness must be Hermitian")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def expectation(self, rho: DensityOperator) -> float:
        return float(np.real(np.trace(self.matrix @ rho.matrix)))


def witness_from_entangled(
    rho: DensityOperator, dims: Sequence[int]
) -> WitnessOperator:
    """Witness from the negative eigenvector of the partial transpose.

    W = (|eta><eta|)^T_B with eta the most negative eigenvector of
    rho^T_B; then Tr(W rho) equals that negative eigenvalue while every
    product state scores >= 0.
    """
    d_a, d_b = _bipartite(rho, dims)
    transposed = partial_transpose(rho.matrix, (d_a, d_b), "B")
    spectrum = herm_eig(transposed)
    minimum = float(spectrum.eigenvalues[-1])
    if minimum >= -PT_NEGATIVITY_TOL:
        raise NoWitnessError(
            f"state is PPT (min partial-transpose eigenvalue {minimum:.3e}); "
            "the eigenvector construction yields no witness"
        )
    eta = spectrum.eigenvectors[:, -1]
    witness = partial_transpose(np.outer(eta, eta.conj()), (d_a, d_b), "B")
    return WitnessOperator(witness, rho)


def check_witness_on_products(
    witness: WitnessOperator,
    dims: Sequence[int],
    samples: int = 10_000,
    seed: int = 0,
) -> float:
    """Minimum witness expectation over sampled pure product states."""
    from .sampling import random_pure  # local import to avoid a cycle

    d_a, d_b = int(dims[0]), int(dims[1])
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        left = random_pure(d_a, rng).amplitudes
        right = random_pure(d_b, rng).amplitudes
        product = np.kron(left, right)
        value = float(np.real(np.vdot(product, witness.matrix @ product)))
        worst = min(worst, value)
    return worst


def werner(p: float) -> DensityOperator:
    """p |phi+><phi+| + (1 - p) I/4 on two qubits."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Werner parameter must lie in [0, 1], got {p}")
    phi = np.zeros(4, dtype=np.complex128)
    phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
    return DensityOperator(p * np.outer(phi, phi.conj()) + (1.0 - p) * np.eye(4) / 4.0)


def werner_classify(p: float) -> WernerRegion:
    """Region of the Werner line, computed from the criteria (not hard-coded)."""
    from .bell import chsh_max  # local import to avoid a cycle

    rho = werner(p)
    if ppt_criterion(rho, (2, 2)).verdict is Verdict.SEPARABLE:
        return WernerRegion.SEPARABLE
    if chsh_max(rho).value > 2.0 + 1e-9:
        return WernerRegion.NONLOCAL
    return WernerRegion.ENTANGLED_LOCAL
