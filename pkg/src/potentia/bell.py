"""CHSH correlation analysis for two-qubit states.

Correlations live in the 3x3 matrix t[i, j] = Tr(rho s_i (x) s_j); the
best CHSH score over all measurement directions is 2*sqrt(m1 + m2) with
m1, m2 the two largest eigenvalues of t^T t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qlin
from .errors import DomainError, ShapeError
from .states import PAULI_X, PAULI_Y, PAULI_Z, DensityOperator
from .entanglement import Verdict, WernerRegion, ppt_criterion

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * np.sqrt(2.0)

_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class CorrelationMatrix:
    t: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.t, dtype=np.float64)
        if mat.shape != (3, 3):
            raise ShapeError(f"correlation matrix must be 3x3, got {mat.shape}")
        if np.max(np.abs(mat)) > 1 + 1e-9:
            raise DomainError("correlation entries must lie in [-1, 1]")
        if np.max(np.linalg.svd(mat, compute_uv=False)) > 1 + 1e-9:
            raise DomainError("correlation singular values must not exceed 1")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "t", mat)


def _unit(vector) -> np.ndarray:
    v = np.asarray(vector, dtype=np.float64).reshape(-1)
    if v.shape != (3,):
        raise ShapeError(f"Bloch direction must be a 3-vector, got shape {v.shape}")
    if abs(float(np.linalg.norm(v)) - 1.0) > 1e-9:
        raise DomainError(f"Bloch direction norm is {np.linalg.norm(v):.9f}, expected 1")
    return v


@dataclass(frozen=True)
class MeasurementSetting:
    """Bloch directions a, a' for one side and b, b' for the other."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            vec = _unit(getattr(self, name))
            vec.flags.writeable = False
            object.__setattr__(self, name, vec)


def _require_two_qubits(rho: DensityOperator):
    if rho.dim != 4:
        raise ShapeError(f"CHSH analysis needs a two-qubit state, got dim {rho.dim}")


def correlation_matrix(rho: DensityOperator) -> CorrelationMatrix:
    _require_two_qubits(rho)
    t = np.empty((3, 3))
    for i, si in enumerate(_PAULIS):
        for j, sj in enumerate(_PAULIS):
            t[i, j] = float(np.real(np.trace(rho.matrix @ qlin.kron(si, sj))))
    return CorrelationMatrix(t)


def chsh_value(rho: DensityOperator, setting: MeasurementSetting) -> float:
    """E(a,b) + E(a,b') + E(a',b) - E(a',b') with E(u,v) = u^T t v."""
    t = correlation_matrix(rho).t

    def correlate(u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ t @ v)

    return (
        correlate(setting.a, setting.b)
        + correlate(setting.a, setting.b_prime)
        + correlate(setting.a_prime, setting.b)
        - correlate(setting.a_prime, setting.b_prime)
    )


@dataclass(frozen=True)
class ChshMax:
    value: float
    setting: MeasurementSetting


def _sign_fix(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Lexicographic convention: first nonzero component of u is positive;
    # flipping u and v together leaves the correlation term unchanged.
    for entry in u:
        if abs(entry) > 1e-12:
            if entry < 0:
                return -u, -v
            break
    return u, v


def chsh_max(rho: DensityOperator) -> ChshMax:
    """Closed-form maximum 2*sqrt(m1 + m2), with an achieving setting.

    The setting is built from the two leading singular directions of the
    correlation matrix; ``chsh_value`` at that setting reproduces the
    maximum.
    """
    t = correlation_matrix(rho).t
    left, singulars, right_t = np.linalg.svd(t)
    u1, v1 = _sign_fix(left[:, 0], right_t[0])
    u2, v2 = _sign_fix(left[:, 1], right_t[1])
    s1, s2 = float(singulars[0]), float(singulars[1])
    value = 2.0 * np.sqrt(s1 * s1 + s2 * s2)
    angle = np.arctan2(s2, s1)
    b = np.cos(angle) * v1 + np.sin(angle) * v2
    b_prime = np.cos(angle) * v1 - np.sin(angle) * v2
    setting = MeasurementSetting(u1, u2, b, b_prime)
    return ChshMax(float(value), setting)


def classify_regions(rho: DensityOperator) -> WernerRegion:
    """Three-way split: PPT-separable / entangled but CHSH-local / nonlocal."""
    _require_two_qubits(rho)
    if ppt_criterion(rho, (2, 2)).verdict is Verdict.SEPARABLE:
        return WernerRegion.SEPARABLE
    if chsh_max(rho).value > CLASSICAL_BOUND + 1e-9:
        return WernerRegion.NONLOCAL
    return WernerRegion.ENTANGLED_LOCAL
