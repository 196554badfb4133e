"""JSON file schemas: states, projector families, and instruments.

All files are UTF-8 JSON with a mandatory ``schema_version`` ("1").
Complex entries are two-element ``[re, im]`` arrays; matrices are row-major
(a list of rows).  Structural problems raise ParseError (CLI exit 2),
physical-invariant failures raise ValidationError (CLI exit 3).
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .arrangements import DetectorBasis, Factorization
from .errors import DomainError, ParseError, ShapeError, ValidationError
from .locc import CPMap, QuantumInstrument
from .powers import PowerNode
from .states import DensityOperator

SCHEMA_VERSION = "1"


@dataclass
class Tolerances:
    """Load- and analysis-time tolerances; every field can be overridden
    via the CLI ``--tol name=value`` flag or a config file."""

    hermiticity: float = 1e-9
    trace: float = 1e-9
    orthonormality: float = 1e-9
    purity: float = 1e-9
    verdict: float = 1e-9
    equivalence: float = 1e-10
    axioms: float = 1e-8
    zero: float = 1e-10

    def override(self, name: str, value: float) -> None:
        if not any(field.name == name for field in dataclasses.fields(self)):
            known = ", ".join(field.name for field in dataclasses.fields(self))
            raise ParseError(f"unknown tolerance {name!r}; known: {known}")
        setattr(self, name, float(value))

    @classmethod
    def from_config(cls, mapping: dict) -> "Tolerances":
        tols = cls()
        for name, value in mapping.items():
            tols.override(name, value)
        return tols


def matrix_to_json(matrix: np.ndarray) -> list:
    """Row-major nested list of [re, im] pairs."""
    return [
        [[float(entry.real), float(entry.imag)] for entry in row]
        for row in np.asarray(matrix, dtype=np.complex128)
    ]


def _entry_from_json(entry, path: str) -> complex:
    if (
        not isinstance(entry, list)
        or len(entry) != 2
        or not all(isinstance(part, (int, float)) for part in entry)
    ):
        raise ParseError(f"{path}: complex entries must be [re, im] number pairs")
    return complex(entry[0], entry[1])


def matrix_from_json(rows, path: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{path}: expected a nonempty list of rows")
    width = None
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise ParseError(f"{path}[{r}]: expected a nonempty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{path}[{r}]: row has {len(row)} entries, expected {width}")
        out.append([_entry_from_json(entry, f"{path}[{r}][{c}]") for c, entry in enumerate(row)])
    return np.array(out, dtype=np.complex128)


def _load_json(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(document, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return document


def _require(document: dict, key: str, kind: type, path: str):
    if key not in document:
        raise ParseError(f"{path}: missing required field {key!r}")
    value = document[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{path}.{key}: expected a number")
        return float(value)
    if not isinstance(value, kind):
        raise ParseError(f"{path}.{key}: expected {kind.__name__}")
    return value


def _check_schema(document: dict, path: str):
    version = _require(document, "schema_version", str, path)
    if version != SCHEMA_VERSION:
        raise ParseError(f"{path}.schema_version: unsupported version {version!r}")


@dataclass(frozen=True)
class StateFile:
    density: DensityOperator
    factorization: Factorization
    basis: DetectorBasis
    label: str | None
    has_explicit_factorization: bool
    has_explicit_bases: bool


def load_state(path: str | Path, tolerances: Tolerances | None = None) -> StateFile:
    """Parse and validate a state file.

    The matrix must satisfy the density-operator invariants within the
    configured tolerances; it is then canonicalized (symmetrized and
    trace-normalized) before analysis.
    """
    tols = tolerances or Tolerances()
    document = _load_json(path)
    name = str(path)
    _check_schema(document, name)
    dim = _require(document, "dim", int, name)
    if dim < 1:
        raise ParseError(f"{name}.dim: must be a positive integer")
    matrix = matrix_from_json(_require(document, "matrix", list, name), f"{name}.matrix")
    if matrix.shape != (dim, dim):
        raise ParseError(f"{name}.matrix: shape {matrix.shape} does not match dim {dim}")

    asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
    if asymmetry > tols.hermiticity:
        raise ValidationError(
            f"{name}: matrix violates Hermiticity (max asymmetry {asymmetry:.3e} "
            f"> {tols.hermiticity:g})"
        )
    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > tols.trace:
        raise ValidationError(f"{name}: matrix violates unit trace (trace {trace:.12g})")
    canonical = (matrix + matrix.conj().T) / 2.0
    canonical /= np.real(np.trace(canonical))
    try:
        density = DensityOperator(canonical)
    except DomainError as exc:
        raise ValidationError(f"{name}: {exc}")

    has_factorization = "factorization" in document
    if has_factorization:
        dims = document["factorization"]
        if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
            raise ParseError(f"{name}.factorization: expected a list of integers")
        factorization = Factorization(tuple(dims))
        if factorization.degree != dim:
            raise ValidationError(
                f"{name}: factorization {dims} multiplies to {factorization.degree}, dim is {dim}"
            )
    else:
        factorization = Factorization((dim,))

    has_bases = "bases" in document
    if has_bases:
        raw_bases = document["bases"]
        if not isinstance(raw_bases, list) or len(raw_bases) != factorization.screens:
            raise ParseError(
                f"{name}.bases: expected one basis per screen ({factorization.screens})"
            )
        screens = []
        for k, raw in enumerate(raw_bases):
            screen = matrix_from_json(raw, f"{name}.bases[{k}]")
            if screen.shape != (factorization.screen_dims[k],) * 2:
                raise ParseError(
                    f"{name}.bases[{k}]: shape {screen.shape} does not match screen dim "
                    f"{factorization.screen_dims[k]}"
                )
            screens.append(screen)
        try:
            basis = DetectorBasis(tuple(screens))
        except (DomainError, ShapeError) as exc:
            raise ValidationError(f"{name}: {exc}")
    else:
        basis = DetectorBasis.computational(factorization)

    label = document.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError(f"{name}.label: expected a string")
    return StateFile(density, factorization, basis, label, has_factorization, has_bases)


def state_document(
    density: DensityOperator,
    factorization: Factorization | None = None,
    basis: DetectorBasis | None = None,
    label: str | None = None,
) -> dict:
    """Serializable state-file dictionary."""
    document: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "dim": density.dim,
        "matrix": matrix_to_json(density.matrix),
    }
    if factorization is not None:
        document["factorization"] = list(factorization.screen_dims)
    if basis is not None:
        document["bases"] = [matrix_to_json(screen) for screen in basis.screens]
    if label is not None:
        document["label"] = label
    return document


def dump_state(path: str | Path, document: dict) -> None:
    Path(path).write_text(render_json(document), encoding="utf-8")


def load_projectors(path: str | Path) -> list[PowerNode]:
    document = _load_json(path)
    name = str(path)
    _check_schema(document, name)
    dim = _require(document, "dim", int, name)
    raw_nodes = _require(document, "projectors", list, name)
    if not raw_nodes:
        raise ParseError(f"{name}.projectors: expected at least one projector")
    nodes = []
    for k, raw in enumerate(raw_nodes):
        if not isinstance(raw, dict):
            raise ParseError(f"{name}.projectors[{k}]: expected an object")
        label = raw.get("label", f"P{k}")
        if not isinstance(label, str):
            raise ParseError(f"{name}.projectors[{k}].label: expected a string")
        matrix = matrix_from_json(
            _require(raw, "matrix", list, f"{name}.projectors[{k}]"),
            f"{name}.projectors[{k}].matrix",
        )
        if matrix.shape != (dim, dim):
            raise ParseError(
                f"{name}.projectors[{k}].matrix: shape {matrix.shape} does not match dim {dim}"
            )
        try:
            nodes.append(PowerNode(matrix, label))
        except (DomainError, ShapeError) as exc:
            raise ValidationError(f"{name}: projector {label!r} invalid: {exc}")
    return nodes


def load_instrument(path: str | Path) -> QuantumInstrument:
    document = _load_json(path)
    name = str(path)
    _check_schema(document, name)
    raw_branches = _require(document, "branches", list, name)
    if not raw_branches:
        raise ParseError(f"{name}.branches: expected at least one branch")
    branches = []
    for k, raw in enumerate(raw_branches):
        if not isinstance(raw, dict):
            raise ParseError(f"{name}.branches[{k}]: expected an object")
        raw_kraus = _require(raw, "kraus", list, f"{name}.branches[{k}]")
        if not raw_kraus:
            raise ParseError(f"{name}.branches[{k}].kraus: expected at least one operator")
        kraus = tuple(
            matrix_from_json(mat, f"{name}.branches[{k}].kraus[{i}]")
            for i, mat in enumerate(raw_kraus)
        )
        try:
            branches.append(CPMap(kraus))
        except (DomainError, ShapeError) as exc:
            raise ValidationError(f"{name}: branch {k} invalid: {exc}")
    try:
        return QuantumInstrument(tuple(branches))
    except (DomainError, ShapeError) as exc:
        raise ValidationError(f"{name}: {exc}")


def render_json(document: dict) -> str:
    """Canonical JSON rendering: sorted keys, two-space indent, newline-terminated."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"
