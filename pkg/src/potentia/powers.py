"""The graph of powers: projector nodes with commutation edges, intensive
valuations over them, contexts, the actualization map, and reconstruction of
the underlying density operator from a spanning valuation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import qlin
from .errors import CapacityError, DomainError, ResidualError, ShapeError, UnderdeterminedError
from .qlin import commutes, dagger, max_abs
from .states import DensityOperator

PROJECTOR_TOL = 1e-8
#: Potentia at or below this count as zero for actualization.
ZERO_THRESHOLD = 1e-10
#: Clique enumeration refuses larger graphs (worst case 3^(n/3) cliques).
CONTEXT_NODE_CAP = 24
#: Exhaustive binary-valuation search refuses larger graphs.
BINARY_SEARCH_NODE_CAP = 30
#: Orthogonal families are enumerated up to this size.
FAMILY_SIZE_CAP = 6


@dataclass(frozen=True)
class PowerNode:
    """A projector together with a human-readable label."""

    projector: np.ndarray
    label: str

    def __post_init__(self):
        mat = qlin.as_complex(self.projector)
        if mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"power {self.label!r} is not square: {mat.shape}")
        if max_abs(mat - dagger(mat)) > PROJECTOR_TOL:
            raise DomainError(f"power {self.label!r} is not Hermitian within {PROJECTOR_TOL:g}")
        if max_abs(mat @ mat - mat) > PROJECTOR_TOL:
            raise DomainError(f"power {self.label!r} is not idempotent within {PROJECTOR_TOL:g}")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "projector", mat)

    @property
    def dim(self) -> int:
        return self.projector.shape[0]


@dataclass(frozen=True)
class PowersGraph:
    """Projector nodes with an edge wherever two nodes commute."""

    nodes: tuple[PowerNode, ...]
    edges: frozenset[tuple[int, int]]
    dim: int
    identity_index: int

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return True
        return (min(i, j), max(i, j)) in self.edges

    def is_context(self, indices: Iterable[int]) -> bool:
        """True iff the index set induces a complete subgraph."""
        idx = sorted(set(indices))
        return all(self.adjacent(a, b) for k, a in enumerate(idx) for b in idx[k + 1 :])


@dataclass(frozen=True)
class Context:
    """Complete subgraph of a powers graph (mutually commuting powers)."""

    node_indices: frozenset[int]

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.node_indices))


@dataclass(frozen=True)
class ISAValuation:
    """Intensities in [0, 1] assigned to every node of a powers graph."""

    graph: PowersGraph
    potentia: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.potentia, dtype=np.float64).reshape(-1)
        if len(values) != len(self.graph.nodes):
            raise ShapeError(
                f"{len(values)} potentia for {len(self.graph.nodes)} nodes"
            )
        if np.any(values < -1e-12) or np.any(values > 1 + 1e-12):
            raise DomainError("potentia must lie in [0, 1]")
        values = np.clip(values, 0.0, 1.0)
        values.flags.writeable = False
        object.__setattr__(self, "potentia", values)

    def value(self, label: str) -> float:
        for node, pot in zip(self.graph.nodes, self.potentia):
            if node.label == label:
                return float(pot)
        raise KeyError(label)


def build_graph(
    projectors: Sequence[PowerNode], tol: float = PROJECTOR_TOL
) -> PowersGraph:
    """Wire commutation edges over a projector family; the identity is
    auto-added when missing."""
    nodes = list(projectors)
    if not nodes:
        raise DomainError("a powers graph needs at least one node")
    dim = nodes[0].dim
    for node in nodes:
        if node.dim != dim:
            raise ShapeError(f"power {node.label!r} has dim {node.dim}, expected {dim}")
    identity = np.eye(dim, dtype=np.complex128)
    identity_index = next(
        (i for i, node in enumerate(nodes) if max_abs(node.projector - identity) <= tol),
        None,
    )
    if identity_index is None:
        nodes.append(PowerNode(identity, "I"))
        identity_index = len(nodes) - 1
    edges = set()
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if commutes(nodes[i].projector, nodes[j].projector, tol):
                edges.add((i, j))
    return PowersGraph(tuple(nodes), frozenset(edges), dim, identity_index)


def isa_from_density(rho: DensityOperator, graph: PowersGraph) -> ISAValuation:
    """Born-rule valuation: potentia[i] = Tr(rho P_i)."""
    if rho.dim != graph.dim:
        raise ShapeError(f"state dim {rho.dim} vs graph dim {graph.dim}")
    values = np.array(
        [float(np.real(np.trace(rho.matrix @ node.projector))) for node in graph.nodes]
    )
    if np.any(values < -1e-10) or np.any(values > 1 + 1e-10):
        raise DomainError("Born values strayed outside [0,1] beyond boundary noise")
    return ISAValuation(graph, np.clip(values, 0.0, 1.0))


def orthogonal_families(
    graph: PowersGraph, tol: float = PROJECTOR_TOL, max_size: int = FAMILY_SIZE_CAP
) -> list[tuple[tuple[int, ...], int]]:
    """All orthogonal node families (size 2..max_size) whose sum is a node.

    Returns (family indices, index of the sum node) pairs.  Only families
    fully visible in the node set are recorded; subsets are capped at
    ``max_size`` since the general problem is exponential.
    """
    n = len(graph.nodes)
    mats = [node.projector for node in graph.nodes]
    orthogonal = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            orthogonal[i, j] = orthogonal[j, i] = max_abs(mats[i] @ mats[j]) <= tol

    found: list[tuple[tuple[int, ...], int]] = []

    def match_node(total: np.ndarray) -> int | None:
        for k in range(n):
            if max_abs(total - mats[k]) <= tol:
                return k
        return None

    def extend(family: list[int], total: np.ndarray, start: int):
        if len(family) >= 2:
            target = match_node(total)
            if target is not None:
                found.append((tuple(family), target))
        if len(family) >= max_size:
            return
        for nxt in range(start, n):
            if all(orthogonal[i, nxt] for i in family):
                extend(family + [nxt], total + mats[nxt], nxt + 1)

    for first in range(n):
        extend([first], mats[first].copy(), first + 1)
    return found


@dataclass(frozen=True)
class AdditivityViolation:
    family: tuple[int, ...]
    sum_node: int
    member_total: float
    sum_value: float


@dataclass(frozen=True)
class AxiomReport:
    identity_ok: bool
    identity_value: float
    additivity_violations: tuple[AdditivityViolation, ...]

    @property
    def ok(self) -> bool:
        return self.identity_ok and not self.additivity_violations


def check_isa_axioms(valuation: ISAValuation, tol: float = 1e-8) -> AxiomReport:
    """Verify the intensive-valuation axioms on the recorded node set.

    Violations are data, not errors: the report lists every orthogonal
    family whose summed potentia misses the sum node's potentia by more
    than ``tol``.
    """
    graph = valuation.graph
    identity_value = float(valuation.potentia[graph.identity_index])
    identity_ok = abs(identity_value - 1.0) <= tol
    violations = []
    for family, sum_node in orthogonal_families(graph):
        member_total = float(sum(valuation.potentia[i] for i in family))
        sum_value = float(valuation.potentia[sum_node])
        if abs(member_total - sum_value) > tol:
            violations.append(
                AdditivityViolation(family, sum_node, member_total, sum_value)
            )
    return AxiomReport(identity_ok, identity_value, tuple(violations))


def maximal_contexts(graph: PowersGraph) -> list[Context]:
    """All maximal cliques, deterministically ordered."""
    n = len(graph.nodes)
    if n > CONTEXT_NODE_CAP:
        raise CapacityError(
            f"clique enumeration capped at {CONTEXT_NODE_CAP} nodes, got {n}"
        )
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(graph.edges)
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(g))
    for clique in cliques:
        assert graph.is_context(clique)
    return [Context(frozenset(c)) for c in cliques]


def actualization_map(
    valuation: ISAValuation, zero_threshold: float = ZERO_THRESHOLD
) -> np.ndarray:
    """Binary existence map: 0 where the potentia vanishes, 1 elsewhere.

    Depends only on the zero set of the valuation.
    """
    return (valuation.potentia > zero_threshold).astype(np.int64)


def reconstruct_density(valuation: ISAValuation, residual_tol: float = 1e-7) -> DensityOperator:
    """Recover the unique density operator whose Born values match the valuation.

    Solves the real linear system Tr(rho P_i) = potentia[i] by least squares
    over Hermitian rho.  Requires the projector family to span the real
    vector space of Hermitian operators (dimension dim^2).
    """
    graph = valuation.graph
    dim = graph.dim
    if dim < 2:
        raise DomainError("reconstruction needs dim >= 2")
    needed = dim * dim

    def real_row(mat: np.ndarray) -> np.ndarray:
        # Hermitian rho parametrized as [diagonal, sqrt2*Re upper, sqrt2*Im upper].
        row = np.empty(needed)
        row[:dim] = np.real(np.diag(mat))
        k = dim
        for a in range(dim):
            for b in range(a + 1, dim):
                row[k] = np.sqrt(2.0) * np.real(mat[a, b])
                row[k + 1] = np.sqrt(2.0) * np.imag(mat[a, b])
                k += 2
        return row

    design = np.stack([real_row(node.projector) for node in graph.nodes])
    rank = int(np.linalg.matrix_rank(design, tol=1e-10))
    if rank < needed:
        raise UnderdeterminedError(
            f"projector family spans rank {rank} of {needed} Hermitian dimensions",
            rank=rank,
            needed=needed,
        )
    solution, *_ = np.linalg.lstsq(design, valuation.potentia, rcond=None)
    residual = float(np.max(np.abs(design @ solution - valuation.potentia)))
    if residual > residual_tol:
        raise ResidualError(
            f"valuation is inconsistent: residual {residual:.3e} > {residual_tol:g}",
            residual=residual,
        )
    rho = np.zeros((dim, dim), dtype=np.complex128)
    np.fill_diagonal(rho, solution[:dim])
    k = dim
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for a in range(dim):
        for b in range(a + 1, dim):
            rho[a, b] = inv_sqrt2 * (solution[k] + 1j * solution[k + 1])
            rho[b, a] = np.conj(rho[a, b])
            k += 2
    return DensityOperator(rho)


def find_additive_binary_valuation(
    graph: PowersGraph, tol: float = PROJECTOR_TOL
) -> np.ndarray | None:
    """Complete backtracking search for a {0,1} valuation passing the axioms.

    Returns one admissible assignment aligned with the nodes, or None when
    none exists (the search is exhaustive over the constrained space, so
    None is a proof of nonexistence for the recorded constraint set).
    """
    n = len(graph.nodes)
    if n > BINARY_SEARCH_NODE_CAP:
        raise CapacityError(
            f"binary valuation search capped at {BINARY_SEARCH_NODE_CAP} nodes, got {n}"
        )
    constraints = orthogonal_families(graph, tol)
    # Assign the identity first so family constraints become checkable (and
    # prune) as soon as their last member gets a value.
    order = [graph.identity_index] + [i for i in range(n) if i != graph.identity_index]
    position_of = {node: pos for pos, node in enumerate(order)}
    by_last: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(n)]
    for family, sum_node in constraints:
        last = max(position_of[i] for i in (*family, sum_node))
        by_last[last].append((family, sum_node))

    assignment = np.full(n, -1, dtype=np.int64)

    def admissible_at(position: int) -> bool:
        for family, sum_node in by_last[position]:
            if sum(assignment[i] for i in family) != assignment[sum_node]:
                return False
        return True

    def backtrack(position: int) -> bool:
        if position == n:
            return True
        node = order[position]
        choices = (1,) if node == graph.identity_index else (0, 1)
        for choice in choices:
            assignment[node] = choice
            if admissible_at(position) and backtrack(position + 1):
                return True
        assignment[node] = -1
        return False

    return assignment.copy() if backtrack(0) else None
