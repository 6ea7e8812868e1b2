"""Global numbering, constraint handling, sparse assembly and linear solve.

Trace unknowns on inflow boundary interfaces are imposed strongly (their
projected boundary data is lifted to the right-hand side), characteristic
interfaces carry no unknowns at all, and everything else is free. The
assembled matrix couples an element's interior unknowns only with its own
interfaces, so the sparsity graph is that of the mesh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .basis import pk_dim
from .exceptions import ProblemSetupError, SolverError
from .mesh import FaceClassification, FlowClass, PolygonalMesh, classify_faces
from .operators import (
    WeakFunction,
    default_quad_degree,
    local_bilinear,
    local_rhs,
    project_qb,
)


@dataclass
class DofMap:
    """Global indices of the free unknowns plus constraint bookkeeping."""

    degree: int
    n_free: int
    interior_start: np.ndarray  # (n_elements,) first interior index
    trace_start: np.ndarray  # (n_interfaces,) first trace index or -1
    constrained: dict[int, np.ndarray]  # interface -> prescribed trace coefficients
    eliminated: frozenset[int]

    @property
    def interior_dim(self) -> int:
        return pk_dim(self.degree)

    def live_mask(self, n_interfaces: int) -> np.ndarray:
        live = np.ones(n_interfaces, dtype=bool)
        live[list(self.eliminated)] = False
        return live


def build_dofmap(
    mesh: PolygonalMesh,
    cls: FaceClassification,
    problem,
    degree: int,
    quad_degree: int | None = None,
) -> DofMap:
    """Number unknowns: interiors first (element order), then live free
    traces (interface order). Inflow boundary traces store their projected
    boundary data; characteristic interfaces are dropped on both sides."""
    d0 = pk_dim(degree)
    eliminated = set()
    constrained: dict[int, np.ndarray] = {}
    g = problem.g if problem.g is not None else (lambda pts, tag=None: np.zeros(len(np.atleast_2d(pts))))

    for i, iface in enumerate(mesh.interfaces):
        left_class = cls.flow_class(iface.left, i)
        if iface.is_boundary:
            if left_class is FlowClass.CHARACTERISTIC:
                eliminated.add(i)
            elif left_class is FlowClass.MIXED:
                raise ProblemSetupError(
                    f"boundary interface {i} is mixed (beta.n changes sign); split it upstream"
                )
            elif left_class is FlowClass.INFLOW:
                constrained[i] = project_qb(
                    mesh, i, lambda pts: g(pts, iface.tag), degree, quad_degree
                )
        else:
            char_left = left_class is FlowClass.CHARACTERISTIC
            char_right = cls.flow_class(iface.right, i) is FlowClass.CHARACTERISTIC
            if char_left != char_right:
                raise ProblemSetupError(
                    f"interface {i} is characteristic on one side only; classification must be symmetric"
                )
            if char_left:
                eliminated.add(i)

    interior_start = np.arange(mesh.n_elements, dtype=np.int64) * d0
    trace_start = np.full(mesh.n_interfaces, -1, dtype=np.int64)
    offset = mesh.n_elements * d0
    for i in range(mesh.n_interfaces):
        if i in eliminated or i in constrained:
            continue
        trace_start[i] = offset
        offset += degree + 1
    return DofMap(degree, int(offset), interior_start, trace_start, constrained, frozenset(eliminated))


@dataclass
class SparseSystem:
    """Nonsymmetric sparse operator and load over the free unknowns."""

    matrix: sp.csr_matrix
    rhs: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def dump(self, path) -> None:
        """MatrixMarket dump (matrix at `path`, load vector alongside)."""
        from scipy.io import mmwrite

        mmwrite(str(path), self.matrix)


def assemble(
    mesh: PolygonalMesh,
    problem,
    dofmap: DofMap,
    quad_degree: int | None = None,
) -> SparseSystem:
    """Accumulate element blocks into triplets (deterministic element, then
    interface order) and compress; prescribed trace values are lifted to
    the right-hand side."""
    degree = dofmap.degree
    qd = quad_degree or default_quad_degree(degree)
    d0 = dofmap.interior_dim
    nb = degree + 1
    live = dofmap.live_mask(mesh.n_interfaces)

    rows, cols, vals = [], [], []
    b = np.zeros(dofmap.n_free)

    for e in range(mesh.n_elements):
        op = local_bilinear(mesh, e, problem.beta, problem.alpha, degree, live, qd)
        fe = local_rhs(mesh, e, problem.f, degree, qd)

        glob = np.empty(op.size, dtype=np.int64)
        fixed_vals = np.zeros(op.size)
        free = np.ones(op.size, dtype=bool)
        glob[:d0] = dofmap.interior_start[e] + np.arange(d0)
        for slot, i in enumerate(op.interface_ids):
            sl = slice(d0 + slot * nb, d0 + (slot + 1) * nb)
            if i in dofmap.constrained:
                free[sl] = False
                fixed_vals[sl] = dofmap.constrained[i]
                glob[sl] = -1
            else:
                glob[sl] = dofmap.trace_start[i] + np.arange(nb)

        rf = np.flatnonzero(free)
        cf = rf
        cc = np.flatnonzero(~free)
        block = op.matrix[np.ix_(rf, cf)]
        rows.append(np.repeat(glob[rf], len(cf)))
        cols.append(np.tile(glob[cf], len(rf)))
        vals.append(block.ravel())
        if len(cc):
            b[glob[rf]] -= op.matrix[np.ix_(rf, cc)] @ fixed_vals[cc]
        b[glob[:d0]] += fe

    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dofmap.n_free, dofmap.n_free),
    ).tocsr()

    if not np.isfinite(matrix.data).all() or not np.isfinite(b).all():
        raise SolverError("assembled system contains non-finite entries")
    empty = np.flatnonzero(np.diff(matrix.indptr) == 0)
    if len(empty):
        raise SolverError(f"assembled matrix has structurally empty rows (first: {empty[0]})")
    return SparseSystem(matrix, b)


def solve(system: SparseSystem) -> np.ndarray:
    """Sparse direct solve meeting the residual contract
    ||Ax-b|| <= 1e-12 (||A|| ||x|| + ||b||)."""
    matrix = system.matrix.tocsc()
    try:
        lu = spla.splu(matrix)
        x = lu.solve(system.rhs)
    except (RuntimeError, ValueError) as exc:
        raise SolverError(f"sparse factorization failed: {exc}") from exc
    if not np.isfinite(x).all():
        raise SolverError("solver produced non-finite values (singular system?)")

    norm_a = spla.norm(system.matrix)
    for _ in range(2):
        residual = system.rhs - system.matrix @ x
        bound = 1e-12 * (norm_a * np.linalg.norm(x) + np.linalg.norm(system.rhs))
        if np.linalg.norm(residual) <= bound:
            return x
        x = x + lu.solve(residual)
    residual = np.linalg.norm(system.rhs - system.matrix @ x)
    bound = 1e-12 * (norm_a * np.linalg.norm(x) + np.linalg.norm(system.rhs))
    if residual > bound:
        raise SolverError(f"residual {residual:.3e} exceeds bound {bound:.3e}")
    return x


def scatter_solution(mesh: PolygonalMesh, dofmap: DofMap, x: np.ndarray) -> WeakFunction:
    """Spread a free-unknown vector into a weak function, filling prescribed
    trace values and leaving eliminated interfaces dead."""
    degree = dofmap.degree
    wf = WeakFunction.zeros(mesh, degree, live=dofmap.live_mask(mesh.n_interfaces))
    d0 = dofmap.interior_dim
    for e in range(mesh.n_elements):
        wf.interior[e] = x[dofmap.interior_start[e] : dofmap.interior_start[e] + d0]
    for i in range(mesh.n_interfaces):
        if dofmap.trace_start[i] >= 0:
            wf.trace[i] = x[dofmap.trace_start[i] : dofmap.trace_start[i] + degree + 1]
        elif i in dofmap.constrained:
            wf.trace[i] = dofmap.constrained[i]
    return wf


def gather_coefficients(wf: WeakFunction, dofmap: DofMap) -> np.ndarray:
    """Free-unknown vector of a weak function (inverse of scatter for the
    unconstrained part)."""
    x = np.zeros(dofmap.n_free)
    d0 = dofmap.interior_dim
    for e in range(wf.mesh.n_elements):
        x[dofmap.interior_start[e] : dofmap.interior_start[e] + d0] = wf.interior[e]
    for i in range(wf.mesh.n_interfaces):
        if dofmap.trace_start[i] >= 0:
            x[dofmap.trace_start[i] : dofmap.trace_start[i] + dofmap.degree + 1] = wf.trace[i]
    return x


def solve_problem(
    mesh: PolygonalMesh,
    problem,
    degree: int,
    quad_degree: int | None = None,
    cls: FaceClassification | None = None,
) -> WeakFunction:
    """End-to-end: classify faces, number unknowns, assemble and solve."""
    if cls is None:
        cls = classify_faces(mesh, problem.beta, degree=2 * degree + 2)
    dofmap = build_dofmap(mesh, cls, problem, degree, quad_degree)
    system = assemble(mesh, problem, dofmap, quad_degree)
    x = solve(system)
    return scatter_solution(mesh, dofmap, x)
