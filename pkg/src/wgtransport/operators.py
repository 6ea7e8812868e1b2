"""Element-local weak Galerkin operators.

The discrete unknown on an element couples an interior P_k polynomial with
one P_k trace polynomial per bordering interface. The weak divergence of a
velocity-weighted unknown is the P_k field whose moments against every test
polynomial q equal

    -(v0, beta . grad q)_K  +  <beta.n vb, q>_{dK},

and the transport form adds the reaction term and an upwind jump penalty
integrated with the positive part of beta.n at quadrature nodes (which also
covers faces where beta.n changes sign). Interfaces whose trace unknowns
were eliminated as characteristic simply do not appear: their boundary
terms carry a vanishing beta.n weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import EdgeBasis, ElementBasis, pk_dim
from .exceptions import SolverError
from .mesh import FaceClassification, FlowClass, PolygonalMesh
from .quadrature import QuadratureRule, gauss_segment, polygon_quadrature


def default_quad_degree(degree: int) -> int:
    """Quadrature degree used by all forms unless overridden: couples two
    P_k factors and a smooth coefficient, with one degree to spare."""
    return 2 * degree + 3


def element_basis(mesh: PolygonalMesh, elem_id: int, degree: int) -> ElementBasis:
    el = mesh.elements[elem_id]
    return ElementBasis(degree, el.centroid, el.diameter)


def interface_basis(mesh: PolygonalMesh, iface_id: int, degree: int) -> EdgeBasis:
    p0, p1 = mesh.interface_endpoints(iface_id)
    return EdgeBasis(degree, p0, p1)


def element_quadrature(mesh: PolygonalMesh, elem_id: int, degree: int) -> QuadratureRule:
    return polygon_quadrature(mesh.element_vertices(elem_id), degree)


def interface_quadrature(mesh: PolygonalMesh, iface_id: int, degree: int) -> QuadratureRule:
    p0, p1 = mesh.interface_endpoints(iface_id)
    return gauss_segment(p0, p1, degree)


def _values_on(data, basis_values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate coefficient vectors or callables at quadrature points."""
    if callable(data):
        return np.asarray(data(points), dtype=float)
    return basis_values @ np.asarray(data, dtype=float)


# -- weak functions ---------------------------------------------------------


@dataclass
class WeakFunction:
    """Interior coefficients per element plus one trace vector per interface.

    `live` marks interfaces that carry trace unknowns; eliminated
    (characteristic) interfaces stay dead with zero rows.
    """

    mesh: PolygonalMesh
    degree: int
    interior: np.ndarray  # (n_elements, pk_dim(degree))
    trace: np.ndarray  # (n_interfaces, degree + 1)
    live: np.ndarray  # (n_interfaces,) bool

    @classmethod
    def zeros(cls, mesh: PolygonalMesh, degree: int, live=None) -> "WeakFunction":
        if live is None:
            live = np.ones(mesh.n_interfaces, dtype=bool)
        return cls(
            mesh,
            degree,
            np.zeros((mesh.n_elements, pk_dim(degree))),
            np.zeros((mesh.n_interfaces, degree + 1)),
            np.asarray(live, dtype=bool).copy(),
        )

    def interior_values(self, elem_id: int, points) -> np.ndarray:
        basis = element_basis(self.mesh, elem_id, self.degree)
        return basis.values(points) @ self.interior[elem_id]

    def interior_gradients(self, elem_id: int, points) -> tuple[np.ndarray, np.ndarray]:
        basis = element_basis(self.mesh, elem_id, self.degree)
        gx, gy = basis.gradients(points)
        return gx @ self.interior[elem_id], gy @ self.interior[elem_id]

    def trace_values(self, iface_id: int, points) -> np.ndarray:
        if not self.live[iface_id]:
            return np.zeros(len(np.atleast_2d(points)))
        basis = interface_basis(self.mesh, iface_id, self.degree)
        return basis.values(points) @ self.trace[iface_id]

    def copy(self) -> "WeakFunction":
        return WeakFunction(self.mesh, self.degree, self.interior.copy(), self.trace.copy(), self.live.copy())

    def __sub__(self, other: "WeakFunction") -> "WeakFunction":
        if other.mesh is not self.mesh or other.degree != self.degree:
            raise ValueError("weak functions live on different spaces")
        live = self.live & other.live
        trace = np.where(live[:, None], self.trace - other.trace, 0.0)
        return WeakFunction(self.mesh, self.degree, self.interior - other.interior, trace, live)

    def __mul__(self, scalar: float) -> "WeakFunction":
        return WeakFunction(self.mesh, self.degree, self.interior * scalar, self.trace * scalar, self.live.copy())

    __rmul__ = __mul__


# -- projections ------------------------------------------------------------


def project_q0(mesh: PolygonalMesh, elem_id: int, u, degree: int, quad_degree: int | None = None) -> np.ndarray:
    """L2 projection of u onto P_k of the element; reproduces P_k exactly."""
    qd = quad_degree or default_quad_degree(degree)
    rule = element_quadrature(mesh, elem_id, qd)
    phi = element_basis(mesh, elem_id, degree).values(rule.points)
    vals = _values_on(u, phi, rule.points)
    mass = phi.T @ (rule.weights[:, None] * phi)
    return np.linalg.solve(mass, phi.T @ (rule.weights * vals))


def project_qb(mesh: PolygonalMesh, iface_id: int, u, degree: int, quad_degree: int | None = None) -> np.ndarray:
    """L2 projection of u onto P_k of the interface."""
    qd = quad_degree or default_quad_degree(degree)
    rule = interface_quadrature(mesh, iface_id, qd)
    psi = interface_basis(mesh, iface_id, degree).values(rule.points)
    vals = _values_on(u, psi, rule.points)
    gram = psi.T @ (rule.weights[:, None] * psi)
    return np.linalg.solve(gram, psi.T @ (rule.weights * vals))


def project_qh(mesh: PolygonalMesh, u, degree: int, quad_degree: int | None = None) -> WeakFunction:
    """Elementwise interior projection paired with per-interface trace
    projections of the same function."""
    wf = WeakFunction.zeros(mesh, degree)
    for e in range(mesh.n_elements):
        wf.interior[e] = project_q0(mesh, e, u, degree, quad_degree)
    for i in range(mesh.n_interfaces):
        wf.trace[i] = project_qb(mesh, i, u, degree, quad_degree)
    return wf


def project_pplus(
    mesh: PolygonalMesh,
    elem_id: int,
    u,
    degree: int,
    selected_face: int,
    quad_degree: int | None = None,
) -> np.ndarray:
    """Projection matching interior moments against P_{k-1} and trace
    moments on one selected face; the interior conditions are vacuous for
    k = 0. The dimension count k(k+1)/2 + (k+1) makes the system square."""
    qd = quad_degree or default_quad_degree(degree)
    basis = element_basis(mesh, elem_id, degree)
    dim = basis.dim
    dim_lower = pk_dim(degree - 1) if degree > 0 else 0

    rows = np.empty((dim, dim))
    rhs = np.empty(dim)
    if dim_lower:
        rule = element_quadrature(mesh, elem_id, qd)
        phi = basis.values(rule.points)
        vals = _values_on(u, phi, rule.points)
        rows[:dim_lower] = phi[:, :dim_lower].T @ (rule.weights[:, None] * phi)
        rhs[:dim_lower] = phi[:, :dim_lower].T @ (rule.weights * vals)

    erule = interface_quadrature(mesh, selected_face, qd)
    psi = interface_basis(mesh, selected_face, degree).values(erule.points)
    phi_e = basis.values(erule.points)
    vals_e = _values_on(u, phi_e, erule.points)
    rows[dim_lower:] = psi.T @ (erule.weights[:, None] * phi_e)
    rhs[dim_lower:] = psi.T @ (erule.weights * vals_e)

    try:
        return np.linalg.solve(rows, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"outflow-moment projection is singular on element {elem_id}") from exc


def select_pplus_faces(
    mesh: PolygonalMesh,
    beta,
    cls: FaceClassification,
    quad_degree: int = 4,
) -> list[int]:
    """Pick the face used by the outflow-moment projection on each element:
    the unique outflow/mixed face that is not flow-tangent when one exists,
    otherwise the face with the largest flux integral of |beta.n| (ties go
    to the lowest interface id)."""
    choices = []
    for e, el in enumerate(mesh.elements):
        candidates = [
            i
            for i in el.interface_ids
            if cls.flow_class(e, i) in (FlowClass.OUTFLOW, FlowClass.MIXED) and not cls.in_eh0(e, i)
        ]
        if len(candidates) == 1:
            choices.append(candidates[0])
            continue
        pool = candidates or list(el.interface_ids)
        best, best_flux = None, -1.0
        for i in sorted(pool):
            rule = interface_quadrature(mesh, i, quad_degree)
            bn = np.asarray(beta(rule.points), dtype=float) @ mesh.signed_normal(e, i)
            flux = float(rule.weights @ np.abs(bn))
            if flux > best_flux * (1.0 + 1e-12):
                best, best_flux = i, flux
        choices.append(best)
    return choices


# -- weak divergence ---------------------------------------------------------


def weak_divergence(
    mesh: PolygonalMesh,
    elem_id: int,
    beta,
    interior,
    traces,
    degree: int,
    quad_degree: int | None = None,
) -> np.ndarray:
    """P_k coefficients of the weak divergence of the velocity-weighted pair.

    `interior` is a coefficient vector or a callable; `traces` maps the
    element's interface ids to coefficient vectors or callables. Interfaces
    missing from the map contribute nothing (eliminated characteristic
    traces).
    """
    qd = quad_degree or default_quad_degree(degree)
    basis = element_basis(mesh, elem_id, degree)
    rule = element_quadrature(mesh, elem_id, qd)
    phi = basis.values(rule.points)
    gx, gy = basis.gradients(rule.points)
    bvals = np.asarray(beta(rule.points), dtype=float)
    v0 = _values_on(interior, phi, rule.points)

    beta_grad = bvals[:, 0, None] * gx + bvals[:, 1, None] * gy  # (nq, dim)
    moments = -beta_grad.T @ (rule.weights * v0)

    for i in mesh.elements[elem_id].interface_ids:
        if i not in traces:
            continue
        erule = interface_quadrature(mesh, i, qd)
        psi = interface_basis(mesh, i, degree).values(erule.points)
        vb = _values_on(traces[i], psi, erule.points)
        bn = np.asarray(beta(erule.points), dtype=float) @ mesh.signed_normal(elem_id, i)
        phi_e = basis.values(erule.points)
        moments += phi_e.T @ (erule.weights * bn * vb)

    mass = phi.T @ (rule.weights[:, None] * phi)
    return np.linalg.solve(mass, moments)


# -- local transport form -----------------------------------------------------


@dataclass(frozen=True)
class LocalOperator:
    """Dense transport form block of one element over its interior
    coefficients followed by the trace coefficients of each live interface
    (element traversal order)."""

    element_id: int
    interface_ids: tuple[int, ...]
    interior_dim: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def local_bilinear(
    mesh: PolygonalMesh,
    elem_id: int,
    beta,
    alpha,
    degree: int,
    live=None,
    quad_degree: int | None = None,
) -> LocalOperator:
    """Element block of the transport form: velocity moments of the weak
    divergence tested against interior functions, the reaction mass term,
    and the upwind jump penalty over the element boundary."""
    qd = quad_degree or default_quad_degree(degree)
    basis = element_basis(mesh, elem_id, degree)
    d0 = basis.dim
    el = mesh.elements[elem_id]
    iface_ids = tuple(i for i in el.interface_ids if live is None or live[i])

    nb = degree + 1
    n = d0 + nb * len(iface_ids)
    a = np.zeros((n, n))

    rule = element_quadrature(mesh, elem_id, qd)
    phi = basis.values(rule.points)
    gx, gy = basis.gradients(rule.points)
    bvals = np.asarray(beta(rule.points), dtype=float)
    avals = np.asarray(alpha(rule.points), dtype=float)
    if avals.ndim == 0:
        avals = np.full(len(rule.weights), float(avals))

    beta_grad = bvals[:, 0, None] * gx + bvals[:, 1, None] * gy
    # rows: interior tests; the weak-divergence moments appear directly
    a[:d0, :d0] -= beta_grad.T @ (rule.weights[:, None] * phi)
    a[:d0, :d0] += phi.T @ ((rule.weights * avals)[:, None] * phi)

    for slot, i in enumerate(iface_ids):
        cols = slice(d0 + slot * nb, d0 + (slot + 1) * nb)
        erule = interface_quadrature(mesh, i, qd)
        psi = interface_basis(mesh, i, degree).values(erule.points)
        phi_e = basis.values(erule.points)
        bn = np.asarray(beta(erule.points), dtype=float) @ mesh.signed_normal(elem_id, i)

        a[:d0, cols] += phi_e.T @ ((erule.weights * bn)[:, None] * psi)

        wp = erule.weights * np.maximum(bn, 0.0)
        s00 = phi_e.T @ (wp[:, None] * phi_e)
        s0b = -phi_e.T @ (wp[:, None] * psi)
        sbb = psi.T @ (wp[:, None] * psi)
        a[:d0, :d0] += s00
        a[:d0, cols] += s0b
        a[cols, :d0] += s0b.T
        a[cols, cols] += sbb

    return LocalOperator(elem_id, iface_ids, d0, a)


def local_rhs(mesh: PolygonalMesh, elem_id: int, f, degree: int, quad_degree: int | None = None) -> np.ndarray:
    """Load moments against the interior test functions."""
    qd = quad_degree or default_quad_degree(degree)
    rule = element_quadrature(mesh, elem_id, qd)
    phi = element_basis(mesh, elem_id, degree).values(rule.points)
    fvals = np.asarray(f(rule.points), dtype=float)
    if fvals.ndim == 0:
        fvals = np.full(len(rule.weights), float(fvals))
    return phi.T @ (rule.weights * fvals)
