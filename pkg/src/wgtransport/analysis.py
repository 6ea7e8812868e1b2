"""Error norms, the energy norm, derivative recovery and diagnostics.

The energy norm combines the sigma-weighted interior L2 norm, the
|beta.n|-weighted jumps between interior and trace values over all element
boundaries, and the outflow-boundary trace term; it squares to the
transport form on test functions vanishing at the inflow. The consistency
helpers evaluate the volume and trace projection defects whose combination
equals the form residual of the projected exact solution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .mesh import FaceClassification, FlowClass, PolygonalMesh
from .operators import (
    WeakFunction,
    default_quad_degree,
    element_basis,
    element_quadrature,
    interface_basis,
    interface_quadrature,
    project_pplus,
    project_q0,
    project_qb,
    project_qh,
    select_pplus_faces,
)
from .problems import ProblemSpec, divergence_values, sigma_values

logger = logging.getLogger(__name__)


@dataclass
class ErrorReport:
    """The four error measures of one solve (energy_plus is None when the
    outflow-moment projection diagnostic is not requested)."""

    l2_interior: float
    energy: float
    recovery: float
    energy_plus: float | None = None


def l2_error(mesh: PolygonalMesh, u_exact, wf: WeakFunction, quad_degree: int | None = None) -> float:
    """Broken L2 distance between the exact field and interior components.

    Fields are evaluated at extended-precision nodes: near the finest
    levels the error approaches the double rounding floor, and the paired
    recovery-error identity is only meaningful with guard digits.
    """
    qd = quad_degree or default_quad_degree(wf.degree)
    total = np.longdouble(0.0)
    for e in range(mesh.n_elements):
        rule = element_quadrature(mesh, e, qd)
        pts = rule.points.astype(np.longdouble)
        diff = np.asarray(u_exact(pts)) - wf.interior_values(e, pts)
        total += rule.weights @ diff**2
    return float(np.sqrt(total))


def energy_norm(
    mesh: PolygonalMesh,
    problem: ProblemSpec,
    wf: WeakFunction,
    cls: FaceClassification,
    quad_degree: int | None = None,
    check_sigma: bool = True,
) -> float:
    """Triple-bar norm of a weak function.

    Dead (eliminated) interfaces are skipped; their |beta.n| weight is below
    the characteristic tolerance anyway.
    """
    qd = quad_degree or default_quad_degree(wf.degree)
    total = 0.0
    sigma_min = np.inf
    for e in range(mesh.n_elements):
        rule = element_quadrature(mesh, e, qd)
        sigma = sigma_values(problem, rule.points, mesh.elements[e].diameter)
        sigma_min = min(sigma_min, float(sigma.min()))
        v0 = wf.interior_values(e, rule.points)
        total += float(rule.weights @ (sigma * v0**2))

        for i in mesh.elements[e].interface_ids:
            if not wf.live[i]:
                continue
            erule = interface_quadrature(mesh, i, qd)
            bn = np.asarray(problem.beta(erule.points), dtype=float) @ mesh.signed_normal(e, i)
            jump = wf.interior_values(e, erule.points) - wf.trace_values(i, erule.points)
            total += 0.5 * float(erule.weights @ (np.abs(bn) * jump**2))

    for i, iface in enumerate(mesh.interfaces):
        if not iface.is_boundary or not wf.live[i]:
            continue
        if cls.flow_class(iface.left, i) is not FlowClass.OUTFLOW:
            continue
        erule = interface_quadrature(mesh, i, qd)
        bn = np.asarray(problem.beta(erule.points), dtype=float) @ iface.normal
        vb = wf.trace_values(i, erule.points)
        total += 0.5 * float(erule.weights @ (np.abs(bn) * vb**2))

    if check_sigma and sigma_min < problem.sigma0 - 1e-12:
        logger.warning(
            "sigma reaches %.6g below the declared lower bound %.6g", sigma_min, problem.sigma0
        )
    return float(np.sqrt(total))


def load_l2_norm(mesh: PolygonalMesh, problem: ProblemSpec, degree: int, quad_degree: int | None = None) -> float:
    """L2 norm of the source term over the meshed domain."""
    qd = quad_degree or default_quad_degree(degree)
    total = 0.0
    for e in range(mesh.n_elements):
        rule = element_quadrature(mesh, e, qd)
        fvals = np.asarray(problem.f(rule.points), dtype=float)
        total += float(rule.weights @ fvals**2)
    return float(np.sqrt(total))


# -- derivative recovery ------------------------------------------------------


@dataclass
class RecoveredDerivative:
    """Elementwise recovery of the streamline derivative beta . grad u from
    the computed solution: f - (alpha + div beta) u_h, evaluable pointwise
    without any global solve."""

    mesh: PolygonalMesh
    problem: ProblemSpec
    wf: WeakFunction

    def evaluate(self, elem_id: int, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points))
        alpha = np.asarray(self.problem.alpha(pts), dtype=float)
        if alpha.ndim == 0:
            alpha = np.full(len(pts), float(alpha))
        div = divergence_values(self.problem, pts, self.mesh.elements[elem_id].diameter)
        fvals = np.asarray(self.problem.f(pts))
        if fvals.ndim == 0:
            fvals = np.full(len(pts), float(fvals))
        return fvals - (alpha + div) * self.wf.interior_values(elem_id, pts)


def recover_derivative(mesh: PolygonalMesh, problem: ProblemSpec, wf: WeakFunction) -> RecoveredDerivative:
    return RecoveredDerivative(mesh, problem, wf)


def recovery_error(
    mesh: PolygonalMesh,
    problem: ProblemSpec,
    wf: WeakFunction,
    quad_degree: int | None = None,
) -> float:
    """L2 distance between the exact streamline derivative and its recovery."""
    if problem.grad_u_exact is None:
        raise ValueError("recovery error needs the exact solution gradient")
    qd = quad_degree or default_quad_degree(wf.degree)
    rec = recover_derivative(mesh, problem, wf)
    # extended-precision nodes for the same reason as in l2_error
    total = np.longdouble(0.0)
    for e in range(mesh.n_elements):
        rule = element_quadrature(mesh, e, qd)
        pts = rule.points.astype(np.longdouble)
        beta = np.asarray(problem.beta(pts))
        grad = np.asarray(problem.grad_u_exact(pts))
        exact = beta[:, 0] * grad[:, 0] + beta[:, 1] * grad[:, 1]
        diff = exact - rec.evaluate(e, pts)
        total += rule.weights @ diff**2
    return float(np.sqrt(total))


def error_report(
    mesh: PolygonalMesh,
    problem: ProblemSpec,
    wf: WeakFunction,
    cls: FaceClassification,
    quad_degree: int | None = None,
    include_plus: bool = False,
) -> ErrorReport:
    """All error measures of a solve against the exact solution."""
    if problem.u_exact is None:
        raise ValueError("error report needs an exact solution")
    qh_u = project_qh(mesh, problem.u_exact, wf.degree, quad_degree)
    e_h = qh_u - wf
    report = ErrorReport(
        l2_interior=l2_error(mesh, problem.u_exact, wf, quad_degree),
        energy=energy_norm(mesh, problem, e_h, cls, quad_degree, check_sigma=False),
        recovery=recovery_error(mesh, problem, wf, quad_degree),
    )
    if include_plus:
        faces = select_pplus_faces(mesh, problem.beta, cls)
        plus = qh_u.copy()
        for e in range(mesh.n_elements):
            plus.interior[e] = project_pplus(mesh, e, problem.u_exact, wf.degree, faces[e], quad_degree)
        report.energy_plus = energy_norm(mesh, problem, plus - wf, cls, quad_degree, check_sigma=False)
    return report


def rate(err_coarse: float, err_fine: float, level_step: int = 1) -> float:
    """Observed order between two uniformly refined levels."""
    return float(np.log2(err_coarse / err_fine) / level_step)


# -- consistency diagnostics ---------------------------------------------------


def consistency_terms(
    mesh: PolygonalMesh,
    problem: ProblemSpec,
    v: WeakFunction,
    cls: FaceClassification,
    quad_degree: int | None = None,
) -> dict[str, float]:
    """Projection-defect terms of the exact solution against a test function.

    Returns the volume transport defect (u - Q0 u, beta . grad v0), the trace
    defect pairings of u - Qb u over all element boundaries and the outflow
    boundary, the reaction defect (alpha (Q0 u - u), v0), and the jump
    penalty applied to the projected exact solution. Their combination
    equals the form residual of the projected solution.
    """
    if problem.u_exact is None:
        raise ValueError("consistency terms need the exact solution")
    u = problem.u_exact
    degree = v.degree
    qd = quad_degree or default_quad_degree(degree)

    q0 = [project_q0(mesh, e, u, degree, qd) for e in range(mesh.n_elements)]
    qb = [project_qb(mesh, i, u, degree, qd) for i in range(mesh.n_interfaces)]

    vol_transport = 0.0
    reaction = 0.0
    for e in range(mesh.n_elements):
        rule = element_quadrature(mesh, e, qd)
        basis = element_basis(mesh, e, degree)
        phi = basis.values(rule.points)
        defect = np.asarray(u(rule.points), dtype=float) - phi @ q0[e]
        beta = np.asarray(problem.beta(rule.points), dtype=float)
        alpha = np.asarray(problem.alpha(rule.points), dtype=float)
        gx, gy = v.interior_gradients(e, rule.points)
        vol_transport += float(rule.weights @ (defect * (beta[:, 0] * gx + beta[:, 1] * gy)))
        v0 = v.interior_values(e, rule.points)
        reaction += float(rule.weights @ (alpha * (-defect) * v0))

    trace_defect = 0.0
    penalty = 0.0
    for e in range(mesh.n_elements):
        for i in mesh.elements[e].interface_ids:
            erule = interface_quadrature(mesh, i, qd)
            psi = interface_basis(mesh, i, degree).values(erule.points)
            bn = np.asarray(problem.beta(erule.points), dtype=float) @ mesh.signed_normal(e, i)
            jump_v = v.interior_values(e, erule.points) - v.trace_values(i, erule.points)
            defect_b = np.asarray(u(erule.points), dtype=float) - psi @ qb[i]
            trace_defect += float(erule.weights @ (bn * defect_b * jump_v))
            if v.live[i]:
                proj_jump = element_basis(mesh, e, degree).values(erule.points) @ q0[e] - psi @ qb[i]
                penalty += float(erule.weights @ (np.maximum(bn, 0.0) * proj_jump * jump_v))

    for i, iface in enumerate(mesh.interfaces):
        if not iface.is_boundary or cls.flow_class(iface.left, i) is not FlowClass.OUTFLOW:
            continue
        erule = interface_quadrature(mesh, i, qd)
        psi = interface_basis(mesh, i, degree).values(erule.points)
        bn = np.asarray(problem.beta(erule.points), dtype=float) @ iface.normal
        defect_b = np.asarray(u(erule.points), dtype=float) - psi @ qb[i]
        trace_defect += float(erule.weights @ (bn * defect_b * v.trace_values(i, erule.points)))

    return {
        "volume_transport": vol_transport,
        "trace": trace_defect,
        "reaction": reaction,
        "penalty": penalty,
    }
