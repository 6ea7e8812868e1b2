import numpy as np
import pytest

from wgtransport import (
    WeakFunction,
    builtin_problems,
    classify_faces,
    energy_norm,
    error_report,
    generate_noncompatible_quads,
    generate_structured_triangles,
    l2_error,
    mesh_from_cells,
    project_q0,
    project_qh,
    recover_derivative,
    recovery_error,
    solve_problem,
)
from wgtransport.analysis import rate
from wgtransport.operators import element_quadrature
from wgtransport.problems import ProblemSpec

from helpers import (
    constant_beta,
    constant_field,
    polynomial_problem,
    random_constrained_member,
    solve_setup,
    unit_square_mesh,
)


def exp_xy(pts):
    pts = np.atleast_2d(pts)
    return np.exp(pts[:, 0] * pts[:, 1])


def test_l2_error_of_projection_of_polynomial_is_zero():
    mesh = generate_structured_triangles(2)
    prob, _ = polynomial_problem(2)
    wf = project_qh(mesh, prob.u_exact, 2)
    assert l2_error(mesh, prob.u_exact, wf) <= 1e-12


def test_l2_error_quartic_against_antiderivative():
    # u = x^2 against zero on the unit square: sqrt(int x^4) = 1/sqrt(5)
    mesh = unit_square_mesh()
    wf = WeakFunction.zeros(mesh, 1)
    err = l2_error(mesh, lambda p: np.atleast_2d(p)[:, 0] ** 2, wf)
    assert err == pytest.approx(5 ** -0.5, rel=1e-13)


def test_energy_norm_hand_value():
    # unit square, beta=(1,0), alpha=2, v0 = 1, traces 1 except 0 on the
    # inflow side: sigma term 2, inflow jump 1/2, outflow trace 1/2
    mesh = unit_square_mesh()
    prob = ProblemSpec(
        "hand",
        constant_beta(1.0, 0.0),
        constant_field(2.0),
        constant_field(0.0),
        div_beta=constant_field(0.0),
        sigma0=2.0,
    )
    cls = classify_faces(mesh, prob.beta)
    wf = WeakFunction.zeros(mesh, 0)
    wf.interior[:] = 1.0
    wf.trace[:] = 1.0
    left = next(i for i in range(4) if np.allclose(np.array(mesh.interface_endpoints(i))[:, 0], 0.0))
    wf.trace[left] = 0.0
    assert energy_norm(mesh, prob, wf, cls) == pytest.approx(np.sqrt(3.0), rel=1e-13)


def test_energy_norm_zero_and_positivity():
    prob = builtin_problems()[0]
    mesh = generate_structured_triangles(2)
    cls, dofmap, _, _ = solve_setup(mesh, prob, 1)
    zero = WeakFunction.zeros(mesh, 1, live=dofmap.live_mask(mesh.n_interfaces))
    assert energy_norm(mesh, prob, zero, cls) == 0.0
    rng = np.random.default_rng(0)
    _, v = random_constrained_member(mesh, dofmap, rng)
    assert energy_norm(mesh, prob, v, cls) > 0.0


def test_energy_norm_triangle_inequality_and_homogeneity():
    prob = builtin_problems()[1]
    mesh = generate_noncompatible_quads(3, 0.4, 5)
    cls, dofmap, _, _ = solve_setup(mesh, prob, 1)
    rng = np.random.default_rng(3)
    for _ in range(5):
        _, v = random_constrained_member(mesh, dofmap, rng)
        _, w = random_constrained_member(mesh, dofmap, rng)
        nv = energy_norm(mesh, prob, v, cls)
        nw = energy_norm(mesh, prob, w, cls)
        sum_wf = WeakFunction(mesh, 1, v.interior + w.interior, v.trace + w.trace, v.live & w.live)
        assert energy_norm(mesh, prob, sum_wf, cls) <= (nv + nw) * (1 + 1e-12)
        assert energy_norm(mesh, prob, 2.5 * v, cls) == pytest.approx(2.5 * nv, rel=1e-12)


def test_energy_dominates_scaled_l2_of_interior_gap():
    # the sigma term alone bounds sqrt(sigma0) times the interior L2 gap
    prob = builtin_problems()[0]
    mesh = generate_structured_triangles(4)
    k = 1
    cls, dofmap, system, wf = solve_setup(mesh, prob, k)
    qhu = project_qh(mesh, prob.u_exact, k)
    e_h = qhu - wf
    energy = energy_norm(mesh, prob, e_h, cls)
    gap = 0.0
    for e in range(mesh.n_elements):
        rule = element_quadrature(mesh, e, 2 * k + 3)
        diff = e_h.interior_values(e, rule.points)
        gap += float(rule.weights @ diff**2)
    assert energy >= np.sqrt(prob.sigma0) * np.sqrt(gap) * (1 - 1e-12)


def test_recovery_exact_in_polynomial_case():
    prob, coeffs = polynomial_problem(2, beta=(1.0, 1.0))
    mesh = generate_structured_triangles(2)
    wf = solve_problem(mesh, prob, 2)
    rec = recover_derivative(mesh, prob, wf)
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 1, (30, 2))
    from wgtransport import PointLocator

    loc = PointLocator(mesh)
    exact = prob.grad_u_exact(pts).sum(axis=1)  # beta=(1,1)
    for p, ex in zip(pts, exact):
        e = loc.locate(p)
        assert rec.evaluate(e, p[None, :])[0] == pytest.approx(ex, abs=1e-10)


def test_recovery_pointwise_error_identity():
    # streamline-derivative error is -(alpha + div beta) times the solution
    # error at every point
    prob = builtin_problems()[2]
    mesh = generate_noncompatible_quads(3, 0.3, 2)
    wf = solve_problem(mesh, prob, 1)
    rec = recover_derivative(mesh, prob, wf)
    for e in range(0, mesh.n_elements, 3):
        rule = element_quadrature(mesh, e, 5)
        beta = prob.beta(rule.points)
        grad = prob.grad_u_exact(rule.points)
        exact_du = beta[:, 0] * grad[:, 0] + beta[:, 1] * grad[:, 1]
        lhs = exact_du - rec.evaluate(e, rule.points)
        rhs = -(prob.alpha(rule.points) + prob.div_beta(rule.points)) * (
            prob.u_exact(rule.points) - wf.interior_values(e, rule.points)
        )
        assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


@pytest.mark.parametrize("pid,factor", [(1, 2.0), (2, 1.0), (3, 3.0)])
def test_recovery_error_is_constant_multiple_of_l2(pid, factor):
    prob = builtin_problems()[pid - 1]
    mesh = (
        generate_structured_triangles(8)
        if prob.mesh_family == "tri"
        else generate_noncompatible_quads(8, 0.3, 1)
    )
    wf = solve_problem(mesh, prob, 1)
    l2 = l2_error(mesh, prob.u_exact, wf)
    rec = recovery_error(mesh, prob, wf)
    assert rec == pytest.approx(factor * l2, rel=1e-10)


def test_error_report_zero_for_exact_polynomial_case():
    prob, _ = polynomial_problem(2, beta=(1.0, 1.0))
    mesh = generate_structured_triangles(4)
    cls, dofmap, system, wf = solve_setup(mesh, prob, 2)
    report = error_report(mesh, prob, wf, cls, include_plus=True)
    assert report.l2_interior <= 1e-10
    assert report.energy <= 1e-10
    assert report.recovery <= 1e-10
    assert report.energy_plus <= 1e-10


def test_rate_helper():
    assert rate(1.0, 0.25) == pytest.approx(2.0)
    assert rate(1.0, 0.25, level_step=2) == pytest.approx(1.0)


def test_mixed_face_norm_identity():
    # interior diagonal face where beta.n changes sign: the pointwise
    # positive-part splitting must still satisfy a(v, v) = |||v|||^2
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    mesh = mesh_from_cells(verts, [(0, 1, 2), (0, 2, 3)])

    def beta(p):
        p = np.atleast_2d(p)
        return np.column_stack([p[:, 0] ** 2, np.full(len(p), 0.1)])

    prob = ProblemSpec(
        "mixed-diagonal",
        beta,
        constant_field(2.0),
        constant_field(0.0),
        g=lambda p, tag=None: np.zeros(len(np.atleast_2d(p))),
        div_beta=lambda p: 2.0 * np.atleast_2d(p)[:, 0],
        sigma0=2.0,
    )
    cls = classify_faces(mesh, beta)
    from wgtransport import FlowClass

    diag = next(i for i, f in enumerate(mesh.interfaces) if not f.is_boundary)
    assert cls.flow_class(mesh.interfaces[diag].left, diag) is FlowClass.MIXED

    cls, dofmap, system, _ = solve_setup(mesh, prob, 2)
    rng = np.random.default_rng(9)
    for _ in range(5):
        x, v = random_constrained_member(mesh, dofmap, rng)
        avv = float(x @ (system.matrix @ x))
        nrm = energy_norm(mesh, prob, v, cls)
        assert avv == pytest.approx(nrm**2, rel=1e-11)
