import numpy as np
import pytest

from wgtransport import ProblemSetupError, builtin_problems, classify_faces, generate_slit_mesh
from wgtransport.problems import ProblemSpec, sigma_values, validate_manufactured

from helpers import constant_beta, constant_field


def test_four_problems_in_order():
    probs = builtin_problems()
    assert len(probs) == 4
    assert [p.mesh_family for p in probs] == ["tri", "poly", "poly", "slit"]
    assert [p.u_exact is None for p in probs] == [False, False, False, True]


def test_exp_problem_source_at_origin():
    # d/dx e^{xy} + 2 e^{xy} at (0,0) = y e^{xy} + 2 e^{xy} = 2
    prob = builtin_problems()[0]
    assert prob.f(np.array([[0.0, 0.0]]))[0] == pytest.approx(2.0)


def test_radial_problem_reaction_bound():
    prob = builtin_problems()[2]
    pts = np.random.default_rng(0).uniform(0, 1, (50, 2))
    assert np.allclose(prob.div_beta(pts), 2.0)
    assert np.allclose(sigma_values(prob, pts), 2.0)
    assert prob.sigma0 == 2.0


def test_circular_problem_slit_data():
    prob = builtin_problems()[3]
    pts = np.array([[0.25, 0.0], [0.75, 0.0]])
    top = prob.g(pts, "top-slit")
    assert np.allclose(top, np.sin(np.pi * pts[:, 0]) ** 2)
    assert np.allclose(prob.g(pts, "boundary"), 0.0)
    assert np.allclose(prob.g(pts, "bottom-slit"), 0.0)


def test_circular_problem_inflow_includes_top_slit():
    prob = builtin_problems()[3]
    mesh = generate_slit_mesh(4)
    cls = classify_faces(mesh, prob.beta)
    from wgtransport import FlowClass

    tops = [i for i, f in enumerate(mesh.interfaces) if f.tag == "top-slit"]
    assert tops and all(cls.flow_class(mesh.interfaces[i].left, i) is FlowClass.INFLOW for i in tops)


@pytest.mark.parametrize("pid", [1, 2, 3, 4])
def test_builtin_problems_pass_self_check(pid):
    validate_manufactured(builtin_problems()[pid - 1])


def test_inconsistent_source_detected():
    def u(p):
        return np.atleast_2d(p)[:, 0]

    prob = ProblemSpec(
        "broken",
        constant_beta(1.0, 0.0),
        constant_field(1.0),
        f=constant_field(0.0),  # should be 1 + x
        u_exact=u,
        grad_u_exact=lambda p: np.column_stack(
            [np.ones(len(np.atleast_2d(p))), np.zeros(len(np.atleast_2d(p)))]
        ),
        div_beta=constant_field(0.0),
        sigma0=1.0,
    )
    with pytest.raises(ProblemSetupError):
        validate_manufactured(prob)


def test_sigma_violation_detected():
    prob = ProblemSpec(
        "sigma-low",
        constant_beta(1.0, 0.0),
        constant_field(0.25),
        constant_field(0.0),
        div_beta=constant_field(0.0),
        sigma0=1.0,
    )
    with pytest.raises(ProblemSetupError):
        validate_manufactured(prob)


def test_finite_difference_divergence_fallback():
    def beta(p):
        p = np.atleast_2d(p)
        return np.column_stack([p[:, 0] ** 2, p[:, 0] * p[:, 1]])

    prob = ProblemSpec("fd", beta, constant_field(1.0), constant_field(0.0), sigma0=0.5)
    pts = np.array([[0.3, 0.4], [0.8, 0.1]])
    approx = sigma_values(prob, pts)
    exact = 1.0 + 0.5 * (2 * pts[:, 0] + pts[:, 0])
    assert np.abs(approx - exact).max() <= 1e-7
