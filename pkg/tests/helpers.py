"""Shared fixtures-in-spirit: small meshes, manufactured problems, random
test functions in the constrained discrete space."""

from __future__ import annotations

import numpy as np

from wgtransport import (
    WeakFunction,
    assemble,
    build_dofmap,
    classify_faces,
    mesh_from_cells,
    scatter_solution,
)
from wgtransport.problems import ProblemSpec

from oracles import poly_eval, poly_grad, random_poly


def unit_square_mesh(side: float = 1.0):
    verts = np.array([[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]])
    return mesh_from_cells(verts, [(0, 1, 2, 3)])


def two_triangle_mesh():
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return mesh_from_cells(verts, [(0, 1, 2), (0, 2, 3)])


def constant_field(c: float):
    def fn(pts):
        return np.full(len(np.atleast_2d(pts)), c)

    return fn


def constant_beta(bx: float, by: float):
    def beta(pts):
        pts = np.atleast_2d(pts)
        return np.column_stack([np.full(len(pts), bx), np.full(len(pts), by)])

    return beta


def polynomial_problem(degree: int, beta=(1.0, 1.0), alpha: float = 1.0, seed: int = 0) -> tuple[ProblemSpec, dict]:
    """Manufactured problem with a random P_degree exact solution and
    constant velocity/reaction, so the discrete solution must be exact."""
    rng = np.random.default_rng(seed)
    u_coeffs = random_poly(degree, rng)
    dux, duy = poly_grad(u_coeffs)
    bx, by = beta

    def u(pts):
        return poly_eval(u_coeffs, pts)

    def grad_u(pts):
        pts = np.atleast_2d(pts)
        return np.column_stack([poly_eval(dux, pts), poly_eval(duy, pts)])

    def f(pts):
        pts = np.atleast_2d(pts)
        return bx * poly_eval(dux, pts) + by * poly_eval(duy, pts) + alpha * poly_eval(u_coeffs, pts)

    problem = ProblemSpec(
        name=f"manufactured-P{degree}",
        beta=constant_beta(bx, by),
        alpha=constant_field(alpha),
        f=f,
        g=lambda pts, tag=None: u(pts),
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=constant_field(0.0),
        sigma0=alpha,
    )
    return problem, u_coeffs


def solve_setup(mesh, problem, degree: int, quad_degree=None):
    """Classify, number, assemble and solve; returns every intermediate."""
    from wgtransport.assembly import solve

    cls = classify_faces(mesh, problem.beta, degree=2 * degree + 2)
    dofmap = build_dofmap(mesh, cls, problem, degree, quad_degree)
    system = assemble(mesh, problem, dofmap, quad_degree)
    x = solve(system)
    return cls, dofmap, system, scatter_solution(mesh, dofmap, x)


def random_constrained_member(mesh, dofmap, rng) -> tuple[np.ndarray, WeakFunction]:
    """Random discrete function with zero trace on constrained interfaces."""
    x = rng.standard_normal(dofmap.n_free)
    wf = scatter_solution(mesh, dofmap, x)
    for i in dofmap.constrained:
        wf.trace[i] = 0.0
    return x, wf
