"""Problem data for the transport-reaction equation div(beta u) + alpha u = f.

A problem carries callable coefficient fields over (n, 2) point arrays, the
inflow boundary data g (which also receives the interface tag, so slit
sides with identical coordinates can carry different data), an optional
exact solution with its gradient for error studies, and the reaction lower
bound sigma0 of sigma = alpha + div(beta)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import ProblemSetupError

Field = Callable[[np.ndarray], np.ndarray]


@dataclass
class ProblemSpec:
    name: str
    beta: Field
    alpha: Field
    f: Field
    g: Optional[Callable] = None  # g(points, tag=None)
    u_exact: Optional[Field] = None
    grad_u_exact: Optional[Field] = None
    div_beta: Optional[Field] = None
    sigma0: float = 1.0
    domain: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)
    mesh_family: str = "tri"
    extra: dict = field(default_factory=dict)


def divergence_values(problem: ProblemSpec, points: np.ndarray, h_scale: float = 1.0) -> np.ndarray:
    """div(beta) at the given points: analytic when provided, otherwise
    central differences with step 1e-6 * h_scale."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if problem.div_beta is not None:
        vals = np.asarray(problem.div_beta(pts), dtype=float)
        if vals.ndim == 0:
            vals = np.full(len(pts), float(vals))
        return vals
    step = 1e-6 * h_scale
    ex = np.array([step, 0.0])
    ey = np.array([0.0, step])
    dbx = (np.asarray(problem.beta(pts + ex))[:, 0] - np.asarray(problem.beta(pts - ex))[:, 0]) / (2 * step)
    dby = (np.asarray(problem.beta(pts + ey))[:, 1] - np.asarray(problem.beta(pts - ey))[:, 1]) / (2 * step)
    return dbx + dby


def sigma_values(problem: ProblemSpec, points: np.ndarray, h_scale: float = 1.0) -> np.ndarray:
    """sigma = alpha + div(beta)/2 at the given points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    avals = np.asarray(problem.alpha(pts), dtype=float)
    if avals.ndim == 0:
        avals = np.full(len(pts), float(avals))
    return avals + 0.5 * divergence_values(problem, pts, h_scale)


def validate_manufactured(problem: ProblemSpec, n_samples: int = 200, seed: int = 0, tol: float = 1e-10) -> None:
    """Check f = div(beta u) + alpha u and sigma >= sigma0 at sampled points;
    raises ProblemSetupError on violation. Skipped parts need u_exact /
    grad_u_exact."""
    x0, y0, x1, y1 = problem.domain
    rng = np.random.default_rng(seed)
    pts = np.column_stack(
        [rng.uniform(x0, x1, n_samples), rng.uniform(y0, y1, n_samples)]
    )
    sigma = sigma_values(problem, pts, h_scale=max(x1 - x0, y1 - y0))
    if sigma.min() < problem.sigma0 - 1e-12 * max(1.0, abs(problem.sigma0)):
        raise ProblemSetupError(
            f"{problem.name}: sigma dips to {sigma.min():.6g} below sigma0 = {problem.sigma0:g}"
        )
    if problem.u_exact is None or problem.grad_u_exact is None:
        return
    u = np.asarray(problem.u_exact(pts), dtype=float)
    grad = np.asarray(problem.grad_u_exact(pts), dtype=float)
    beta = np.asarray(problem.beta(pts), dtype=float)
    alpha = np.asarray(problem.alpha(pts), dtype=float)
    if alpha.ndim == 0:
        alpha = np.full(n_samples, float(alpha))
    div = divergence_values(problem, pts, h_scale=max(x1 - x0, y1 - y0))
    lhs = beta[:, 0] * grad[:, 0] + beta[:, 1] * grad[:, 1] + div * u + alpha * u
    f = np.asarray(problem.f(pts), dtype=float)
    scale = max(1.0, float(np.abs(f).max()))
    worst = float(np.abs(lhs - f).max())
    if worst > tol * scale:
        raise ProblemSetupError(
            f"{problem.name}: manufactured right-hand side is inconsistent "
            f"(max deviation {worst:.3e} against scale {scale:.3e})"
        )


# -- built-in benchmark problems ---------------------------------------------


def _const_beta(bx: float, by: float) -> Field:
    def beta(pts):
        pts = np.atleast_2d(pts)
        return np.column_stack([np.full(len(pts), bx), np.full(len(pts), by)])

    return beta


def _const_scalar(c: float) -> Field:
    def fn(pts):
        return np.full(len(np.atleast_2d(pts)), c)

    return fn


def _exp_problem() -> ProblemSpec:
    def u(pts):
        pts = np.atleast_2d(pts)
        return np.exp(pts[:, 0] * pts[:, 1])

    def grad_u(pts):
        pts = np.atleast_2d(pts)
        e = np.exp(pts[:, 0] * pts[:, 1])
        return np.column_stack([pts[:, 1] * e, pts[:, 0] * e])

    def f(pts):
        pts = np.atleast_2d(pts)
        return grad_u(pts)[:, 0] + 2.0 * u(pts)

    return ProblemSpec(
        name="exp-horizontal",
        beta=_const_beta(1.0, 0.0),
        alpha=_const_scalar(2.0),
        f=f,
        g=lambda pts, tag=None: u(pts),
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=_const_scalar(0.0),
        sigma0=2.0,
        mesh_family="tri",
    )


def _sine_problem() -> ProblemSpec:
    def u(pts):
        pts = np.atleast_2d(pts)
        return np.sin(4 * pts[:, 0]) * np.sin(4 * pts[:, 1])

    def grad_u(pts):
        pts = np.atleast_2d(pts)
        return np.column_stack(
            [
                4 * np.cos(4 * pts[:, 0]) * np.sin(4 * pts[:, 1]),
                4 * np.sin(4 * pts[:, 0]) * np.cos(4 * pts[:, 1]),
            ]
        )

    def f(pts):
        pts = np.atleast_2d(pts)
        g = grad_u(pts)
        return g[:, 0] + g[:, 1] + u(pts)

    return ProblemSpec(
        name="sine-diagonal",
        beta=_const_beta(1.0, 1.0),
        alpha=_const_scalar(1.0),
        f=f,
        g=lambda pts, tag=None: u(pts),
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=_const_scalar(0.0),
        sigma0=1.0,
        mesh_family="poly",
    )


def _radial_problem() -> ProblemSpec:
    # u depends on s = x + y only; beta = (x, y) has divergence 2
    def u(pts):
        pts = np.atleast_2d(pts)
        s = pts[:, 0] + pts[:, 1]
        return s**2 * (s - 1.0) ** 2

    def du_ds(s):
        return 2.0 * s * (s - 1.0) * (2.0 * s - 1.0)

    def grad_u(pts):
        pts = np.atleast_2d(pts)
        d = du_ds(pts[:, 0] + pts[:, 1])
        return np.column_stack([d, d])

    def f(pts):
        pts = np.atleast_2d(pts)
        grad = grad_u(pts)
        return pts[:, 0] * grad[:, 0] + pts[:, 1] * grad[:, 1] + 3.0 * u(pts)

    def beta(pts):
        return np.atleast_2d(pts).copy()

    return ProblemSpec(
        name="radial-quartic",
        beta=beta,
        alpha=_const_scalar(1.0),
        f=f,
        g=lambda pts, tag=None: u(pts),
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=_const_scalar(2.0),
        sigma0=2.0,
        mesh_family="poly",
    )


def _circular_problem() -> ProblemSpec:
    def beta(pts):
        pts = np.atleast_2d(pts)
        return np.column_stack([-pts[:, 1], pts[:, 0]])

    def g(pts, tag=None):
        pts = np.atleast_2d(pts)
        if tag == "top-slit":
            return np.sin(np.pi * pts[:, 0]) ** 2
        return np.zeros(len(pts))

    return ProblemSpec(
        name="circular-slit",
        beta=beta,
        alpha=_const_scalar(0.0),
        f=_const_scalar(0.0),
        g=g,
        div_beta=_const_scalar(0.0),
        sigma0=0.0,
        domain=(-1.0, -1.0, 1.0, 1.0),
        mesh_family="slit",
    )


def builtin_problems() -> list[ProblemSpec]:
    """The four benchmark problems, in their conventional order."""
    return [_exp_problem(), _sine_problem(), _radial_problem(), _circular_problem()]
