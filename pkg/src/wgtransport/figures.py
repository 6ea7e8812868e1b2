"""Matplotlib rendering of study results to image files (Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_convergence(table, path) -> None:
    """Log-log error-versus-h curves, one line per degree and error kind."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    kinds = (("l2_err", "L2", "o"), ("energy_err", "energy", "s"), ("recovery_err", "recovery", "^"))
    degrees = sorted({r.degree for r in table.rows})
    cmap = plt.get_cmap("tab10")
    for di, degree in enumerate(degrees):
        rows = table.for_degree(degree)
        hs = np.array([r.h for r in rows])
        for attr, label, marker in kinds:
            errs = np.array([getattr(r, attr) for r in rows])
            ax.loglog(hs, errs, marker=marker, color=cmap(di % 10), label=f"P{degree} {label}")
    ax.set_xlabel("h")
    ax.set_ylabel("error")
    ax.set_title(table.problem_name)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_field(samples, path) -> None:
    """Heatmap of sampled interior values (NaN outside the domain)."""
    n = samples.resolution
    xs = samples.points[:, 0].reshape(n, n)
    ys = samples.points[:, 1].reshape(n, n)
    vals = samples.values.reshape(n, n)
    fig, ax = plt.subplots(figsize=(5.5, 5.0))
    mesh = ax.pcolormesh(xs, ys, np.ma.masked_invalid(vals), shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_outflow(profile, path) -> None:
    """Computed outflow trace against the inflow profile sin^2(pi x)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = np.linspace(0.0, 1.0, 200)
    ax.plot(xs, np.sin(np.pi * xs) ** 2, "k--", label="inflow profile")
    ax.plot(profile.xs, profile.values, "C0-", label="outflow trace")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(f"outflow vs inflow (L2 distance {profile.distance:.3e})")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
