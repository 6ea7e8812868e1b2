"""Convergence studies, the circular-flow benchmark and field sampling.

Level L uses mesh parameter n = 2**L, so the mesh size halves per level and
observed orders are log2 ratios of consecutive errors. Study output is a
delimited table (one row per degree and level) mirroring the benchmark
convention: the interior L2 error, the energy-norm error of the projected
solution, and the recovered streamline-derivative error, each with its
observed rate.
"""

from __future__ import annotations

import concurrent.futures
import io
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .analysis import energy_norm, error_report, load_l2_norm, rate
from .assembly import assemble, build_dofmap, scatter_solution, solve
from .mesh import (
    PointLocator,
    PolygonalMesh,
    check_mesh_condition,
    classify_faces,
    generate_noncompatible_quads,
    generate_slit_mesh,
    generate_structured_triangles,
)
from .operators import WeakFunction, default_quad_degree
from .problems import ProblemSpec, builtin_problems, validate_manufactured
from .quadrature import gauss_segment

THREADS_ENV = "WGTRANSPORT_THREADS"

CSV_COLUMNS = (
    "degree",
    "level",
    "l2_err",
    "l2_rate",
    "energy_err",
    "energy_rate",
    "recovery_err",
    "recovery_rate",
)


@dataclass(frozen=True)
class StudyConfig:
    problem: int | ProblemSpec
    degrees: tuple[int, ...] = (1, 2)
    levels: tuple[int, ...] = (3, 4, 5)
    mesh_family: str | None = None
    seed: int = 0
    quad_degree: int | None = None
    refine_fraction: float = 0.3
    out: str | Path | None = None
    sample_grid: int | None = None
    dump_matrix: str | Path | None = None
    figures: bool = True

    def __post_init__(self):
        if any(not 0 <= d <= 4 for d in self.degrees):
            raise ValueError("degrees must lie in 0..4")
        if list(self.levels) != sorted(set(self.levels)):
            raise ValueError("levels must be strictly increasing")

    def resolve_problem(self) -> ProblemSpec:
        if isinstance(self.problem, ProblemSpec):
            return self.problem
        return builtin_problems()[self.problem - 1]

    def resolve_family(self, problem: ProblemSpec) -> str:
        return self.mesh_family or problem.mesh_family


@dataclass
class StudyRow:
    degree: int
    level: int
    n_elements: int
    h: float
    l2_err: float
    energy_err: float
    recovery_err: float
    energy_plus_err: float | None = None
    solution_energy: float = np.nan  # triple-bar norm of the solution itself
    load_norm: float = np.nan
    l2_rate: float | None = None
    energy_rate: float | None = None
    recovery_rate: float | None = None


@dataclass
class StudyTable:
    problem_name: str
    rows: list[StudyRow] = field(default_factory=list)

    def for_degree(self, degree: int) -> list[StudyRow]:
        return sorted((r for r in self.rows if r.degree == degree), key=lambda r: r.level)

    def row(self, degree: int, level: int) -> StudyRow:
        for r in self.rows:
            if r.degree == degree and r.level == level:
                return r
        raise KeyError((degree, level))


def build_study_mesh(
    problem: ProblemSpec, family: str, level: int, seed: int = 0, refine_fraction: float = 0.3
) -> PolygonalMesh:
    n = 2**level
    if family == "tri":
        return generate_structured_triangles(n, problem.domain)
    if family == "poly":
        return generate_noncompatible_quads(n, refine_fraction, seed + level, problem.domain)
    if family == "slit":
        return generate_slit_mesh(n)
    raise ValueError(f"unknown mesh family {family!r}")


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_tasks(tasks, fn):
    workers = _worker_count()
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def run_convergence(config: StudyConfig) -> StudyTable:
    """Solve the configured problem over all (degree, level) pairs and
    tabulate errors and observed orders; writes the delimited table and a
    convergence figure when an output path is set."""
    problem = config.resolve_problem()
    if problem.u_exact is None:
        raise ValueError(f"problem {problem.name!r} has no exact solution; use run_circular_flow")
    validate_manufactured(problem)
    family = config.resolve_family(problem)

    meshes = {
        level: build_study_mesh(problem, family, level, config.seed, config.refine_fraction)
        for level in config.levels
    }

    def solve_one(task):
        degree, level = task
        mesh = meshes[level]
        cls = classify_faces(mesh, problem.beta, degree=2 * degree + 2)
        include_plus = check_mesh_condition(mesh, cls).ok
        dofmap = build_dofmap(mesh, cls, problem, degree, config.quad_degree)
        system = assemble(mesh, problem, dofmap, config.quad_degree)
        if config.dump_matrix:
            stem = Path(config.dump_matrix)
            system.dump(stem.with_name(f"{stem.stem}_p{degree}_l{level}{stem.suffix or '.mtx'}"))
        wf = scatter_solution(mesh, dofmap, solve(system))
        report = error_report(mesh, problem, wf, cls, config.quad_degree, include_plus)
        return StudyRow(
            degree=degree,
            level=level,
            n_elements=mesh.n_elements,
            h=mesh.max_diameter(),
            l2_err=report.l2_interior,
            energy_err=report.energy,
            recovery_err=report.recovery,
            energy_plus_err=report.energy_plus,
            solution_energy=energy_norm(mesh, problem, wf, cls, config.quad_degree, check_sigma=False),
            load_norm=load_l2_norm(mesh, problem, degree, config.quad_degree),
        )

    tasks = [(degree, level) for degree in config.degrees for level in sorted(config.levels)]
    rows = _run_tasks(tasks, solve_one)
    table = StudyTable(problem.name, sorted(rows, key=lambda r: (r.degree, r.level)))

    for degree in config.degrees:
        seq = table.for_degree(degree)
        for prev, cur in zip(seq, seq[1:]):
            step = cur.level - prev.level
            cur.l2_rate = rate(prev.l2_err, cur.l2_err, step)
            cur.energy_rate = rate(prev.energy_err, cur.energy_err, step)
            cur.recovery_rate = rate(prev.recovery_err, cur.recovery_err, step)

    if config.out:
        out = Path(config.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(study_csv_bytes(table))
        if config.figures:
            from .figures import render_convergence

            render_convergence(table, out.with_suffix(".png"))
    if config.sample_grid and config.out:
        degree = max(config.degrees)
        level = max(config.levels)
        mesh = meshes[level]
        from .assembly import solve_problem

        wf = solve_problem(mesh, problem, degree, config.quad_degree)
        samples = sample_field(mesh, wf, config.sample_grid)
        stem = Path(config.out)
        write_field_csv(samples, stem.with_name(stem.stem + "_field.csv"))
        if config.figures:
            from .figures import render_field

            render_field(samples, stem.with_name(stem.stem + "_field.png"))
    return table


def _fmt_err(x: float) -> str:
    return f"{x:.6E}"


def _fmt_rate(x: float | None) -> str:
    return "" if x is None else f"{x:.3f}"


def study_csv_bytes(table: StudyTable) -> bytes:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in table.rows:
        buf.write(
            ",".join(
                (
                    str(row.degree),
                    str(row.level),
                    _fmt_err(row.l2_err),
                    _fmt_rate(row.l2_rate),
                    _fmt_err(row.energy_err),
                    _fmt_rate(row.energy_rate),
                    _fmt_err(row.recovery_err),
                    _fmt_rate(row.recovery_rate),
                )
            )
            + "\n"
        )
    return buf.getvalue().encode()


def format_study_table(table: StudyTable) -> str:
    """Aligned text table, one section per polynomial degree."""
    lines = [f"problem: {table.problem_name}"]
    header = f"{'level':>5} {'l2_err':>13} {'rate':>6} {'energy_err':>13} {'rate':>6} {'recovery_err':>13} {'rate':>6}"
    for degree in sorted({r.degree for r in table.rows}):
        lines.append(f"-- P{degree} --")
        lines.append(header)
        for r in table.for_degree(degree):
            lines.append(
                f"{r.level:>5} {_fmt_err(r.l2_err):>13} {_fmt_rate(r.l2_rate):>6} "
                f"{_fmt_err(r.energy_err):>13} {_fmt_rate(r.energy_rate):>6} "
                f"{_fmt_err(r.recovery_err):>13} {_fmt_rate(r.recovery_rate):>6}"
            )
    return "\n".join(lines)


# -- circular flow -------------------------------------------------------------


@dataclass
class OutflowProfile:
    """Trace values along the lower side of the slit, with the L2 distance
    to the inflow profile sin^2(pi x)."""

    xs: np.ndarray
    values: np.ndarray
    distance: float


@dataclass
class CircularFlowRow:
    degree: int
    level: int
    n_elements: int
    outflow_distance: float


@dataclass
class CircularFlowResult:
    rows: list[CircularFlowRow]
    profile: OutflowProfile  # finest level, last degree
    samples: "FieldSamples | None" = None


def outflow_profile(mesh: PolygonalMesh, wf: WeakFunction, quad_degree: int | None = None) -> OutflowProfile:
    """Compare the computed trace on bottom-slit interfaces with the inflow
    data driven around the circulation."""
    qd = max(quad_degree or default_quad_degree(wf.degree), 16)
    total = 0.0
    xs, values = [], []
    for i, iface in enumerate(mesh.interfaces):
        if iface.tag != "bottom-slit":
            continue
        p0, p1 = mesh.interface_endpoints(i)
        rule = gauss_segment(p0, p1, qd)
        vb = wf.trace_values(i, rule.points)
        target = np.sin(np.pi * rule.points[:, 0]) ** 2
        total += float(rule.weights @ (vb - target) ** 2)
        t = np.linspace(0.0, 1.0, 12)
        pts = p0[None, :] + t[:, None] * (p1 - p0)[None, :]
        xs.append(pts[:, 0])
        values.append(wf.trace_values(i, pts))
    if not xs:
        raise ValueError("mesh carries no bottom-slit interfaces")
    xs = np.concatenate(xs)
    order = np.argsort(xs)
    return OutflowProfile(xs[order], np.concatenate(values)[order], float(np.sqrt(total)))


def run_circular_flow(config: StudyConfig) -> CircularFlowResult:
    """Solve the circulation benchmark over the configured levels and report
    how closely the outflow trace returns the inflow profile."""
    problem = config.resolve_problem()
    if problem.mesh_family != "slit" and (config.mesh_family or "slit") != "slit":
        raise ValueError("circular flow runs on the slit mesh family")
    validate_manufactured(problem)

    meshes = {level: generate_slit_mesh(2**level) for level in config.levels}

    def solve_one(task):
        degree, level = task
        mesh = meshes[level]
        from .assembly import solve_problem

        wf = solve_problem(mesh, problem, degree, config.quad_degree)
        profile = outflow_profile(mesh, wf, config.quad_degree)
        return CircularFlowRow(degree, level, mesh.n_elements, profile.distance), (degree, level, wf)

    tasks = [(degree, level) for degree in config.degrees for level in sorted(config.levels)]
    results = _run_tasks(tasks, solve_one)
    rows = sorted((r for r, _ in results), key=lambda r: (r.degree, r.level))
    final_degree, final_level = max(config.degrees), max(config.levels)
    wf_final = next(wf for _, (d, l, wf) in results if d == final_degree and l == final_level)
    profile = outflow_profile(meshes[final_level], wf_final, config.quad_degree)

    samples = None
    if config.sample_grid:
        samples = sample_field(meshes[final_level], wf_final, config.sample_grid)

    if config.out:
        out = Path(config.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        lines = ["degree,level,outflow_distance"]
        lines.extend(f"{r.degree},{r.level},{_fmt_err(r.outflow_distance)}" for r in rows)
        out.write_text("\n".join(lines) + "\n")
        if samples is not None:
            write_field_csv(samples, out.with_name(out.stem + "_field.csv"))
        if config.figures:
            from .figures import render_field, render_outflow

            render_outflow(profile, out.with_suffix(".png"))
            if samples is not None:
                render_field(samples, out.with_name(out.stem + "_field.png"))
    return CircularFlowResult(rows, profile, samples)


# -- field sampling -------------------------------------------------------------


@dataclass
class FieldSamples:
    """Interior values on a uniform grid; NaN marks points outside the
    meshed domain."""

    points: np.ndarray  # (n, 2)
    values: np.ndarray  # (n,), NaN outside
    resolution: int


def sample_field(mesh: PolygonalMesh, wf: WeakFunction, grid_resolution: int) -> FieldSamples:
    """Evaluate the interior component on a uniform grid over the bounding
    box; points on shared boundaries resolve to the element above (slit
    rule), remaining ties to the lowest element id."""
    x0, y0, x1, y1 = mesh.bounding_box()
    xs = np.linspace(x0, x1, grid_resolution)
    ys = np.linspace(y0, y1, grid_resolution)
    xx, yy = np.meshgrid(xs, ys, indexing="xy")
    points = np.column_stack([xx.ravel(), yy.ravel()])
    locator = PointLocator(mesh)
    values = np.full(len(points), np.nan)
    for idx, p in enumerate(points):
        e = locator.locate(p)
        if e >= 0:
            values[idx] = wf.interior_values(e, p[None, :])[0]
    return FieldSamples(points, values, grid_resolution)


def write_field_csv(samples: FieldSamples, path) -> None:
    lines = ["x,y,value"]
    for (x, y), v in zip(samples.points, samples.values):
        val = "" if np.isnan(v) else f"{v:.12E}"
        lines.append(f"{x:.12E},{y:.12E},{val}")
    Path(path).write_text("\n".join(lines) + "\n")
