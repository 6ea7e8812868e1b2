import numpy as np
import pytest

from wgtransport import (
    StudyConfig,
    WeakFunction,
    builtin_problems,
    generate_slit_mesh,
    run_circular_flow,
    run_convergence,
    sample_field,
    solve_problem,
)
from wgtransport.study import build_study_mesh, format_study_table, outflow_profile, study_csv_bytes, write_field_csv

from helpers import polynomial_problem


@pytest.fixture(scope="module")
def sine_table():
    return run_convergence(
        StudyConfig(problem=2, degrees=(1,), levels=(3, 4, 5), figures=False)
    )


def test_level_means_power_of_two_subdivisions():
    prob = builtin_problems()[0]
    mesh = build_study_mesh(prob, "tri", 3)
    assert mesh.n_elements == 2 * 8 * 8
    mesh = build_study_mesh(prob, "poly", 2, seed=0, refine_fraction=0.0)
    assert mesh.n_elements == 16


def test_csv_deterministic_for_fixed_config(tmp_path):
    config = StudyConfig(problem=2, degrees=(1,), levels=(2, 3), seed=4, figures=False)
    a = study_csv_bytes(run_convergence(config))
    b = study_csv_bytes(run_convergence(config))
    assert a == b
    header = a.decode().splitlines()[0]
    assert header == "degree,level,l2_err,l2_rate,energy_err,energy_rate,recovery_err,recovery_rate"


def test_single_level_run_reports_errors_without_rates():
    table = run_convergence(StudyConfig(problem=1, degrees=(1,), levels=(3,), figures=False))
    row = table.rows[0]
    assert row.l2_err > 0 and row.l2_rate is None
    csv = study_csv_bytes(table).decode().splitlines()[1]
    assert csv.split(",")[3] == ""


def test_sine_problem_published_rate_windows(sine_table):
    # degree-1 rates over three consecutive levels: interior L2 near 2,
    # energy near 1.5
    rows = sine_table.for_degree(1)
    for row in rows[1:]:
        assert row.l2_rate == pytest.approx(2.0, abs=0.1)
        assert row.energy_rate == pytest.approx(1.5, abs=0.15)


def test_monotone_error_decrease(sine_table):
    rows = sine_table.for_degree(1)
    for prev, cur in zip(rows, rows[1:]):
        assert cur.l2_err < prev.l2_err
        assert cur.energy_err < prev.energy_err
        assert cur.recovery_err < prev.recovery_err


def test_radial_problem_cubic_rate():
    table = run_convergence(StudyConfig(problem=3, degrees=(3,), levels=(3, 4), figures=False))
    row = table.row(3, 4)
    assert 3.8 <= row.l2_rate <= 4.15


def test_quadrature_escalation_changes_little():
    base = run_convergence(
        StudyConfig(problem=1, degrees=(2,), levels=(3,), figures=False)
    ).row(2, 3)
    high = run_convergence(
        StudyConfig(problem=1, degrees=(2,), levels=(3,), quad_degree=2 * 2 + 5, figures=False)
    ).row(2, 3)
    for attr in ("l2_err", "energy_err", "recovery_err"):
        assert getattr(high, attr) == pytest.approx(getattr(base, attr), rel=1e-2)


def test_study_writes_csv_and_figure(tmp_path):
    out = tmp_path / "sub" / "study.csv"
    table = run_convergence(
        StudyConfig(problem=1, degrees=(1,), levels=(2, 3), out=out, sample_grid=12)
    )
    assert out.exists()
    assert out.with_suffix(".png").exists()
    assert (tmp_path / "sub" / "study_field.csv").exists()
    assert (tmp_path / "sub" / "study_field.png").exists()
    text = format_study_table(table)
    assert "-- P1 --" in text


# -- field sampling -----------------------------------------------------------


def test_sample_field_constant_and_missing():
    prob, _ = polynomial_problem(0, beta=(1.0, 1.0))
    mesh = build_study_mesh(prob, "tri", 2)
    wf = WeakFunction.zeros(mesh, 0)
    wf.interior[:] = 3.25
    samples = sample_field(mesh, wf, 9)
    assert np.allclose(samples.values, 3.25)

    slit = generate_slit_mesh(2)
    wfs = WeakFunction.zeros(slit, 0)
    samples = sample_field(slit, wfs, 5)
    assert not np.isnan(samples.values).any()  # bounding box equals the domain


def test_sample_field_matches_exact_polynomial(tmp_path):
    prob, _ = polynomial_problem(2, beta=(1.0, 1.0), seed=5)
    mesh = build_study_mesh(prob, "poly", 2, seed=1)
    wf = solve_problem(mesh, prob, 2)
    samples = sample_field(mesh, wf, 8)
    exact = prob.u_exact(samples.points)
    assert np.abs(samples.values - exact).max() <= 1e-10
    path = tmp_path / "field.csv"
    write_field_csv(samples, path)
    assert path.read_text().splitlines()[0] == "x,y,value"


def test_sample_on_slit_takes_upper_side():
    prob = builtin_problems()[3]
    mesh = generate_slit_mesh(4)
    wf = WeakFunction.zeros(mesh, 0)
    for e in range(mesh.n_elements):
        wf.interior[e] = 1.0 if mesh.elements[e].centroid[1] > 0 else -1.0
    samples = sample_field(mesh, wf, 9)  # grid hits y = 0 exactly
    on_slit = (np.abs(samples.points[:, 1]) < 1e-14) & (samples.points[:, 0] >= 0.25)
    assert on_slit.any()
    assert np.allclose(samples.values[on_slit], 1.0)


# -- circular flow --------------------------------------------------------------


def test_zero_inflow_distance_equals_profile_norm():
    # with zero boundary data everywhere the solution vanishes and the
    # outflow distance is ||sin^2(pi x)|| = sqrt(3/8) on [0, 1]
    prob = builtin_problems()[3]
    from dataclasses import replace as dc_replace

    silent = dc_replace(prob, g=lambda pts, tag=None: np.zeros(len(np.atleast_2d(pts))))
    mesh = generate_slit_mesh(4)
    wf = solve_problem(mesh, silent, 2)
    assert np.abs(wf.interior).max() <= 1e-12
    profile = outflow_profile(mesh, wf)
    assert profile.distance == pytest.approx(np.sqrt(3.0 / 8.0), rel=1e-12)


def test_inflow_trace_reproduces_projected_data():
    prob = builtin_problems()[3]
    mesh = generate_slit_mesh(4)
    k = 2
    from wgtransport import classify_faces, build_dofmap

    cls = classify_faces(mesh, prob.beta, degree=2 * k + 2)
    dofmap = build_dofmap(mesh, cls, prob, k)
    wf = solve_problem(mesh, prob, k, cls=cls)
    for i, iface in enumerate(mesh.interfaces):
        if iface.tag == "top-slit":
            assert np.allclose(wf.trace[i], dofmap.constrained[i], atol=0)


def test_circular_flow_writes_outputs(tmp_path):
    out = tmp_path / "flow.csv"
    result = run_circular_flow(
        StudyConfig(problem=4, degrees=(1,), levels=(1, 2), out=out, sample_grid=10)
    )
    assert out.exists()
    assert out.with_suffix(".png").exists()
    assert (tmp_path / "flow_field.csv").exists()
    assert (tmp_path / "flow_field.png").exists()
    assert len(result.rows) == 2
    assert result.rows[1].outflow_distance < result.rows[0].outflow_distance


def test_thread_env_variable_gives_same_rows(monkeypatch):
    config = StudyConfig(problem=2, degrees=(1, 2), levels=(2, 3), figures=False)
    serial = run_convergence(config)
    monkeypatch.setenv("WGTRANSPORT_THREADS", "4")
    threaded = run_convergence(config)
    assert study_csv_bytes(serial) == study_csv_bytes(threaded)
