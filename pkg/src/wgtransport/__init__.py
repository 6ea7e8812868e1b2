"""Weak Galerkin solver for the steady transport-reaction equation
div(beta u) + alpha u = f on 2D polygonal meshes, with strong inflow data,
characteristic-trace elimination and upwind jump stabilization, plus a
convergence benchmark driver."""

from .analysis import (
    ErrorReport,
    consistency_terms,
    energy_norm,
    error_report,
    l2_error,
    recover_derivative,
    recovery_error,
)
from .assembly import (
    DofMap,
    SparseSystem,
    assemble,
    build_dofmap,
    gather_coefficients,
    scatter_solution,
    solve,
    solve_problem,
)
from .basis import EdgeBasis, ElementBasis, pk_dim
from .exceptions import (
    MeshFormatError,
    MeshValidationError,
    ProblemSetupError,
    SolverError,
    WgError,
)
from .mesh import (
    Element,
    FaceClassification,
    FlowClass,
    Interface,
    MeshConditionReport,
    PointLocator,
    PolygonalMesh,
    check_mesh_condition,
    classify_faces,
    generate_noncompatible_quads,
    generate_slit_mesh,
    generate_structured_triangles,
    mesh_from_cells,
    meshes_equal,
    read_mesh,
    write_mesh,
)
from .operators import (
    LocalOperator,
    WeakFunction,
    default_quad_degree,
    local_bilinear,
    local_rhs,
    project_pplus,
    project_q0,
    project_qb,
    project_qh,
    select_pplus_faces,
    weak_divergence,
)
from .problems import ProblemSpec, builtin_problems, sigma_values, validate_manufactured
from .quadrature import QuadratureRule, gauss_segment, polygon_quadrature, triangle_rule
from .study import (
    CircularFlowResult,
    FieldSamples,
    StudyConfig,
    StudyTable,
    run_circular_flow,
    run_convergence,
    sample_field,
)

__version__ = "0.1.0"
