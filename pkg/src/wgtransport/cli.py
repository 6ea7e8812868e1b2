"""Command-line benchmark driver.

    wgtransport study --problem 1 --degrees 1,2,3 --levels 3..6 \
        --mesh tri --seed 0 --out results/ex1.csv

Exit codes: 0 success, 2 validation failure, 3 solver failure.
"""

from __future__ import annotations

import argparse
import sys

from .exceptions import MeshFormatError, MeshValidationError, ProblemSetupError, SolverError
from .study import StudyConfig, format_study_table, run_circular_flow, run_convergence

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


def _parse_int_list(text: str) -> tuple[int, ...]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty list {text!r}")
    return tuple(values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgtransport", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    study = sub.add_parser("study", help="run a convergence or circular-flow study")
    study.add_argument("--problem", type=int, required=True, choices=(1, 2, 3, 4))
    study.add_argument("--degrees", default="1,2", help="comma list, e.g. 1,2,3")
    study.add_argument("--levels", default="3..5", help="range a..b or comma list")
    study.add_argument("--mesh", choices=("tri", "poly", "slit"), default=None)
    study.add_argument("--seed", type=int, default=0)
    study.add_argument("--quad-degree", type=int, default=None)
    study.add_argument("--refine-fraction", type=float, default=0.3)
    study.add_argument("--out", default=None, help="CSV output path")
    study.add_argument("--dump-matrix", default=None, help="MatrixMarket dump path stem")
    study.add_argument("--sample-grid", type=int, default=None, help="field sample grid resolution")
    study.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        degrees = _parse_int_list(args.degrees)
        levels = _parse_int_list(args.levels)
        if any(d < 0 or d > 4 for d in degrees):
            raise ValueError("degrees must lie in 0..4")
        if list(levels) != sorted(levels):
            raise ValueError("levels must increase")
        if args.problem == 4 and args.mesh not in (None, "slit"):
            raise ValueError("problem 4 runs on the slit mesh family")
        if args.problem != 4 and args.mesh == "slit":
            raise ValueError("the slit mesh family is specific to problem 4")
        config = StudyConfig(
            problem=args.problem,
            degrees=degrees,
            levels=levels,
            mesh_family=args.mesh,
            seed=args.seed,
            quad_degree=args.quad_degree,
            refine_fraction=args.refine_fraction,
            out=args.out,
            sample_grid=args.sample_grid,
            dump_matrix=args.dump_matrix,
            figures=not args.no_figures,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        if args.problem == 4:
            result = run_circular_flow(config)
            print("degree level outflow_distance")
            for row in result.rows:
                print(f"{row.degree:>6} {row.level:>5} {row.outflow_distance:.6E}")
        else:
            table = run_convergence(config)
            print(format_study_table(table))
    except (MeshFormatError, MeshValidationError, ProblemSetupError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
