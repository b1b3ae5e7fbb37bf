"""Command-line front end.

Exit codes: 0 converged, 1 I/O or parse error, 2 network validation
error, 3 solver failure (iteration budget exhausted or voltage
collapse). One solve per invocation; all numeric output uses a dot
decimal separator regardless of locale.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import InputError, SolverError, ValidationError
from .io import parse_network_file, render_result
from .model import to_per_unit
from .oracle import check_residuals, reference_solve
from .ordering import build_ordering
from .solver import SolveResult, SweepMode, SweepOptions, solve
from .topology import build_dz, build_t, build_trx


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radialflow",
        description="Backward/forward sweep power flow for radial distribution networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("solve", help="solve a network file and report the state")
    run.add_argument("input", help="JSON network file or CSV directory")
    run.add_argument("--format", choices=("json", "csv"), default=None,
                     help="input format (default: inferred from the path)")
    run.add_argument("--epsilon", type=float, default=1e-4,
                     help="convergence tolerance on the voltage change [pu]")
    run.add_argument("--max-iter", type=int, default=100, help="iteration budget")
    run.add_argument("--mode", choices=("two-step", "trx"), default="two-step",
                     help="voltage update form")
    run.add_argument("--output", choices=("table", "json"), default="table")
    run.add_argument("--radians", action="store_true",
                     help="table angles in radians instead of degrees")
    run.add_argument("--verify", action="store_true",
                     help="print KCL/KVL/power residuals of the solution")
    run.add_argument("--cross-check", action="store_true",
                     help="compare against the independent admittance solver")
    run.add_argument("--dump-matrices", action="store_true",
                     help="print the T and TRX matrices before solving")
    return parser


def _format_matrix(matrix: np.ndarray, complex_entries: bool) -> str:
    rows = []
    for row in matrix:
        if complex_entries:
            rows.append("  ".join(f"{v.real:+.6f}{v.imag:+.6f}j" for v in row))
        else:
            rows.append(" ".join(str(int(v)) for v in row))
    return "\n".join(rows)


def _dump_matrices(net) -> str:
    ordering = build_ordering(to_per_unit(net))
    t = build_t(ordering)
    trx = build_trx(t, build_dz(ordering))
    return (
        "T =\n" + _format_matrix(t.as_array(), complex_entries=False)
        + "\n\nTRX =\n" + _format_matrix(trx.trx, complex_entries=True) + "\n"
    )


def _cross_check_line(net, result: SolveResult, epsilon: float) -> str:
    reference = reference_solve(net, tolerance=min(epsilon, 1e-10) / 100)
    by_id = {bus.id: reference[k] for k, bus in enumerate(net.buses)}
    deviation = max(
        abs(result.voltages[k] - by_id[bus_id])
        for k, bus_id in enumerate(result.node_ids)
    )
    return f"cross-check:  max |V_sweep - V_reference| = {deviation:.3e} pu"


def run_solve(args: argparse.Namespace) -> int:
    net = parse_network_file(args.input, fmt=args.format)
    opts = SweepOptions(
        epsilon=args.epsilon,
        max_iterations=args.max_iter,
        mode=SweepMode(args.mode),
    )
    if args.dump_matrices:
        print(_dump_matrices(net))
    result = solve(net, opts)
    print(render_result(result, fmt=args.output, radians=args.radians), end="")
    if args.verify:
        report = check_residuals(net, result)
        print(f"max KCL residual:  {report.max_kcl_residual:.3e}")
        print(f"max KVL residual:  {report.max_kvl_residual:.3e}")
        print(f"power mismatch:    {report.power_mismatch:.3e}")
    if args.cross_check:
        print(_cross_check_line(net, result, args.epsilon))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return run_solve(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    sys.exit(main())
