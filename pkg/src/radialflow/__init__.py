"""Backward/forward sweep power flow for radial distribution networks."""

from .errors import (
    CycleDetectedError,
    DimensionMismatchError,
    InputError,
    MaxIterationsError,
    MissingBasesError,
    MultipleRootsError,
    NoConvergenceError,
    NoRootError,
    NotConnectedError,
    ParseError,
    RadialFlowError,
    SchemaError,
    SolverError,
    ValidationError,
    VoltageCollapseError,
)
from .io import parse_network_file, parse_result_json, render_result
from .model import (
    BranchRecord,
    BusRecord,
    NetworkInput,
    PerUnitBases,
    Units,
    net_injection,
    to_per_unit,
)
from .oracle import ResidualReport, check_residuals, reference_solve, two_node_voltage
from .ordering import RadialOrdering, build_ordering
from .solver import (
    SolveResult,
    SweepMode,
    SweepOptions,
    SweepState,
    backward_sweep,
    converged,
    forward_sweep,
    nodal_currents,
    solve,
    sweep_step_trx,
)
from .topology import (
    DrivingMatrix,
    ImpedanceDiagonal,
    TopologyMatrix,
    build_dz,
    build_t,
    build_trx,
    trx_from_paths,
)

__version__ = "0.1.0"

__all__ = [
    "BranchRecord",
    "BusRecord",
    "CycleDetectedError",
    "DimensionMismatchError",
    "DrivingMatrix",
    "ImpedanceDiagonal",
    "InputError",
    "MaxIterationsError",
    "MissingBasesError",
    "MultipleRootsError",
    "NetworkInput",
    "NoConvergenceError",
    "NoRootError",
    "NotConnectedError",
    "ParseError",
    "PerUnitBases",
    "RadialFlowError",
    "RadialOrdering",
    "ResidualReport",
    "SchemaError",
    "SolveResult",
    "SolverError",
    "SweepMode",
    "SweepOptions",
    "SweepState",
    "TopologyMatrix",
    "Units",
    "ValidationError",
    "VoltageCollapseError",
    "backward_sweep",
    "build_dz",
    "build_ordering",
    "build_t",
    "build_trx",
    "check_residuals",
    "converged",
    "forward_sweep",
    "net_injection",
    "nodal_currents",
    "parse_network_file",
    "parse_result_json",
    "reference_solve",
    "render_result",
    "solve",
    "sweep_step_trx",
    "to_per_unit",
    "trx_from_paths",
    "two_node_voltage",
]
