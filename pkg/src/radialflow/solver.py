"""Backward/forward sweep fixed-point solver for radial feeders.

One iteration maps a voltage vector V to its successor:

    I = conj(S) / conj(V)            nodal injection currents
    J = -T I                         backward sweep (KCL aggregation)
    V' = V0 - T' D_Z J               forward sweep (KVL drops)

or, folded into a single equation, V' = V0 + TRX I with TRX = T' D_Z T.
Iteration starts flat (every node at the reference voltage) and stops
when the largest voltage change falls below epsilon. Both sweep modes
produce bit-identical iterates up to floating-point associativity.

A solve holds no global state; solves of different networks may run
concurrently and all inputs and results are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatchError,
    MaxIterationsError,
    ValidationError,
    VoltageCollapseError,
)
from .model import NetworkInput, net_injection, to_per_unit
from .ordering import RadialOrdering, build_ordering
from .topology import (
    DrivingMatrix,
    ImpedanceDiagonal,
    TopologyMatrix,
    build_dz,
    build_t,
    build_trx,
)

DELTA_METRICS = ("complex", "magnitude")


class SweepMode(Enum):
    """Voltage update form: explicit two-step sweep or the TRX fold."""

    TWO_STEP = "two-step"
    TRX = "trx"


@dataclass(frozen=True)
class SweepOptions:
    """Solver controls.

    Attributes:
        epsilon: Convergence tolerance on the voltage change [pu].
        max_iterations: Iteration budget.
        mode: Two-step sweep or single-equation TRX update.
        v_ref: Fixed root (substation) voltage.
        v_min: Guard threshold for the current division; any node
            magnitude below it aborts the solve as a voltage collapse.
        delta_metric: "complex" compares |V_new - V_old| (stricter);
            "magnitude" compares ||V_new| - |V_old||.
        warm_start: Optional initial non-root voltage vector; defaults
            to a flat start at ``v_ref``.
    """

    epsilon: float = 1e-4
    max_iterations: int = 100
    mode: SweepMode = SweepMode.TWO_STEP
    v_ref: complex = 1.0 + 0.0j
    v_min: float = 0.2
    delta_metric: str = "complex"
    warm_start: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")
        if not self.v_min > 0:
            raise ValidationError("v_min must be positive")
        if self.delta_metric not in DELTA_METRICS:
            raise ValidationError(f"delta_metric must be one of {DELTA_METRICS}")


@dataclass(frozen=True)
class SweepState:
    """One iterate of the sweep: voltages, currents and the last change."""

    v: np.ndarray
    i: np.ndarray
    j: np.ndarray
    k: int
    delta: float


@dataclass(frozen=True)
class SolveResult:
    """Converged system state.

    Node arrays are aligned with ``node_ids`` (root first, then the
    layered internal order); branch arrays are aligned with the oriented
    ``branch_from``/``branch_to`` id pairs. Branch currents are positive
    when flowing from the root toward the loads.
    """

    node_ids: tuple[str, ...]
    voltages: np.ndarray
    branch_from: tuple[str, ...]
    branch_to: tuple[str, ...]
    branch_currents: np.ndarray
    branch_losses: np.ndarray
    total_loss: complex
    source_power: complex
    iterations: int
    history: tuple[float, ...]

    @property
    def magnitudes(self) -> np.ndarray:
        """Voltage magnitudes [pu]."""
        return np.abs(self.voltages)

    @property
    def angles_deg(self) -> np.ndarray:
        """Voltage angles [degrees]."""
        return np.degrees(np.angle(self.voltages))


def nodal_currents(v: np.ndarray, s: np.ndarray, v_min: float = 0.2) -> np.ndarray:
    """Injection currents I_k = conj(S_k) / conj(V_k).

    Raises:
        VoltageCollapseError: Some |V_k| < ``v_min``; the iteration has
            diverged or the network cannot carry its load.
        DimensionMismatchError: Vector lengths disagree.
    """
    if len(v) != len(s):
        raise DimensionMismatchError(
            f"voltage vector has length {len(v)}, injections {len(s)}"
        )
    magnitudes = np.abs(v)
    if len(v) and magnitudes.min() < v_min:
        worst = int(magnitudes.argmin())
        raise VoltageCollapseError(
            f"|V| = {magnitudes[worst]:.4f} at node index {worst + 1} "
            f"fell below the {v_min} pu guard"
        )
    return np.conj(s / v) if len(v) else np.zeros(0, dtype=complex)


def backward_sweep(t: TopologyMatrix, i: np.ndarray) -> np.ndarray:
    """Aggregate nodal currents into branch currents: J = -T I."""
    return -t.aggregate_downstream(i)


def forward_sweep(
    v0: complex, t: TopologyMatrix, dz: ImpedanceDiagonal, j: np.ndarray
) -> np.ndarray:
    """Propagate voltage drops from the root: V = V0 - T' D_Z J."""
    if dz.n != t.n:
        raise DimensionMismatchError(
            f"topology is {t.n}x{t.n} but impedance vector has length {dz.n}"
        )
    return v0 - t.accumulate_paths(dz.z * j)


def sweep_step_trx(v0: complex, trx: DrivingMatrix, i: np.ndarray) -> np.ndarray:
    """Single-equation voltage update: V = V0 + TRX I."""
    if len(i) != trx.n:
        raise DimensionMismatchError(
            f"TRX is {trx.n}x{trx.n} but current vector has length {len(i)}"
        )
    return v0 + trx.trx @ i


def voltage_delta(v_new: np.ndarray, v_old: np.ndarray, metric: str = "complex") -> float:
    """Largest per-node voltage change between two iterates."""
    if len(v_new) != len(v_old):
        raise DimensionMismatchError(
            f"vectors of length {len(v_new)} and {len(v_old)}"
        )
    if len(v_new) == 0:
        return 0.0
    if metric == "magnitude":
        return float(np.max(np.abs(np.abs(v_new) - np.abs(v_old))))
    return float(np.max(np.abs(v_new - v_old)))


def converged(
    v_new: np.ndarray, v_old: np.ndarray, epsilon: float, metric: str = "complex"
) -> bool:
    """True when the largest voltage change is strictly below epsilon."""
    return voltage_delta(v_new, v_old, metric) < epsilon


def injection_vector(net: NetworkInput, ordering: RadialOrdering) -> np.ndarray:
    """Net complex injections for internal nodes 1..n, in per unit.

    The root bus is the slack: its own power fields do not enter the
    sweep and are excluded here.
    """
    by_id = {bus.id: bus for bus in net.buses}
    return np.array(
        [net_injection(by_id[ordering.ids[k]]) for k in range(1, ordering.n + 1)],
        dtype=complex,
    )


def solve(net: NetworkInput, opts: SweepOptions | None = None) -> SolveResult:
    """Run the sweep iteration on a radial network to convergence.

    The network may be in physical units (it is normalised first) and
    its branches may be given in either orientation. Iteration k is one
    backward plus one forward step; convergence is checked after the
    forward step and the reported count includes the passing iteration.

    Raises:
        ValidationError: The network is not a valid radial tree.
        VoltageCollapseError: A node magnitude fell below ``opts.v_min``.
        MaxIterationsError: No convergence within ``opts.max_iterations``;
            the exception carries the last state and the delta history.
    """
    if opts is None:
        opts = SweepOptions()
    net_pu = to_per_unit(net)
    ordering = build_ordering(net_pu)
    t = build_t(ordering)
    dz = build_dz(ordering)
    s = injection_vector(net_pu, ordering)
    trx = build_trx(t, dz) if opts.mode is SweepMode.TRX else None

    n = ordering.n
    if opts.warm_start is not None:
        if len(opts.warm_start) != n:
            raise DimensionMismatchError(
                f"warm start has length {len(opts.warm_start)}, network has {n} nodes"
            )
        v = np.array(opts.warm_start, dtype=complex)
    else:
        v = np.full(n, opts.v_ref, dtype=complex)

    history: list[float] = []
    i = np.zeros(n, dtype=complex)
    j = np.zeros(n, dtype=complex)
    reached = None
    for k in range(1, opts.max_iterations + 1):
        i = nodal_currents(v, s, v_min=opts.v_min)
        if opts.mode is SweepMode.TWO_STEP:
            j = backward_sweep(t, i)
            v_new = forward_sweep(opts.v_ref, t, dz, j)
        else:
            v_new = sweep_step_trx(opts.v_ref, trx, i)
        delta = voltage_delta(v_new, v, opts.delta_metric)
        history.append(delta)
        v = v_new
        if delta < opts.epsilon:
            reached = k
            break

    if reached is None:
        if opts.mode is SweepMode.TRX:
            j = backward_sweep(t, i)
        state = SweepState(v=v, i=i, j=j, k=opts.max_iterations, delta=history[-1])
        raise MaxIterationsError(
            f"no convergence after {opts.max_iterations} iterations "
            f"(last delta {history[-1]:.3e})",
            state=state,
            history=history,
        )

    # The reported branch currents are the ones that produced the final
    # voltages, so KVL holds by construction in two-step mode.
    if opts.mode is SweepMode.TRX:
        j = backward_sweep(t, i)
    losses = np.abs(j) ** 2 * dz.z
    root_children = [b for b in range(n) if ordering.parent[b] == 0]
    source_power = opts.v_ref * np.conj(sum(j[b] for b in root_children))

    return SolveResult(
        node_ids=ordering.ids,
        voltages=np.concatenate(([opts.v_ref], v)).astype(complex),
        branch_from=tuple(br.from_bus for br in ordering.branch_order),
        branch_to=tuple(br.to_bus for br in ordering.branch_order),
        branch_currents=j,
        branch_losses=losses,
        total_loss=complex(losses.sum()),
        source_power=complex(source_power),
        iterations=reached,
        history=tuple(history),
    )
