"""Solver-independent verification machinery.

Three checks that share no code with the sweep:

* :func:`check_residuals` evaluates Kirchhoff current/voltage residuals
  and the power balance of a candidate solution directly from the
  network data and the reported state.
* :func:`reference_solve` solves the same constant-power model by a
  damped fixed-point iteration on the full nodal admittance matrix; no
  topology matrix, no sweep, deliberately a different formulation.
* :func:`two_node_voltage` is the closed-form (quadratic) solution of a
  single-branch network, an algebra-level anchor for both solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DimensionMismatchError, NoConvergenceError
from .model import NetworkInput, net_injection, to_per_unit
from .solver import SolveResult


@dataclass(frozen=True)
class ResidualReport:
    """Constraint violations of a candidate solution; all values >= 0.

    ``kcl_per_node`` is aligned with the non-root entries of the checked
    result's ``node_ids``; ``kvl_per_branch`` with its branch order.
    """

    max_kcl_residual: float
    max_kvl_residual: float
    power_mismatch: float
    kcl_per_node: np.ndarray
    kvl_per_branch: np.ndarray


def check_residuals(net: NetworkInput, result: SolveResult) -> ResidualReport:
    """Measure how well a reported state satisfies the circuit laws.

    KCL at a node: current arriving on the parent branch plus the load
    injection conj(S/V) minus the currents leaving on child branches.
    KVL on a branch: V_from - V_to - Z J. Power balance: source power
    against total consumption plus series losses. All computed from
    ``net`` and ``result`` alone.

    Raises:
        DimensionMismatchError: Result and network shapes disagree.
    """
    net_pu = to_per_unit(net)
    if len(result.node_ids) != len(net_pu.buses):
        raise DimensionMismatchError(
            f"result has {len(result.node_ids)} nodes, network has {len(net_pu.buses)}"
        )
    if len(result.branch_currents) != len(net_pu.branches):
        raise DimensionMismatchError(
            f"result has {len(result.branch_currents)} branches, "
            f"network has {len(net_pu.branches)}"
        )

    v_by_id = dict(zip(result.node_ids, result.voltages))
    s_by_id = {bus.id: net_injection(bus) for bus in net_pu.buses}
    z_by_pair = {frozenset((br.from_bus, br.to_bus)): br.z for br in net_pu.branches}
    root_id = next(bus.id for bus in net_pu.buses if bus.is_root)

    def impedance(fid: str, tid: str) -> complex:
        try:
            return z_by_pair[frozenset((fid, tid))]
        except KeyError:
            raise DimensionMismatchError(
                f"result branch {fid!r}-{tid!r} does not exist in the network"
            )

    inflow: dict[str, complex] = {}
    outflow: dict[str, complex] = {bus.id: 0.0 + 0.0j for bus in net_pu.buses}
    kvl = np.zeros(len(result.branch_currents))
    for b, (fid, tid) in enumerate(zip(result.branch_from, result.branch_to)):
        j = result.branch_currents[b]
        kvl[b] = abs(v_by_id[fid] - v_by_id[tid] - impedance(fid, tid) * j)
        inflow[tid] = j
        outflow[fid] += j

    non_root = [bus_id for bus_id in result.node_ids if bus_id != root_id]
    kcl = np.zeros(len(non_root))
    for k, bus_id in enumerate(non_root):
        injected = np.conj(s_by_id[bus_id] / v_by_id[bus_id])
        kcl[k] = abs(inflow.get(bus_id, 0.0 + 0.0j) + injected - outflow[bus_id])

    consumption = -sum(s_by_id[bus_id] for bus_id in non_root)
    loss = sum(
        abs(result.branch_currents[b]) ** 2
        * impedance(result.branch_from[b], result.branch_to[b])
        for b in range(len(result.branch_currents))
    )
    source = v_by_id[root_id] * np.conj(outflow[root_id])
    power_mismatch = abs(source - (consumption + loss))

    return ResidualReport(
        max_kcl_residual=float(kcl.max(initial=0.0)),
        max_kvl_residual=float(kvl.max(initial=0.0)),
        power_mismatch=float(power_mismatch),
        kcl_per_node=kcl,
        kvl_per_branch=kvl,
    )


def reference_solve(
    net: NetworkInput,
    tolerance: float = 1e-10,
    v_ref: complex = 1.0 + 0.0j,
    damping: float = 0.7,
    max_iterations: int = 100_000,
) -> np.ndarray:
    """Solve the constant-power model on the nodal admittance equations.

    Builds Y from the branch impedances, factorises the non-root block
    once and iterates V <- (1 - d) V + d Y_LL^-1 (conj(S/V) - Y_L0 V0)
    with damping d until the largest voltage change drops below
    ``tolerance``. Returns voltages aligned with the order of
    ``net.buses`` (root included).

    Raises:
        NoConvergenceError: The iteration cap is exhausted.
    """
    net_pu = to_per_unit(net)
    net_pu.validate_structure()
    ids = [bus.id for bus in net_pu.buses]
    index = {bus_id: k for k, bus_id in enumerate(ids)}
    n_all = len(ids)

    y = np.zeros((n_all, n_all), dtype=complex)
    for br in net_pu.branches:
        a, b = index[br.from_bus], index[br.to_bus]
        admittance = 1.0 / br.z
        y[a, a] += admittance
        y[b, b] += admittance
        y[a, b] -= admittance
        y[b, a] -= admittance

    root = next(k for k, bus in enumerate(net_pu.buses) if bus.is_root)
    non_root = [k for k in range(n_all) if k != root]
    s = np.array([net_injection(net_pu.buses[k]) for k in non_root], dtype=complex)

    if not non_root:
        return np.array([v_ref], dtype=complex)

    y_ll = y[np.ix_(non_root, non_root)]
    y_l0 = y[non_root, root]
    factorisation = lu_factor(y_ll)

    v = np.full(len(non_root), v_ref, dtype=complex)
    for _ in range(max_iterations):
        injections = np.conj(s / v)
        v_solved = lu_solve(factorisation, injections - y_l0 * v_ref)
        v_next = (1.0 - damping) * v + damping * v_solved
        change = float(np.max(np.abs(v_next - v)))
        v = v_next
        if change < tolerance:
            full = np.empty(n_all, dtype=complex)
            full[root] = v_ref
            full[non_root] = v
            return full
    raise NoConvergenceError(
        f"reference solver did not reach {tolerance} in {max_iterations} iterations"
    )


def two_node_voltage(v0: complex, z: complex, s: complex) -> complex:
    """Closed-form receiving-end voltage of a single-branch network.

    The sweep fixed point V = V0 + Z conj(S/V) rearranges to
    V conj(V - V0) = conj(Z) S. In a frame rotated so the source is
    real this splits into a linear imaginary part and a quadratic real
    part; the root nearer the nominal voltage is returned.

    Raises:
        ValueError: The load exceeds what the branch can deliver (no
            real solution exists).
    """
    m = abs(v0)
    phase = v0 / m
    w = np.conj(z) * s
    imag = -w.imag / m
    discriminant = m * m - 4.0 * (imag * imag - w.real)
    if discriminant < 0:
        raise ValueError("no feasible high-voltage solution for this load")
    real = 0.5 * (m + np.sqrt(discriminant))
    return complex(real, imag) * phase
