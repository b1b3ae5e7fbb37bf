from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from radialflow import (
    BranchRecord,
    BusRecord,
    DimensionMismatchError,
    NetworkInput,
    NoConvergenceError,
    SolveResult,
    SweepOptions,
    check_residuals,
    reference_solve,
    solve,
    two_node_voltage,
)

from conftest import make_feeder


def two_node_net(z: complex, s: complex) -> NetworkInput:
    return NetworkInput(
        buses=(
            BusRecord(id="0", is_root=True),
            BusRecord(
                id="1",
                p_gen=max(s.real, 0.0),
                q_gen=max(s.imag, 0.0),
                p_dem=max(-s.real, 0.0),
                q_dem=max(-s.imag, 0.0),
            ),
        ),
        branches=(BranchRecord("0", "1", z.real, z.imag),),
    )


class TestCheckResiduals:
    def test_converged_golden_solution(self, golden_net):
        result = solve(golden_net, SweepOptions(epsilon=1e-4))
        report = check_residuals(golden_net, result)
        assert report.max_kcl_residual < 1e-3
        assert report.max_kvl_residual < 1e-3
        assert report.power_mismatch < 1e-3
        assert report.kcl_per_node.shape == (3,)
        assert report.kvl_per_branch.shape == (3,)

    def test_perturbed_voltage_is_flagged(self, golden_net):
        result = solve(golden_net, SweepOptions(epsilon=1e-8))
        voltages = result.voltages.copy()
        voltages[2] += 0.01
        broken = dataclasses.replace(result, voltages=voltages)
        report = check_residuals(golden_net, broken)
        assert report.max_kvl_residual > 1e-3

    def test_zero_load_flat_solution_has_zero_residuals(self):
        net = NetworkInput(
            buses=(BusRecord(id="0", is_root=True), BusRecord(id="1"), BusRecord(id="2")),
            branches=(BranchRecord("0", "1", 0.05, 0.1), BranchRecord("1", "2", 0.05, 0.1)),
        )
        report = check_residuals(net, solve(net))
        assert report.max_kcl_residual == 0.0
        assert report.max_kvl_residual == 0.0
        assert report.power_mismatch == 0.0

    def test_blind_to_implementation(self):
        # hand-constructed exact solution of a 2-node network, assembled
        # from the closed form without running any solver
        z = complex(0.04, 0.09)
        s = complex(-0.3, -0.1)
        net = two_node_net(z, s)
        v = two_node_voltage(1.0 + 0j, z, s)
        j = (1.0 - v) / z
        result = SolveResult(
            node_ids=("0", "1"),
            voltages=np.array([1.0 + 0j, v]),
            branch_from=("0",),
            branch_to=("1",),
            branch_currents=np.array([j]),
            branch_losses=np.array([abs(j) ** 2 * z]),
            total_loss=abs(j) ** 2 * z,
            source_power=(1.0 + 0j) * np.conj(j),
            iterations=1,
            history=(0.0,),
        )
        report = check_residuals(net, result)
        assert report.max_kcl_residual < 1e-12
        assert report.max_kvl_residual < 1e-12
        assert report.power_mismatch < 1e-12

    def test_dimension_mismatch(self, golden_net):
        result = solve(golden_net)
        shrunk = dataclasses.replace(result, node_ids=result.node_ids[:2])
        with pytest.raises(DimensionMismatchError):
            check_residuals(golden_net, shrunk)


class TestReferenceSolve:
    def test_golden_network_matches_table(self, golden_net):
        v = reference_solve(golden_net, tolerance=1e-12)
        mags = np.abs(v)
        angles = np.degrees(np.angle(v))
        assert mags[1] == pytest.approx(0.987, abs=1e-3)
        assert angles[1] == pytest.approx(-1.59, abs=1e-2)
        for k in (2, 3):
            assert mags[k] == pytest.approx(0.981, abs=1e-3)
            assert angles[k] == pytest.approx(-2.40, abs=1e-2)

    def test_no_load_is_exact(self):
        net = NetworkInput(
            buses=(BusRecord(id="0", is_root=True), BusRecord(id="1")),
            branches=(BranchRecord("0", "1", 0.05, 0.1),),
        )
        v = reference_solve(net, tolerance=1e-12)
        assert np.array_equal(v, np.ones(2, dtype=complex))

    def test_agrees_with_sweep_on_random_feeder(self):
        rng = np.random.default_rng(53)
        net = make_feeder(rng, 50)
        sweep = solve(net, SweepOptions(epsilon=1e-10))
        reference = reference_solve(net, tolerance=1e-12)
        by_id = {bus.id: reference[k] for k, bus in enumerate(net.buses)}
        deviation = max(
            abs(sweep.voltages[k] - by_id[node_id])
            for k, node_id in enumerate(sweep.node_ids)
        )
        assert deviation < 1e-6

    def test_iteration_cap(self, golden_net):
        with pytest.raises(NoConvergenceError):
            reference_solve(golden_net, tolerance=1e-12, max_iterations=2)


class TestTwoNodeClosedForm:
    @pytest.mark.parametrize(
        "z, s",
        [
            (complex(0.0296, 0.0683), complex(-0.2, 0.0)),
            (complex(0.05, 0.12), complex(-0.4, -0.15)),
            (complex(0.08, -0.02), complex(-0.1, 0.05)),
            (complex(0.03, 0.06), complex(0.25, 0.1)),  # net generation
        ],
    )
    def test_matches_sweep(self, z, s):
        net = two_node_net(z, s)
        result = solve(net, SweepOptions(epsilon=1e-13, max_iterations=500))
        closed = two_node_voltage(1.0 + 0j, z, s)
        assert abs(result.voltages[1] - closed) < 1e-10

    def test_rotated_reference_frame(self):
        z = complex(0.05, 0.1)
        s = complex(-0.3, -0.1)
        v0 = 1.02 * np.exp(0.3j)
        net = two_node_net(z, s)
        result = solve(net, SweepOptions(epsilon=1e-13, max_iterations=500, v_ref=v0))
        assert abs(result.voltages[1] - two_node_voltage(v0, z, s)) < 1e-10

    def test_infeasible_load(self):
        with pytest.raises(ValueError):
            two_node_voltage(1.0 + 0j, complex(0.5, 1.0), complex(-5.0, 0.0))
