from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from radialflow import BranchRecord, BusRecord, NetworkInput

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

GOLDEN_Z = complex(0.0296, 0.0683)


def golden_network() -> NetworkInput:
    """The golden 4-node star of fixtures/paper_4bus.json: loads of 0.2 pu at nodes 2 and 3."""
    return NetworkInput(
        buses=(
            BusRecord(id="0", is_root=True),
            BusRecord(id="1"),
            BusRecord(id="2", p_dem=0.2),
            BusRecord(id="3", p_dem=0.2),
        ),
        branches=(
            BranchRecord("0", "1", GOLDEN_Z.real, GOLDEN_Z.imag),
            BranchRecord("1", "2", GOLDEN_Z.real, GOLDEN_Z.imag),
            BranchRecord("1", "3", GOLDEN_Z.real, GOLDEN_Z.imag),
        ),
    )


@pytest.fixture
def golden_net() -> NetworkInput:
    return golden_network()


def make_feeder(
    rng: np.random.Generator,
    n_buses: int,
    total_load: float = 0.5,
    dg_probability: float = 0.1,
) -> NetworkInput:
    """Random radial feeder with shuffled branch orientations.

    Tree shape is a random recursive tree; per-node demands are drawn in
    [0, 0.5] pu and rescaled so the feeder carries ``total_load`` in
    total (heavier would collapse a long random feeder). Branch r and x
    are drawn in [0.001, 0.1] pu. A few nodes get generation.
    """
    p = rng.uniform(0.0, 0.5, size=n_buses - 1)
    q = rng.uniform(0.0, 0.25, size=n_buses - 1)
    scale = total_load / max(p.sum(), total_load)
    p *= scale
    q *= scale

    buses = [BusRecord(id="0", is_root=True)]
    for k in range(1, n_buses):
        p_gen = q_gen = 0.0
        if rng.random() < dg_probability:
            p_gen = float(rng.uniform(0.0, 0.05))
            q_gen = float(rng.uniform(0.0, 0.02))
        buses.append(
            BusRecord(
                id=str(k),
                p_dem=float(p[k - 1]),
                q_dem=float(q[k - 1]),
                p_gen=p_gen,
                q_gen=q_gen,
            )
        )

    branches = []
    for k in range(1, n_buses):
        parent = int(rng.integers(0, k))
        ends = (str(parent), str(k))
        if rng.random() < 0.5:
            ends = ends[::-1]
        branches.append(
            BranchRecord(
                from_bus=ends[0],
                to_bus=ends[1],
                r=float(rng.uniform(0.001, 0.1)),
                x=float(rng.uniform(0.001, 0.1)),
            )
        )
    return NetworkInput(buses=tuple(buses), branches=tuple(branches))


def feeder_batch(seed: int, count: int, max_buses: int) -> list[NetworkInput]:
    """Deterministic batch of random feeders (bus count in [2, max_buses])."""
    rng = np.random.default_rng(seed)
    return [make_feeder(rng, int(rng.integers(2, max_buses + 1))) for _ in range(count)]
