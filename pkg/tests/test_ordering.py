from __future__ import annotations

import heapq
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from radialflow import (
    BranchRecord,
    BusRecord,
    CycleDetectedError,
    MultipleRootsError,
    NetworkInput,
    NoRootError,
    NotConnectedError,
    ValidationError,
    build_ordering,
)

import numpy as np

from conftest import make_feeder


def net_from_edges(edges, n, root=0) -> NetworkInput:
    buses = tuple(BusRecord(id=str(k), is_root=(k == root)) for k in range(n))
    branches = tuple(
        BranchRecord(str(a), str(b), 0.01, 0.02) for a, b in edges
    )
    return NetworkInput(buses=buses, branches=branches)


def edges_from_prufer(seq: list[int], n: int) -> list[tuple[int, int]]:
    """Standard Prüfer decode; every labelled tree on n nodes is reachable."""
    if n == 1:
        return []
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [k for k in range(n) if degree[k] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def assert_ordering_invariants(net: NetworkInput, ordering) -> None:
    n = ordering.n
    assert n == len(net.buses) - 1
    assert len(ordering.branch_order) == n
    assert len(ordering.parent) == n
    # branch b's receiving node carries internal index b + 1
    for b, br in enumerate(ordering.branch_order):
        assert ordering.node_index[br.to_bus] == b + 1
        assert ordering.node_index[br.from_bus] == ordering.parent[b]
        assert ordering.parent[b] < b + 1
    # every non-root node is received exactly once
    receivers = [br.to_bus for br in ordering.branch_order]
    assert sorted(receivers) == sorted(ordering.ids[1:])
    # layer-complete numbering: depths are sorted and layers partition the range
    depths = [ordering.depth(b + 1) for b in range(n)]
    assert depths == sorted(depths)
    flat = [pos for layer in ordering.layers for pos in layer]
    assert flat == list(range(n))
    for d, layer in enumerate(ordering.layers, start=1):
        assert all(depths[pos] == d for pos in layer)


class TestExamples:
    def test_golden_star(self, golden_net):
        ordering = build_ordering(golden_net)
        assert ordering.ids == ("0", "1", "2", "3")
        assert [(br.from_bus, br.to_bus) for br in ordering.branch_order] == [
            ("0", "1"),
            ("1", "2"),
            ("1", "3"),
        ]
        assert ordering.parent == (0, 1, 1)
        assert ordering.layers == (range(0, 1), range(1, 3))

    def test_single_branch(self):
        net = net_from_edges([(0, 1)], 2)
        ordering = build_ordering(net)
        assert ordering.n == 1
        assert ordering.layers == (range(0, 1),)

    def test_reversed_branch_is_reoriented(self):
        # chain 0-1-2-3 with the middle branch entered backwards
        net = net_from_edges([(0, 1), (2, 1), (2, 3)], 4)
        ordering = build_ordering(net)
        assert [(br.from_bus, br.to_bus) for br in ordering.branch_order] == [
            ("0", "1"),
            ("1", "2"),
            ("2", "3"),
        ]
        assert_ordering_invariants(net, ordering)

    def test_intra_layer_tiebreak_by_receiving_id(self):
        # both children of the root, entered in descending id order
        net = net_from_edges([(0, 2), (0, 1)], 3)
        ordering = build_ordering(net)
        assert ordering.ids == ("0", "1", "2")


class TestErrors:
    def test_no_root(self):
        net = NetworkInput(
            buses=(BusRecord(id="0"), BusRecord(id="1")),
            branches=(BranchRecord("0", "1", 0.1, 0.1),),
        )
        with pytest.raises(NoRootError):
            build_ordering(net)

    def test_multiple_roots(self):
        net = NetworkInput(
            buses=(BusRecord(id="0", is_root=True), BusRecord(id="1", is_root=True)),
            branches=(BranchRecord("0", "1", 0.1, 0.1),),
        )
        with pytest.raises(MultipleRootsError):
            build_ordering(net)

    def test_unknown_branch_endpoint(self):
        net = NetworkInput(
            buses=(BusRecord(id="0", is_root=True), BusRecord(id="1")),
            branches=(BranchRecord("0", "ghost", 0.1, 0.1),),
        )
        with pytest.raises(ValidationError, match="ghost"):
            build_ordering(net)

    def test_every_extra_edge_is_a_cycle(self):
        base = [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6), (5, 7)]
        n = 8
        build_ordering(net_from_edges(base, n))
        for u, v in itertools.combinations(range(n), 2):
            mutated = net_from_edges(base + [(u, v)], n)
            with pytest.raises(CycleDetectedError):
                build_ordering(mutated)

    def test_every_removal_disconnects(self):
        base = [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5), (5, 6), (5, 7)]
        n = 8
        for drop in range(len(base)):
            mutated = net_from_edges(base[:drop] + base[drop + 1 :], n)
            with pytest.raises(NotConnectedError):
                build_ordering(mutated)


class TestProperties:
    @settings(max_examples=50, deadline=None)
    @given(data=st.data())
    def test_prufer_trees_order_cleanly(self, data):
        n = data.draw(st.integers(min_value=2, max_value=500))
        seq = data.draw(
            st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2)
        )
        net = net_from_edges(edges_from_prufer(seq, n), n)
        ordering = build_ordering(net)
        assert_ordering_invariants(net, ordering)

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            net = make_feeder(rng, 60)
            first = build_ordering(net)
            second = build_ordering(net)
            assert first == second

    def test_random_feeders_satisfy_invariants(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            net = make_feeder(rng, int(rng.integers(2, 120)))
            assert_ordering_invariants(net, build_ordering(net))
