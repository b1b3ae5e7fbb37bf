"""Radial-tree validation and layer-by-layer branch/node numbering.

Nodes get internal indices 0..n with the root at 0, assigned breadth
first so that every branch is numbered after its parent branch and all
branches of one BFS layer precede those of the next. Under this
numbering the branch-to-downstream-node matrix is upper triangular.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import CycleDetectedError, NotConnectedError, ValidationError
from .model import BranchRecord, NetworkInput


@dataclass(frozen=True)
class RadialOrdering:
    """A validated tree with layered branch numbering.

    Branch ``branch_order[b]`` is oriented root-ward (``from_bus`` is the
    node nearer the root) and its receiving node has internal index
    ``b + 1``; ``parent[b]`` is the internal index of its sending node,
    always strictly less than ``b + 1``.

    Attributes:
        n: Node count excluding the root.
        ids: External id per internal index; ``ids[0]`` is the root.
        node_index: Inverse mapping, external id -> internal index.
        branch_order: Re-oriented branches in layered order.
        parent: Sending-node internal index per branch.
        layers: Ranges of positions into ``branch_order``, one per BFS depth.
    """

    n: int
    ids: tuple[str, ...]
    node_index: dict[str, int]
    branch_order: tuple[BranchRecord, ...]
    parent: tuple[int, ...]
    layers: tuple[range, ...]

    def depth(self, node: int) -> int:
        """Number of branches on the path from the root to ``node``."""
        count = 0
        while node != 0:
            count += 1
            node = self.parent[node - 1]
        return count


def build_ordering(net: NetworkInput) -> RadialOrdering:
    """Traverse the network breadth first from the root and number it.

    Branch orientation in the input is not trusted: each branch is
    re-oriented so its ``from_bus`` is the node nearer the root. Within
    a layer, branches are ordered by ascending external id of the
    receiving bus, which makes the result deterministic.

    Raises:
        NoRootError / MultipleRootsError: Root count is not exactly one.
        ValidationError: Duplicate bus ids.
        CycleDetectedError: Some bus is reachable along two paths.
        NotConnectedError: Some bus is unreachable from the root.
    """
    net.validate_structure()
    root = next(bus.id for bus in net.buses if bus.is_root)

    adjacency: dict[str, list[tuple[str, int]]] = {bus.id: [] for bus in net.buses}
    for idx, br in enumerate(net.branches):
        for end in (br.from_bus, br.to_bus):
            if end not in adjacency:
                raise ValidationError(
                    f"branch {br.from_bus!r}-{br.to_bus!r} references unknown bus {end!r}"
                )
        adjacency[br.from_bus].append((br.to_bus, idx))
        adjacency[br.to_bus].append((br.from_bus, idx))

    ids: list[str] = [root]
    node_index: dict[str, int] = {root: 0}
    branch_order: list[BranchRecord] = []
    parent: list[int] = []
    layers: list[range] = []
    used = [False] * len(net.branches)

    frontier = [root]
    while frontier:
        # Collect every unused edge leaving the current layer, then number
        # the receiving buses in ascending-id order.
        discovered: list[tuple[str, str, int]] = []
        for sender in frontier:
            for neighbor, idx in adjacency[sender]:
                if used[idx]:
                    continue
                used[idx] = True
                if neighbor in node_index:
                    raise CycleDetectedError(
                        f"bus {neighbor!r} is reachable along more than one path"
                    )
                discovered.append((neighbor, sender, idx))
        discovered.sort(key=lambda item: item[0])

        start = len(branch_order)
        next_frontier: list[str] = []
        for receiver, sender, idx in discovered:
            if receiver in node_index:
                raise CycleDetectedError(
                    f"bus {receiver!r} is reachable along more than one path"
                )
            node_index[receiver] = len(ids)
            ids.append(receiver)
            br = net.branches[idx]
            if br.from_bus != sender:
                br = replace(br, from_bus=br.to_bus, to_bus=br.from_bus)
            branch_order.append(br)
            parent.append(node_index[sender])
            next_frontier.append(receiver)
        if next_frontier:
            layers.append(range(start, len(branch_order)))
        frontier = next_frontier

    if len(ids) != len(net.buses):
        missing = sorted(bus.id for bus in net.buses if bus.id not in node_index)
        raise NotConnectedError(f"buses unreachable from root: {missing}")
    if not all(used):
        # Every bus was reached, so a leftover edge can only close a loop.
        leftover = next(net.branches[i] for i, u in enumerate(used) if not u)
        raise CycleDetectedError(
            f"branch {leftover.from_bus!r}-{leftover.to_bus!r} closes a loop"
        )

    return RadialOrdering(
        n=len(branch_order),
        ids=tuple(ids),
        node_index=node_index,
        branch_order=tuple(branch_order),
        parent=tuple(parent),
        layers=tuple(layers),
    )
