"""Topology matrix T, branch impedance diagonal and driving matrix TRX.

T is the 0/1 branch-to-downstream-node matrix: entry (b, j) is 1 exactly
when branch b lies on the path from the root to node j. Under a layered
ordering it is unit upper triangular. TRX = T' D_Z T is the complex
driving-impedance matrix whose (i, j) entry is the total impedance of
the common root-path of nodes i and j.

For feeders up to ``DENSE_NODE_LIMIT`` nodes T is materialised as a
dense array; above that it stays implicit and all products are computed
by parent-pointer walks. Both paths are exercised by the same tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .ordering import RadialOrdering

DENSE_NODE_LIMIT = 1000


@dataclass(frozen=True)
class TopologyMatrix:
    """Branch-to-downstream-node incidence, dense or parent-implicit."""

    n: int
    parent: tuple[int, ...]
    dense: np.ndarray | None

    def aggregate_downstream(self, nodal: np.ndarray) -> np.ndarray:
        """T @ nodal: per branch, the sum of nodal values downstream of it."""
        if len(nodal) != self.n:
            raise DimensionMismatchError(
                f"expected vector of length {self.n}, got {len(nodal)}"
            )
        if self.dense is not None:
            return self.dense @ nodal
        # Children are always numbered after their parent branch, so a
        # single reverse pass accumulates every subtree sum.
        acc = np.array(nodal, dtype=complex)
        for b in range(self.n - 1, -1, -1):
            p = self.parent[b]
            if p > 0:
                acc[p - 1] += acc[b]
        return acc

    def accumulate_paths(self, per_branch: np.ndarray) -> np.ndarray:
        """T.T @ per_branch: per node, the sum of branch values on its root path."""
        if len(per_branch) != self.n:
            raise DimensionMismatchError(
                f"expected vector of length {self.n}, got {len(per_branch)}"
            )
        if self.dense is not None:
            return self.dense.T @ per_branch
        acc = np.array(per_branch, dtype=complex)
        for b in range(self.n):
            p = self.parent[b]
            if p > 0:
                acc[b] += acc[p - 1]
        return acc

    def as_array(self) -> np.ndarray:
        """The full 0/1 matrix (built on demand in implicit mode)."""
        if self.dense is not None:
            return self.dense
        return _dense_t(self.n, self.parent)


@dataclass(frozen=True)
class ImpedanceDiagonal:
    """Branch series impedances in branch order (diagonal of D_Z)."""

    n: int
    z: np.ndarray


@dataclass(frozen=True)
class DrivingMatrix:
    """TRX = T' D_Z T; complex-symmetric, no conjugation."""

    n: int
    trx: np.ndarray


def _dense_t(n: int, parent: tuple[int, ...]) -> np.ndarray:
    t = np.zeros((n, n))
    for j in range(n):
        node = j + 1
        while node != 0:
            t[node - 1, j] = 1.0
            node = parent[node - 1]
    return t


def build_t(ordering: RadialOrdering, dense: bool | None = None) -> TopologyMatrix:
    """Construct T from an ordering by walking parent links.

    ``dense`` forces materialisation on or off; by default networks up
    to ``DENSE_NODE_LIMIT`` nodes get a dense matrix.
    """
    if dense is None:
        dense = ordering.n <= DENSE_NODE_LIMIT
    matrix = _dense_t(ordering.n, ordering.parent) if dense else None
    return TopologyMatrix(n=ordering.n, parent=ordering.parent, dense=matrix)


def build_dz(ordering: RadialOrdering) -> ImpedanceDiagonal:
    """Branch impedance vector aligned with the layered branch order."""
    z = np.array([br.z for br in ordering.branch_order], dtype=complex)
    return ImpedanceDiagonal(n=ordering.n, z=z)


def build_trx(t: TopologyMatrix, dz: ImpedanceDiagonal) -> DrivingMatrix:
    """Compute TRX = T' D_Z T.

    Dense mode evaluates the triple product directly. In implicit mode
    the matrix is filled column by column from the parent links: node
    k's column equals its parent's column except for the diagonal entry,
    which grows by the impedance of branch k.

    Raises:
        DimensionMismatchError: Topology and impedance sizes disagree.
    """
    if t.n != dz.n:
        raise DimensionMismatchError(
            f"topology is {t.n}x{t.n} but impedance vector has length {dz.n}"
        )
    n = t.n
    if t.dense is not None:
        trx = (t.dense.T * dz.z) @ t.dense.astype(complex)
        return DrivingMatrix(n=n, trx=trx)
    trx = np.zeros((n, n), dtype=complex)
    for b in range(n):
        p = t.parent[b]
        if p > 0:
            trx[:b, b] = trx[:b, p - 1]
            trx[b, b] = trx[p - 1, p - 1] + dz.z[b]
        else:
            trx[b, b] = dz.z[b]
        trx[b, :b] = trx[:b, b]
    return DrivingMatrix(n=n, trx=trx)


def trx_from_paths(parent: tuple[int, ...], z: np.ndarray) -> np.ndarray:
    """Independent TRX oracle: literal common-root-path impedance sums.

    For every node pair, walks both root paths, intersects the branch
    sets and sums the shared impedances. Quadratic-times-depth and pure
    Python on purpose; used to cross-check :func:`build_trx`.
    """
    n = len(parent)

    def path(node: int) -> set[int]:
        branches = set()
        while node != 0:
            branches.add(node - 1)
            node = parent[node - 1]
        return branches

    paths = [path(k + 1) for k in range(n)]
    trx = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            trx[i, j] = sum(z[b] for b in paths[i] & paths[j])
    return trx
