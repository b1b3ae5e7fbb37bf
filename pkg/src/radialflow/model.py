"""Domain types for buses, branches and per-unit normalisation.

All types are immutable value objects and can be shared freely between
threads. Powers are kept as separate generated/demanded fields so that
distributed generation stays auditable in reports; the solver works on
the net injection (p_gen - p_dem) + j(q_gen - q_dem).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    MissingBasesError,
    MultipleRootsError,
    NoRootError,
    ValidationError,
)


class Units(Enum):
    """Unit system of a network description."""

    PER_UNIT = "pu"
    PHYSICAL = "physical"


@dataclass(frozen=True)
class BusRecord:
    """A network node with its generated and demanded powers.

    Attributes:
        id: External identifier, treated as an opaque string.
        p_gen: Real power generated [pu or MW].
        q_gen: Reactive power generated [pu or MVAr].
        p_dem: Real power demanded [pu or MW].
        q_dem: Reactive power demanded [pu or MVAr].
        is_root: True for the substation (slack) bus whose voltage is fixed.
    """

    id: str
    p_gen: float = 0.0
    q_gen: float = 0.0
    p_dem: float = 0.0
    q_dem: float = 0.0
    is_root: bool = False

    def __post_init__(self) -> None:
        for name in ("p_gen", "q_gen", "p_dem", "q_dem"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"bus {self.id!r}: {name} is not finite")


@dataclass(frozen=True)
class BranchRecord:
    """A series line or transformer segment between two buses.

    Negative reactance (a capacitive series element) is accepted;
    negative resistance and zero impedance are rejected outright,
    because a zero-impedance branch has no defined voltage drop and
    merging its end nodes would silently rewrite the topology.

    Attributes:
        from_bus: Sending-node external id.
        to_bus: Receiving-node external id.
        r: Series resistance [pu or ohm], >= 0.
        x: Series reactance [pu or ohm].
    """

    from_bus: str
    to_bus: str
    r: float
    x: float

    def __post_init__(self) -> None:
        if self.from_bus == self.to_bus:
            raise ValidationError(
                f"branch {self.from_bus!r}-{self.to_bus!r}: endpoints must differ"
            )
        if not (math.isfinite(self.r) and math.isfinite(self.x)):
            raise ValidationError(
                f"branch {self.from_bus!r}-{self.to_bus!r}: impedance is not finite"
            )
        if self.r < 0:
            raise ValidationError(
                f"branch {self.from_bus!r}-{self.to_bus!r}: negative resistance"
            )
        if self.r == 0 and self.x == 0:
            raise ValidationError(
                f"branch {self.from_bus!r}-{self.to_bus!r}: zero impedance"
            )

    @property
    def z(self) -> complex:
        """Series impedance r + jx."""
        return complex(self.r, self.x)


@dataclass(frozen=True)
class PerUnitBases:
    """Normalisation bases for a physical-unit network.

    Attributes:
        s_base: Apparent-power base [MVA].
        v_base: Line voltage base [kV].
    """

    s_base: float
    v_base: float

    def __post_init__(self) -> None:
        if not (self.s_base > 0 and self.v_base > 0):
            raise ValidationError("per-unit bases must be positive")

    @property
    def z_base(self) -> float:
        """Impedance base v_base**2 / s_base [ohm]."""
        return self.v_base**2 / self.s_base


@dataclass(frozen=True)
class NetworkInput:
    """Raw node-branch description of a distribution network.

    Buses and branches are stored in input order; structural checks
    beyond field validity (unique ids, single root, radiality) are
    performed when an ordering is built.
    """

    buses: tuple[BusRecord, ...]
    branches: tuple[BranchRecord, ...]
    bases: PerUnitBases | None = None
    units: Units = Units.PER_UNIT

    def __post_init__(self) -> None:
        object.__setattr__(self, "buses", tuple(self.buses))
        object.__setattr__(self, "branches", tuple(self.branches))

    def validate_structure(self) -> None:
        """Check id uniqueness and root count.

        Raises:
            ValidationError: A bus id occurs more than once.
            NoRootError / MultipleRootsError: Root bus count is not one.
        """
        seen: set[str] = set()
        for bus in self.buses:
            if bus.id in seen:
                raise ValidationError(f"duplicate bus id {bus.id!r}")
            seen.add(bus.id)
        roots = [bus.id for bus in self.buses if bus.is_root]
        if not roots:
            raise NoRootError("no bus is marked as root")
        if len(roots) > 1:
            raise MultipleRootsError(f"multiple root buses: {roots}")

    def bus_by_id(self, bus_id: str) -> BusRecord:
        for bus in self.buses:
            if bus.id == bus_id:
                return bus
        raise KeyError(bus_id)


def net_injection(bus: BusRecord) -> complex:
    """Net complex power injected at a bus: generation minus demand.

    A pure load yields a negative real part.
    """
    return complex(bus.p_gen - bus.p_dem, bus.q_gen - bus.q_dem)


def to_per_unit(net: NetworkInput) -> NetworkInput:
    """Normalise a network to per-unit quantities.

    Powers are divided by s_base, impedances by z_base = v_base**2/s_base.
    Per-unit input is returned unchanged (idempotent).

    Raises:
        MissingBasesError: ``units`` is physical but no bases are given.
    """
    if net.units is Units.PER_UNIT:
        return net
    if net.bases is None:
        raise MissingBasesError("physical-unit network without per-unit bases")
    s_base = net.bases.s_base
    z_base = net.bases.z_base
    buses = tuple(
        replace(
            bus,
            p_gen=bus.p_gen / s_base,
            q_gen=bus.q_gen / s_base,
            p_dem=bus.p_dem / s_base,
            q_dem=bus.q_dem / s_base,
        )
        for bus in net.buses
    )
    branches = tuple(
        replace(br, r=br.r / z_base, x=br.x / z_base) for br in net.branches
    )
    return NetworkInput(buses=buses, branches=branches, bases=net.bases, units=Units.PER_UNIT)
