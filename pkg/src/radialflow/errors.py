"""Exception hierarchy for network validation, solving and file ingestion."""

from __future__ import annotations


class RadialFlowError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RadialFlowError):
    """The network data violates a structural or value invariant."""


class NoRootError(ValidationError):
    """No bus is marked as the root (substation) bus."""


class MultipleRootsError(ValidationError):
    """More than one bus is marked as the root bus."""


class NotConnectedError(ValidationError):
    """At least one bus is unreachable from the root."""


class CycleDetectedError(ValidationError):
    """The branch set contains a loop; the network is not radial."""


class MissingBasesError(ValidationError):
    """Physical-unit input lacks the power/voltage bases needed for scaling."""


class DimensionMismatchError(RadialFlowError):
    """Vector or matrix operands have incompatible sizes."""


class SolverError(RadialFlowError):
    """Base class for failures of an iterative solve."""


class VoltageCollapseError(SolverError):
    """A node voltage magnitude fell below the guard threshold mid-iteration."""


class MaxIterationsError(SolverError):
    """The sweep did not converge within the iteration budget.

    Carries the last iterate (``state``) and the per-iteration delta
    record (``history``) for post-mortem inspection.
    """

    def __init__(self, message: str, state=None, history=()):
        super().__init__(message)
        self.state = state
        self.history = tuple(history)


class NoConvergenceError(SolverError):
    """The reference (admittance-based) solver exhausted its iteration cap."""


class InputError(RadialFlowError):
    """Base class for file ingestion failures."""


class ParseError(InputError):
    """The input file is not syntactically valid (bad JSON, bad CSV cell)."""


class SchemaError(InputError):
    """The input file parses but is missing fields or references unknown ids."""
