"""Exception types shared across the package."""

from __future__ import annotations


class PlanarMCFError(Exception):
    """Base class for all package errors."""


class InstanceFormatError(PlanarMCFError):
    """Raised when an instance or solution file cannot be parsed.

    ``location`` is a JSON-path-like string pointing at the offending field,
    e.g. ``"arcs[3].tail"``.
    """

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")


class NormalizeError(PlanarMCFError):
    """Base class for structured normalization rejections."""


class BadEmbeddingError(NormalizeError):
    def __init__(self, violation):
        self.violation = violation
        super().__init__(f"invalid embedding: {violation}")


class DisconnectedError(NormalizeError):
    def __init__(self, detail: str = ""):
        super().__init__(f"underlying graph is not connected{': ' + detail if detail else ''}")


class NotAcyclicError(NormalizeError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"digraph contains a cycle through vertices {self.cycle}")


class NotEulerianError(NormalizeError):
    def __init__(self, vertex, imbalance):
        self.vertex = vertex
        self.imbalance = imbalance
        super().__init__(f"capacity+request balance fails at vertex {vertex} (imbalance {imbalance})")


class WalkError(PlanarMCFError):
    """Raised when a closed walk cannot be built from the given paths."""


class MoreThanTwoComponentsError(PlanarMCFError):
    """A closed walk failed to separate the sphere into exactly two parts.

    This signals a self-crossing walk, which is a caller bug.
    """


class InconsistentIncidenceError(PlanarMCFError):
    """Faces incident to an off-walk vertex disagree about its side."""


class DestinationOnWalkError(PlanarMCFError):
    """The destination handed to the side test lies on the walk itself."""


class PreconditionViolatedError(PlanarMCFError):
    """An operation's structural precondition does not hold for the input."""


class BudgetExceededError(PlanarMCFError):
    """The brute-force search hit its node-expansion budget; result unknown."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"search budget of {budget} node expansions exhausted")


class GenerationError(PlanarMCFError):
    """A generator could not produce a valid instance for the parameters."""
