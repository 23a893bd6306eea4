"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class BimorphError(Exception):
    """Base class for every error raised by this package."""


# graphs
class GraphError(BimorphError):
    pass


class LoopEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class DanglingEndpoint(GraphError):
    pass


class UnknownVertex(GraphError, KeyError):
    pass


class ParseError(GraphError, ValueError):
    """Malformed serialized input; ``line`` and ``position`` are 1-based."""

    def __init__(self, message: str, line: int = 1, position: int = 1):
        super().__init__(f"{message} (line {line}, position {position})")
        self.line = line
        self.position = position


# gadgets
class InvalidSpec(BimorphError, ValueError):
    pass


class GenerationFailed(BimorphError):
    pass


# algebra
class AlgebraError(BimorphError, ValueError):
    pass


class NotAssociative(AlgebraError):
    def __init__(self, triple: tuple[int, int, int]):
        a, b, c = triple
        super().__init__(f"(ab)c != a(bc) for a={a}, b={b}, c={c}")
        self.triple = triple


class NoIdentity(AlgebraError):
    pass


class NotAGroup(AlgebraError):
    pass


class OrderBudgetExceeded(AlgebraError):
    pass


# construction
class ConstructionError(BimorphError, ValueError):
    pass


class GroupTooSmall(ConstructionError):
    pass


class GadgetCountMismatch(ConstructionError):
    pass


class GadgetNotRigid(ConstructionError):
    pass


class GadgetSizeTooSmall(ConstructionError):
    pass


class SubmonoidTooSmall(ConstructionError):
    pass


class SubmonoidNotInGroup(ConstructionError):
    pass


# engine
class BudgetExceeded(BimorphError):
    pass


class ClosureBudgetExceeded(BudgetExceeded):
    pass


# ladder
class InvalidRadius(BimorphError, ValueError):
    pass


class TargetTooSmall(BimorphError, ValueError):
    pass


# pipeline
class Mismatch(BimorphError):
    def __init__(self, field: str, expected=None, found=None):
        super().__init__(f"certificate field {field!r} does not reproduce")
        self.field = field
        self.expected = expected
        self.found = found
