"""Exception hierarchy shared by the solver modules."""

from __future__ import annotations


class SsgError(Exception):
    """Base class for every error raised by ssgsolve."""


class ParseError(SsgError, ValueError):
    def __init__(self, message: str, *, line: int | None = None, position: int | None = None):
        self.message = message
        self.line = line
        self.position = position
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class InfeasibleSolution(SsgError):
    """A candidate item set violates the capacity or a graph constraint.

    ``reason`` is one of ``capacity``, ``digraph-constraint`` or
    ``weak-digraph-constraint``.  For the graph constraints ``witness`` is the
    smallest vertex that should have been chosen; for ``capacity`` it is the
    offending total.
    """

    def __init__(self, reason: str, witness: int):
        self.reason = reason
        self.witness = witness
        super().__init__(f"{reason} {witness}")


class VertexError(SsgError, KeyError):
    def __str__(self) -> str:
        return f"vertex out of range: {self.args[0]}"


class NotADagError(SsgError):
    def __init__(self, message: str = "not-a-dag"):
        super().__init__(message)


class NotDecomposableError(SsgError):
    def __init__(self, message: str = "not-decomposable"):
        super().__init__(message)


class NotInClassError(SsgError):
    """The digraph is outside the class a specialised solver requires."""


class TooLargeError(SsgError):
    pass
