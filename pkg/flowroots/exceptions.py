"""
Exception hierarchy for the flowroots app.

Every error raised by the library derives from ``FlowRootsError`` so the
command-line front end can turn it into a clean exit status.
"""

from typing import Optional


class FlowRootsError(Exception):
    """Base class for all flowroots errors"""
    pass


# Polynomial arithmetic

class PolynomialError(FlowRootsError):
    """Errors raised by exact polynomial operations"""
    pass


class NonDivisible(PolynomialError):
    """Raised by exact division when the divisor leaves a remainder"""

    def __init__(self, remainder, message: Optional[str] = None):
        self.remainder = remainder
        super().__init__(message or f"division leaves remainder {remainder}")


class NotMonic(PolynomialError):
    """Leading coefficient is not +1 or -1"""
    pass


class PreconditionViolated(PolynomialError):
    """Root hypotheses of a coefficient bound do not hold"""
    pass


# Graphs

class GraphError(FlowRootsError):
    """Errors raised by multigraph operations"""
    pass


class MalformedInput(GraphError):
    """Input bytes do not follow the declared graph format"""

    def __init__(self, message: str, offset: int, line: Optional[int] = None):
        self.reason = message
        self.offset = offset
        self.line = line
        where = f"byte {offset}" if line is None else f"line {line}, byte {offset}"
        super().__init__(f"{message} (at {where})")


class UnknownEdge(GraphError):
    """Edge id is not present in the graph"""

    def __init__(self, edge_id: int):
        self.edge_id = edge_id
        super().__init__(f"unknown edge id {edge_id}")


class Disconnected(GraphError):
    """Operation requires a connected graph"""
    pass


class HasBridge(GraphError):
    """Operation requires a bridgeless graph"""
    pass


class NotThreeEdgeConnected(GraphError):
    """Operation requires a 3-edge-connected graph"""
    pass


# Flow and chromatic engines

class FlowCalcError(FlowRootsError):
    """Errors raised by the polynomial engines"""
    pass


class BudgetExceeded(FlowCalcError):
    """An enumeration would exceed its configured budget"""
    pass


class NotAProperCutset(FlowCalcError):
    """The given edge set is not a proper minimal 3-cutset"""
    pass


class InternalConsistencyError(FlowCalcError):
    """Two computations that must agree did not"""
    pass


# Planarity and generators

class PlanarError(FlowRootsError):
    """Errors raised by embedding and generator operations"""
    pass


class DisconnectedInput(PlanarError):
    """Dual graphs are only defined for connected embeddings"""
    pass


class InvalidScript(PlanarError):
    """A generator build script references a missing edge or face"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


# Matroids

class MatroidError(FlowRootsError):
    """Errors raised by matroid operations"""
    pass


class NotAFlat(MatroidError):
    """The given set is not closed"""
    pass


class GlueNotPresent(MatroidError):
    """Glue elements of a parallel connection are missing or malformed"""
    pass


class GlueNotModular(MatroidError):
    """Glue flat is modular in neither operand"""
    pass


class HypothesisNotMet(MatroidError):
    """A lemma hypothesis fails; recorded by the bound checkers"""
    pass
