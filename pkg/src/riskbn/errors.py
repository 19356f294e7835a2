"""Exception hierarchy shared by every riskbn module."""

from __future__ import annotations


class RiskBNError(Exception):
    """Base class. ``context`` carries structured details (node ids, indices)."""

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context

    def with_prefix(self, prefix: str) -> "RiskBNError":
        """Return a copy of this error with ``prefix`` prepended to the message."""
        err = type(self)(f"{prefix}: {self}", **self.context)
        err.__cause__ = self
        return err


# network validation
class NetworkError(RiskBNError):
    pass


class CycleDetected(NetworkError):
    pass


class UnknownParent(NetworkError):
    pass


class BadCptShape(NetworkError):
    pass


class UnnormalizedRow(NetworkError):
    pass


class DuplicateNodeId(NetworkError):
    pass


class InvalidNodeId(NetworkError):
    pass


class EmptyNetwork(NetworkError):
    pass


# queries
class QueryError(RiskBNError):
    pass


class UnknownNode(QueryError):
    pass


class IncompleteAssignment(QueryError):
    pass


class InvalidState(QueryError):
    pass


class ArityMismatch(QueryError):
    pass


class ZeroProbabilityEvidence(QueryError):
    pass


class EvidenceNotSupported(QueryError):
    pass


class TargetInEvidence(QueryError):
    pass


# threat model
class ThreatModelError(RiskBNError):
    pass


class BadStrideLetter(ThreatModelError):
    pass


class BadSegmentCount(ThreatModelError):
    pass


class NonNumericThreatNumber(ThreatModelError):
    pass


class BadDreadScore(ThreatModelError):
    pass


class TreeSyntaxError(ThreatModelError):
    pass


class UnresolvedChild(ThreatModelError):
    pass


class MultipleRoots(ThreatModelError):
    pass


class NoRoot(ThreatModelError):
    pass


class BadOverrideLength(ThreatModelError):
    pass


class BadOverrideValue(ThreatModelError):
    pass


# perturbation
class NotARoot(QueryError):
    pass


class NotIntermediate(QueryError):
    pass


class BadRowIndex(QueryError):
    pass


# files and rendering
class ModelIOError(RiskBNError):
    pass


class DocumentParseError(RiskBNError):
    pass


class UnsupportedFormat(RiskBNError):
    pass
