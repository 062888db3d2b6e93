"""Exception taxonomy shared across the package.

Every error raised on a domain-level failure derives from SetseqError so the
CLI can map it to a stable name on stderr (the class name is the contract).
"""

from __future__ import annotations

__all__ = [
    "SetseqError",
    "NotFullRank",
    "NoSuchSubset",
    "BudgetExhausted",
    "Infeasible",
    "CaseNotApplicable",
    "PreconditionViolated",
    "NotCovered",
    "PairingNotCovered",
    "InternalSearchFailed",
    "PlanSizeMismatch",
    "TargetSumNonzero",
    "NonCanonical",
    "OutOfRange",
    "NotOddDegree",
    "NotPowerOfTwo",
    "TooFewVertices",
    "NotLeaf",
    "TooSmall",
    "InvalidPath",
    "Unsolvable",
    "DegenerateSwap",
]


class SetseqError(Exception):
    """Base class for all domain errors raised by this package."""


class NotFullRank(SetseqError):
    """A basis expected to span the whole space does not."""


class NoSuchSubset(SetseqError):
    """No subset satisfying the requested size/parity/XOR constraints exists."""


class BudgetExhausted(SetseqError):
    """A bounded search ran out of its time or node budget."""


class Infeasible(SetseqError):
    """Exhaustive search proved that no solution exists."""


class CaseNotApplicable(SetseqError):
    """A specialised solver was called outside its hypothesis."""


class PreconditionViolated(SetseqError):
    """Structured input failed a documented precondition."""


class NotCovered(SetseqError):
    """The instance falls outside every implemented constructive case."""


class PairingNotCovered(NotCovered):
    """A construction needed a pair partition that no solver case covers."""


class InternalSearchFailed(SetseqError):
    """A step the underlying theory guarantees to succeed did not.

    Raising this (rather than asserting) keeps the failure diagnosable; it
    indicates a bug or a genuinely new counterexample, never bad user input.
    """


class PlanSizeMismatch(SetseqError):
    """Pendant counts do not sum to the required power of two."""


class TargetSumNonzero(SetseqError):
    """The multiset of pairing targets has nonzero XOR."""


class NonCanonical(SetseqError):
    """A caterpillar degree list is not in canonical form."""


class OutOfRange(SetseqError):
    """A parameter lies outside the supported range."""


class NotOddDegree(SetseqError):
    """The construction requires every vertex degree to be odd."""


class NotPowerOfTwo(SetseqError):
    """The construction requires the vertex count to be a power of two."""


class TooFewVertices(SetseqError):
    """The tree is too small for the requested construction."""


class NotLeaf(SetseqError):
    """A designated attachment vertex must have degree 1."""


class TooSmall(SetseqError):
    """The base tree is below the minimum size for the construction."""


class InvalidPath(SetseqError):
    """A label sequence is not a valid alternating path chain."""


class Unsolvable(SetseqError):
    """The prefix chain constraints admit no assignment."""


class DegenerateSwap(SetseqError):
    """Internal: no pair swap avoids a degenerate reduced instance."""
