"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class LPPermError(Exception):
    """Base class for every library error; the CLI reports these as JSON."""


class ParseError(LPPermError, ValueError):
    """Malformed input document or literal."""


class InvalidSizeError(LPPermError, ValueError):
    """A size parameter is out of range for the requested construction."""


class DimensionMismatchError(LPPermError, ValueError):
    """Operands have incompatible shapes."""


class NotQuasiHomogeneousError(LPPermError, ValueError):
    """A constraint set lacks a row/column sum or has an inhomogeneous extra constraint."""


class NotDoublyStochasticError(LPPermError, ValueError):
    """A constraint set does not imply double stochasticity."""


class BudgetExceededError(LPPermError, RuntimeError):
    """A combinatorial or brute-force budget would be exceeded."""


class MembershipError(LPPermError, ValueError):
    """A permutation is not an element of the requested family."""


class DecodeFailure(LPPermError, ValueError):
    """A matrix does not have the block structure required for message decoding."""


class MessageRangeError(LPPermError, ValueError):
    """A message index lies outside the code's range."""


class EmptyPolytopeError(LPPermError, ValueError):
    """An operation needing a feasible point was given an empty polytope."""
