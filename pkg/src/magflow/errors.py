"""Exception types shared by all modules."""


class MagflowError(Exception):
    """Base class for all package errors."""


class DomainError(MagflowError, ValueError):
    """An argument lies outside the domain of an operation."""


class BoundaryError(DomainError):
    """A point is at (or numerically too close to) the ideal boundary |z| = 1."""


class OutOfRegimeError(MagflowError, ValueError):
    """The requested energy level does not support the operation (e.g. E >= 1/2)."""


class NumericalError(MagflowError, ArithmeticError):
    """A numeric degeneracy: singular Jacobian, zero speed, vanishing denominator."""


class NotFoundError(MagflowError, LookupError):
    """A search (root finding, first return) produced no result."""


class InsufficientDataError(MagflowError, ValueError):
    """A statistical estimate was requested from too few samples."""
