"""Exception types shared across the package."""


class ChancapError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ChancapError, ValueError):
    """A parameter lies outside its documented domain."""


class NonHermitian(ChancapError):
    """Matrix fails the Hermitian symmetry tolerance."""


class DimensionTooLarge(ChancapError):
    """Dense routines here are limited to dimension 16."""


class NotAState(ChancapError):
    """Matrix is not a valid density operator (trace / positivity / symmetry)."""


class NotADistribution(ChancapError):
    """Vector is not a valid probability distribution."""


class ShapeMismatch(ChancapError):
    """Operands have incompatible shapes or tensor factorizations."""


class PreconditionViolated(ChancapError):
    """A caller-asserted precondition failed a numerical spot check."""
