"""Exception types shared across the package."""


class SymktError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatchError(SymktError, ValueError):
    """Operands do not agree in dimension or degree."""


class DegreeError(SymktError, ValueError):
    """Operation applied to a tensor of unsupported degree."""


class DegenerateRankError(SymktError, ValueError):
    """(dim, degree) pair for which a projection constant is singular."""


class TraceError(SymktError, ValueError):
    """Input required to be trace-free has a trace residual above tolerance."""


class DomainError(SymktError, ValueError):
    """Point outside the manifold's sampling domain, or trajectory left it."""


class VerificationError(SymktError, ValueError):
    """A constructor precondition check (e.g. inputs must be Killing) failed."""


class ConfigError(SymktError, ValueError):
    """Invalid CLI / suite configuration (unknown key, bad range, ...)."""
