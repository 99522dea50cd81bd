"""Exception hierarchy shared by every evaluator and experiment driver."""


class ZetaLabError(Exception):
    """Base class for all package errors."""


class PoleError(ZetaLabError, ZeroDivisionError):
    """Evaluation requested exactly at a pole."""


class DomainError(ZetaLabError, ValueError):
    """An argument lies outside the documented domain."""


class UnsupportedRegion(ZetaLabError, ValueError):
    """The member has no available continuation at the requested point."""


class ConvergenceError(ZetaLabError, ArithmeticError):
    """No admissible truncation exists below the hard cap."""


class OutOfMaterializedRange(ZetaLabError, IndexError):
    """A torus coordinate beyond the materialized bounds was requested."""


class DegenerateCharacter(ZetaLabError, ArithmeticError):
    """A nontrivial character has phase congruent to 0 mod 2*pi."""


class NonAdmissibleTarget(ZetaLabError, ValueError):
    """Target is outside the support allowed for its slot."""


class LengthMismatch(ZetaLabError, ValueError):
    pass


class InvariantError(ZetaLabError, ValueError):
    """An experiment configuration violates a structural invariant."""
