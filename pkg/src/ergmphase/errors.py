"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: validation problems (bad input, size caps,
domain violations, unmet hypotheses) exit 2; ConsistencyError exits 3.
"""


class ErgmphaseError(Exception):
    """Base class for all errors raised by this package."""


class SizeCapError(ErgmphaseError):
    """A documented size cap was exceeded (motif too large, n too large, ...)."""


class DomainError(ErgmphaseError):
    """An argument lies outside the mathematical domain of the operation."""


class HypothesisError(ErgmphaseError):
    """A structural hypothesis is not met, e.g. chi(H2) < 3 where the
    multipartite ansatz requires at least 3."""


class ConsistencyError(ErgmphaseError):
    """An internal cross-check failed; results cannot be trusted."""
