"""Exception hierarchy shared by the solvers and the CLI.

Each class carries the process exit code the CLI reports for it.
"""


class ChiralFiberError(Exception):
    exit_code = 1


class DomainError(ChiralFiberError, ValueError):
    """Argument outside the domain of a function or solver."""

    exit_code = 3


class ConfigError(ChiralFiberError, ValueError):
    exit_code = 2


class SolverError(ChiralFiberError):
    exit_code = 3


class MultimodeError(SolverError):
    """The fiber supports more than the fundamental HE11 mode."""

    exit_code = 4


class NoRootError(SolverError):
    exit_code = 3


class ConvergenceError(ChiralFiberError):
    """A quadrature or mode sum failed to reach its tolerance."""

    exit_code = 5


class IntegrationError(ChiralFiberError):
    """Master-equation integration violated a state invariant."""

    exit_code = 6


class StructureWarning(UserWarning):
    """Density matrix lacks the X structure assumed by a fast formula."""
