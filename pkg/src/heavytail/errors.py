"""Exception hierarchy.

Everything that should terminate a CLI run with exit code 2 (a user or data
problem, as opposed to a bug) derives from ValidationError.
"""


class HeavytailError(Exception):
    """Base class for all package errors."""


class ValidationError(HeavytailError):
    """Invalid input, configuration, or data; maps to CLI exit code 2."""


class ConfigError(ValidationError):
    """Unresolvable or out-of-range configuration (e.g. bad k)."""


class DomainError(ValidationError):
    """Data unusable for the requested operation (degenerate or insufficient)."""


class ModeError(ValidationError):
    """Operation not defined for the SCM's coefficient mode."""


class CapacityError(ValidationError):
    """A resource guard tripped (combinatorial or memory limits)."""
