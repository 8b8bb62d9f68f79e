"""Exception hierarchy shared by all modules.

The CLI maps each class to a fixed exit code, so library code raises these
instead of bare ``ValueError`` wherever the distinction matters.
"""


class SylowLieError(Exception):
    exit_code = 1


class UsageError(SylowLieError, ValueError):
    """Caller passed arguments that do not fit together."""

    exit_code = 2


class ConfigurationError(SylowLieError, ValueError):
    """Unsupported field size, family, or modulus."""

    exit_code = 2


class DomainError(SylowLieError, ValueError):
    """Value outside the domain of an operation (e.g. inverting zero)."""

    exit_code = 2


class ResourceError(SylowLieError, RuntimeError):
    """An enumeration or search cap was exceeded."""

    exit_code = 3
