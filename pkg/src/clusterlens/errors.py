"""Exception types; the CLI maps each to an exit code."""


class InputError(ValueError):
    """Malformed or mathematically invalid input (exit code 1)."""


class SeparabilityError(InputError):
    """The polynomial has a repeated root (discriminant is zero)."""


class ResourceLimitError(RuntimeError):
    """A configured size limit would be exceeded (exit code 2)."""


class InvariantError(AssertionError):
    """An internal consistency check failed (exit code 3).

    Raised where the mathematics guarantees a property (unique most-edges
    maximiser, strictly decreasing depths, exact symmetric reduction), so a
    violation always means a bug.
    """


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, InputError):
        return 1
    if isinstance(exc, ResourceLimitError):
        return 2
    if isinstance(exc, InvariantError):
        return 3
    raise exc
