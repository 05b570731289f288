"""Exception hierarchy.

:class:`InputError` marks bad user input (CLI exit code 1);
:class:`ConsistencyError` marks a failed internal invariant or convention
check (CLI exit code 2) and must never be swallowed.
"""


class QPairError(Exception):
    pass


class InputError(QPairError, ValueError):
    pass


class ConsistencyError(QPairError, RuntimeError):
    pass
