"""Exception hierarchy shared by the library and the command line."""


class TwistinvError(Exception):
    exit_code = 1


class SystemSpecError(TwistinvError, ValueError):
    """Malformed or invalid system-spec document (or automorphism)."""

    exit_code = 2


class CapExceededError(TwistinvError):
    """Enumeration hit the element or root cap: group infinite or too large."""

    exit_code = 3


class InternalConsistencyError(TwistinvError, AssertionError):
    """A structural assertion failed. Never expected on valid input."""

    exit_code = 4


class VerificationFailure(TwistinvError):
    exit_code = 5
