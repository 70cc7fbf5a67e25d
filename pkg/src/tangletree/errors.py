"""Exception hierarchy for tangletree.

Every failure mode that callers are expected to handle gets its own class;
anything raised as IntegrityError indicates a bug or a violated mathematical
guarantee, not bad input.
"""


class TangletreeError(Exception):
    """Base class for all package-specific errors."""


class InputError(TangletreeError):
    """Malformed or inconsistent input data (bad file, bad arguments)."""


class DomainError(TangletreeError):
    """Input is well-formed but outside the domain of the operation.

    Example: asking to refine around a node whose members lack the
    required witnesses, or running a construction on a system that is
    not submodular when submodularity is required.
    """


class UnsupportedOperationError(TangletreeError):
    """The universe or system does not support the requested operation."""


class ResourceCapError(TangletreeError):
    """An enumeration or search exceeded a configured size/time cap."""


class IntegrityError(TangletreeError):
    """An internal invariant that should be mathematically guaranteed failed.

    Reaching this is a bug in the implementation (or a false input that
    slipped past validation), never a legitimate runtime condition.
    """
