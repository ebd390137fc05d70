"""Exception types shared by every module.

Each class maps to a distinct CLI exit code (see :mod:`boldplay.cli`).
"""


class BoldPlayError(Exception):
    """Base class for library errors."""


class RegimeError(BoldPlayError, ValueError):
    """Parameters fall outside the regime an operation is defined for."""


class SizeCapError(BoldPlayError, ValueError):
    """An instance exceeds a configured enumeration or support cap."""


class StructureError(BoldPlayError, ValueError):
    """Input has the wrong combinatorial structure (e.g. not an up-set)."""
