"""Exception hierarchy shared by the library and the CLI.

``exit_code`` is what the CLI returns when the exception escapes a
subcommand: 1 for validation problems, 2 for file/format problems, 3 for
internal inconsistencies that indicate a bug.
"""


class TopoforgeError(Exception):
    exit_code = 1


class InputError(TopoforgeError):
    """Invalid argument or precondition violation."""


class ConfigurationError(InputError):
    """Mutually incompatible settings (e.g. quadrature rule vs family)."""


class OrderOverflowError(InputError):
    """Polynomial order above the configured maximum."""


class DegenerateGridError(InputError):
    """Grid too small for the requested coordinate mapping."""


class GeometryError(InputError):
    """Phantom geometry does not fit inside the requested volume."""


class VolumeIOError(TopoforgeError):
    exit_code = 2


class PayloadLengthError(VolumeIOError):
    """Payload size does not match dims times element size."""


class FormatVersionError(VolumeIOError):
    """Unknown or unsupported volume format version."""


class SidecarError(VolumeIOError):
    """Missing, unreadable, or inconsistent sidecar metadata."""


class InternalInconsistencyError(TopoforgeError):
    """A computed invariant failed (e.g. negative loop count); a bug."""

    exit_code = 3


class DegenerateMaskWarning(UserWarning):
    """The sampled field was constant; the mask was set to 0.5 everywhere."""
