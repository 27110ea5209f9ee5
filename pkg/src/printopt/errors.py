"""Exception types shared across the package."""


class PrintOptError(Exception):
    """Base class for all package errors."""


class STLParseError(PrintOptError):
    """Malformed STL payload. Carries the byte offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class EmptyMeshError(PrintOptError):
    """No usable (non-degenerate) triangles."""


class ResolutionError(PrintOptError):
    """Voxel grid would exceed the configured cell cap."""


class GeometryError(PrintOptError):
    """Degenerate geometry where a non-empty result is required."""


class DimensionError(PrintOptError):
    """A vector had a different length than the configuration encoding."""


class ConfigDocumentError(PrintOptError):
    """An external configuration document failed validation.

    ``violations`` lists one message per offending field.
    """

    def __init__(self, violations: list[str]):
        super().__init__("invalid configuration document: " + "; ".join(violations))
        self.violations = violations


class ActionCompileError(PrintOptError):
    """A corrective action referenced an unknown action id or parameter."""


class SurrogateFitError(PrintOptError):
    """Kernel matrix stayed singular through the whole jitter escalation."""


class TransportError(PrintOptError):
    """Network-level failure while talking to a remote guidance provider."""


class AlignmentError(PrintOptError):
    """Result sets do not share the same objects/seeds/lengths."""
