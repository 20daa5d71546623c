"""
Error types shared by every toolkit module.
Purpose: One named exception per contract violation so the CLI can report the failing error by name.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors"""


class DimensionError(ToolkitError):
    """Operand shapes are inconsistent"""


class EmptyInputError(ToolkitError):
    """An operation needs at least one row, frame or sample"""


class ZeroNormError(ToolkitError):
    """A vector with zero norm was used where a direction is required"""


class EmptyIndexError(ToolkitError):
    pass


class DuplicateIdError(ToolkitError):
    pass


class InvalidKError(ToolkitError):
    pass


class IoError(ToolkitError):
    """Reading or writing an artifact failed at the OS level"""


class FormatError(ToolkitError):
    """An artifact on disk does not follow its documented layout"""


class ValidationError(ToolkitError):
    """Decoded data violates a type invariant"""


class UnsupportedChannelsError(ToolkitError):
    pass


class UnsupportedFormatError(ToolkitError):
    pass


class ParameterError(ToolkitError):
    """Analysis or model parameters are out of their valid range"""
