"""Exception types shared across the package."""


class LinkhomError(Exception):
    """Base class for all library errors."""


class DiagramError(LinkhomError):
    """Malformed or unusable diagram input."""


class UnknownBuiltinError(DiagramError):
    """Requested builtin diagram name is not in the catalog."""


class ArcNotFoundError(DiagramError):
    """Arc id not present in the diagram."""


class RegimeError(LinkhomError):
    """Family parameters outside the analyzed regime."""


class RingMismatchError(LinkhomError):
    """Operands live over incompatible coefficient rings."""


class TheoryError(LinkhomError):
    """Operation is not defined for the requested homology theory."""


class ResourceCapError(LinkhomError):
    """Crossing count exceeds the configured cap."""


class NestingUndeterminedError(LinkhomError):
    """Nesting parities cannot be determined: split Seifert graph and no braid data."""


class NotACycleError(LinkhomError):
    """Chain element is not a cycle."""


class TrivialClassError(LinkhomError):
    """Homology class is zero where a nonzero class is required."""


class ZeroElementError(LinkhomError):
    """Operation undefined on the zero element."""


class ParseError(LinkhomError):
    """Text input could not be parsed."""


class InternalCheckError(LinkhomError):
    """A theorem-backed consistency check failed; this indicates a bug."""
