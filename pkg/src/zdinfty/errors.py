"""Exception types shared across the package."""


class ZdinftyError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ZdinftyError):
    """Vector or matrix dimensions are inconsistent."""


class NotFullRank(ZdinftyError):
    """Generator directions do not span the ambient space."""


class FieldMismatch(ZdinftyError):
    """Operands live over different base fields."""


class InconsistentTypes(ZdinftyError):
    """Localization data of a presentation does not respect its relations."""


class ComposabilityError(ZdinftyError):
    """Attempted to compose maps whose endpoints do not match."""


class Degree2NotSupported(ZdinftyError):
    """Yoneda product of two degree-one classes was requested."""


class ShapeMismatch(ZdinftyError):
    """A map or class does not have the endpoints an operation requires."""


class NotIndecomposable(ZdinftyError):
    """Operation requires an indecomposable object."""


class DecompositionFailure(ZdinftyError):
    """The splitting search exhausted its budget; indicates a bug."""


class UnrecognizedShape(ZdinftyError):
    """An indecomposable does not match any classified label."""


class WindowTooSmall(ZdinftyError):
    """Requested quiver window cannot contain a full mesh."""


class WitnessNotFound(ZdinftyError):
    """No Ext non-vanishing witness within the search bound."""


class MixedIndex(ZdinftyError):
    """Ring elements with different singularity indices were combined."""


class NotLatticeMorphism(ZdinftyError):
    """Operation requires a morphism between torsion-free objects."""


class ParseError(ZdinftyError):
    """Object expression could not be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RangeError(ZdinftyError):
    """A numeric parameter is outside its allowed range."""
