"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed boxes, mismatched dimensions, out-of-range parameters."""


class CapExceeded(InvalidInput):
    """An exact oracle was asked to run above its configured size cap."""


class OutOfRange(InvalidInput):
    """(p, q) lies outside the range an algorithm is proven for."""


class PropertyViolation(Exception):
    """A certified witness shows the family lacks the claimed (p, q)-property.

    ``witness`` holds family indices: a packing that is too large, or a
    p-subset without an intersecting q-tuple.
    """

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(int(i) for i in witness)


class InternalError(RuntimeError):
    """A postcondition the algorithms guarantee was found broken."""
