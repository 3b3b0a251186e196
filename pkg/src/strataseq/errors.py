"""Exception types shared across the library."""


class StrataseqError(Exception):
    """Base class for all domain errors raised by this package."""


class CycleDetected(StrataseqError):
    """Cover relations contain a directed cycle."""


class UnknownElement(StrataseqError):
    """An element id that does not belong to the poset."""


class NotComparable(StrataseqError):
    """An interval (x, y) was requested with x not below y."""


class NotIncreasing(StrataseqError):
    """A function claimed to be strictly increasing is not."""


class InvalidComplex(StrataseqError):
    """Differentials do not square to zero or shapes are inconsistent."""


class RingMismatch(StrataseqError):
    """Operands live over incompatible coefficient rings."""


class NotADoubleComplex(StrataseqError):
    """Horizontal maps fail to commute or to square to zero."""


class FiltrationNotPreserved(StrataseqError):
    """The differential moves some vector out of its filtration level."""


class NotAField(StrataseqError):
    """A field was required; integral input must use integral_filtration."""


class NotValidated(StrataseqError):
    """A stratified-space model must pass validate() before use."""


class TorsionObstruction(StrataseqError):
    """Interval cohomology has torsion where the construction needs it free."""


class NotCohenMacaulay(StrataseqError):
    """The graded poset fails the Cohen-Macaulay vanishing condition."""


class HypothesisViolated(StrataseqError):
    """A space model breaks the top-class hypotheses of the builders."""


class ActionInvalid(StrataseqError):
    """A group action is inconsistent with the stratified-space model."""


class NotCharZero(StrataseqError):
    """Group averaging needs the order of the group to be invertible."""


class InvalidLattice(StrataseqError):
    """An intersection lattice violates its dimension or order axioms."""


class MissingModel(StrataseqError):
    """A builder was not given a cochain model for some required stratum."""


class DocumentError(StrataseqError):
    """A serialized document could not be parsed or validated."""


class Cancelled(StrataseqError):
    """A long-running computation was cancelled cooperatively."""
