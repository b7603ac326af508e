"""Error hierarchy for the contact geometry toolkit.

Every failure an operation can report is a subclass of ContactGeometryError,
so callers may catch the whole family at once. Management commands map these
onto exit codes.
"""


class ContactGeometryError(ValueError):
    """Base class for all domain failures."""


class NotLieAlgebra(ContactGeometryError):
    """Structure constants violate antisymmetry or the Jacobi identity."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class NotContact(ContactGeometryError):
    """alpha wedge (d alpha)^n vanishes."""


class NoReeb(ContactGeometryError):
    """The Reeb system has no unique solution."""


class BadParameter(ContactGeometryError):
    """A model parameter is outside its admissible range (e.g. s = 0)."""


class Degenerate(ContactGeometryError):
    """A bilinear form that must be non-degenerate is not."""


class InvalidFrame(ContactGeometryError):
    """A supplied distribution basis is not adapted to the contact form."""


class OmegaDegenerate(Degenerate):
    """The defect tensor N cannot be solved for because omega is singular."""


class InvalidDeformation(ContactGeometryError):
    """A candidate deformation tensor breaks one of its symmetries."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidConnection(ContactGeometryError):
    """A connection table fails the contact axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotSPD(ContactGeometryError):
    """A matrix required to be symmetric positive definite is not."""


class NotSymplectic(ContactGeometryError):
    """A matrix fails the symplectic group condition."""


class SingularDenominator(ContactGeometryError):
    """CZ + D is singular in the Siegel action."""


class NonPositiveT(ContactGeometryError):
    """The fibre scaling t of the twistor metric must be positive."""


class NotInE(ContactGeometryError):
    """A twistor tangent vector has a xi component where E is required."""


class NotVertical(ContactGeometryError):
    """An endomorphism is not tangent to the fibre at the anchoring J."""


class NoConvergence(ContactGeometryError):
    """The solver did not reach its tolerance; carries the best candidate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DocumentError(ContactGeometryError):
    """A JSON document is malformed; path names the offending field."""

    def __init__(self, message, path='$'):
        super().__init__(f'{path}: {message}')
        self.path = path
