"""Exception hierarchy shared by the whole package.

Everything raised on purpose derives from ApproxError, so the CLI can map
failures to exit codes without fishing through stdlib exception types.
"""


class ApproxError(Exception):
    """Base class for all deliberate failures."""


class ParseError(ApproxError):
    """Malformed element, polynomial, map or JSON input."""


class FieldMismatch(ApproxError):
    """Operands or problem parts live over different base fields."""


class DivisionByZero(ApproxError):
    pass


class DegreeCapExceeded(ApproxError):
    """Polynomial degree beyond a documented cap (irreducibility tests, maps)."""


class BadParams(ApproxError):
    """Structurally invalid parameters for a constructor."""


class NotAValuation(ApproxError):
    """A valuation-only operation was applied to an ordering or absolute value."""


class TrivialLocality(ApproxError):
    """The trivial locality is not allowed here."""


class NotInRing(ApproxError):
    """Residue reduction of an element outside the local ring."""


class UnsupportedResidue(ApproxError):
    """Residue-field operation without a usable residue representation."""


class ZeroModulus(ApproxError):
    pass


class ZeroInput(ApproxError):
    pass


class ZeroOutput(ApproxError):
    """A combinator produced 0 and its contract needs invertibility."""


class RootHit(ApproxError):
    """A certificate polynomial vanished at a point that must be regular."""


class CertificateNotFound(ApproxError):
    pass


class CertificateInvalid(ApproxError):
    """Certificate failed verification for the locality set it is used with."""


class DependentInputs(ApproxError):
    """Pairwise independence was required but two localities are dependent."""


class NotIndependent(DependentInputs):
    pass


class IncompatibleModuli(ApproxError):
    pass


class Incompatible(ApproxError):
    """Problem rejected by the compatibility checker; carries the witness report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class Unlinkable(ApproxError):
    """No auxiliary locality can be synthesised for the requested link."""


class NotLinkable(Unlinkable):
    """A pairwise link was requested for localities outside the linkable cases."""


class IncompatibleInputs(Incompatible):
    """Finitary constraint list violates its coarsening compatibility hypotheses."""


class NotTIndependent(ApproxError):
    """Two blocks fail t-independence (or incomparability, where required)."""


class TargetNotIntegral(ApproxError):
    """Residue approximation requires integral targets at their localities."""


class ExcludedConflict(ApproxError):
    """The excluded place of a strong approximation problem is constrained."""


class PreconditionFailed(ApproxError):
    """An operation's stated precondition does not hold for the given data."""


class SolverFailed(ApproxError):
    """The constructive pipeline could not produce an element (bug or
    unsupported configuration), as opposed to a rejected problem."""


class ScaleDependence(ApproxError):
    """The scale element t is not a unit at a join where it has to be."""


class WitnessInvalid(ApproxError):
    """A caller-supplied witness point fails its own constraint."""


class PoleAtCenter(ApproxError):
    """Laurent data requested at a pole of uncontrolled order."""


class FloorViolation(ApproxError):
    """Joint floor construction failed its postcondition."""
