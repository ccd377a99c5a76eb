"""Exception types shared across the toolkit.

Every domain failure raises a subclass of ToolError so the CLI can map it
to a named diagnostic line and exit code 1.
"""


class ToolError(Exception):
    """Base class for all domain errors raised by this package."""


class MalformedFile(ToolError):
    """Input file does not conform to the group or ring file format."""


class OrderMismatch(ToolError):
    """Declared group order differs from the order generated by closure."""


class NotAGroup(ToolError):
    """Multiplication table fails the group axioms."""


class NotPGroup(ToolError):
    """Operation requires a p-group but the input order is not a power of p."""


class UnsupportedTarget(ToolError):
    """Order screen only covers defect targets 3 and 4."""


class InhomogeneousRelation(ToolError):
    """Relation polynomial mixes degrees."""


class UnknownGenerator(ToolError):
    """Polynomial references a generator the presentation does not declare."""


class BadCoefficient(ToolError):
    """Coefficient outside the prime field's residue range."""


class NotHomogeneous(ToolError):
    """Operation requires a homogeneous polynomial."""


class UnboundedWithinCap(ToolError):
    """Annihilator still nonzero inside the closing window at the degree cap."""


class NotSystemOfParameters(ToolError):
    """Final quotient algebra does not vanish within the degree cap."""


class PowerRaisingCapExceeded(ToolError):
    """Recursion stayed borderline after the maximum number of doublings."""


class MissingRestrictionBlock(ToolError):
    """Presentation carries no restriction data for the requested check."""


class UndeterminedWithinCap(ToolError):
    """Restriction-block quotient could not be certified within the cap."""


class DegreeMismatch(ToolError):
    """Restriction targets do not share the requested degree."""


class SearchExhausted(ToolError):
    """Parameter-completion search ran out of candidates."""


class InconsistentInputs(ToolError):
    """Group profile and ring report do not satisfy the defect identities."""
