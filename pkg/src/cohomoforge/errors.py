"""Exception hierarchy.

Validation failures carry the offending witness as attributes so callers
(and the CLI report) can show exactly which axiom broke and where.
"""


class CohomoforgeError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(CohomoforgeError):
    """An input object violates one of its structural invariants."""

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness


class BudgetError(CohomoforgeError):
    """A configured cap or size budget would be exceeded."""

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness


# groups
class NotClosed(ValidationError):
    pass


class NoIdentityAtZero(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class MissingInverse(ValidationError):
    pass


class NotNormal(ValidationError):
    pass


class NotSubgroup(ValidationError):
    pass


# abelian groups and modules
class NotWellDefined(ValidationError):
    pass


class NotIdentityAtE(ValidationError):
    pass


class NotHomomorphic(ValidationError):
    pass


class NotAutomorphism(ValidationError):
    pass


class NotSubmodule(ValidationError):
    pass


class NotExact(ValidationError):
    pass


# Lie side
class NotAlternating(ValidationError):
    pass


class JacobiFails(ValidationError):
    pass


class NotLieModule(ValidationError):
    pass


class NotIdeal(ValidationError):
    pass


class Axiom1Fails(ValidationError):
    pass


class Axiom3Fails(ValidationError):
    pass


class HypothesisFailed(CohomoforgeError):
    def __init__(self, name, detail=""):
        super().__init__(f"hypothesis failed: {name}" + (f" ({detail})" if detail else ""))
        self.name = name


# budgets
class OrderCapExceeded(BudgetError):
    pass


class CapExceeded(BudgetError):
    pass


class DegreeCapExceeded(BudgetError):
    pass


class SizeBudgetExceeded(BudgetError):
    pass


class LatticeCapExceeded(BudgetError):
    pass


class EnumerationCapExceeded(BudgetError):
    pass


# cli
class SchemaError(CohomoforgeError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(message + (f" [{', '.join(where)}]" if where else ""))
        self.line = line
        self.field = field


class UnknownCommand(CohomoforgeError):
    pass
