"""Exception classes.

Two families are kept apart on purpose. ``PreconditionError`` means the caller
handed in something outside an operation's domain. ``Violation`` and its
subclasses mean a step that is mathematically guaranteed to succeed did not;
on a correct implementation they are unreachable, and the CLI maps them to a
dedicated exit code so they can never be mistaken for bad input.
"""


class PreconditionError(ValueError):
    """Input outside an operation's domain."""


class FieldMismatchError(PreconditionError):
    """Operands live in different fields."""


class Violation(RuntimeError):
    """A guaranteed mathematical property failed to hold."""


class LemmaViolation(Violation):
    pass


class TheoremViolation(Violation):
    pass


class ConstructionViolation(Violation):
    pass
