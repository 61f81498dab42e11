"""Exception hierarchy shared by every ncspace module."""


class NcSpaceError(Exception):
    """Base class for all errors raised by ncspace."""


class FieldMismatch(NcSpaceError):
    pass


class ReducibleModulus(NcSpaceError):
    pass


class ShapeError(NcSpaceError):
    pass


class DegenerateInput(NcSpaceError):
    pass


class RankError(NcSpaceError):
    pass


class NoEmbeddings(NcSpaceError):
    pass


class Unsupported(NcSpaceError):
    pass


class CharacteristicMismatch(NcSpaceError):
    pass


class ParseError(NcSpaceError):
    """Syntax or name-resolution error in a ``.ncs`` source."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


class UnknownGenerator(ParseError):
    pass


class ConstantUnresolvable(ParseError):
    pass


class InvalidAction(NcSpaceError):
    pass


class UnboundGenerator(NcSpaceError):
    pass


class AlgebraMismatch(NcSpaceError):
    pass


class RelationViolation(NcSpaceError):
    """A candidate representation does not satisfy the algebra's relations."""

    def __init__(self, label, violations):
        self.label = label
        self.violations = violations
        names = ", ".join(v.relation_text for v in violations)
        super().__init__(f"module {label!r} violates: {names}")


class NotCentral(NcSpaceError):
    pass


class Undecided(NcSpaceError):
    pass


class TooLarge(NcSpaceError):
    pass


class NotZeroDimensional(NcSpaceError):
    pass


class ResourceExhausted(NcSpaceError):
    pass
