"""Exception hierarchy shared by the parser, the typechecker and the backends."""


class TcdError(Exception):
    """Base class for every error raised by this package."""


class UnknownName(TcdError):
    def __init__(self, name, kind="name"):
        super().__init__(f"unknown {kind} {name!r}")
        self.name = name
        self.kind = kind


class InterfaceMismatch(TcdError):
    """Two interfaces that should agree do not; both sides are kept for reporting."""

    def __init__(self, left, right, context="compose"):
        self.left = tuple(left)
        self.right = tuple(right)
        self.context = context
        super().__init__(
            f"{context}: interface mismatch: {_word(self.left)} vs {_word(self.right)}"
        )


class TcdSyntaxError(TcdError):
    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f"{source + ':' if source else ''}{line}:{column}: "
        super().__init__(where + message)


class BadPermutation(TcdError):
    pass


class WidthMismatch(TcdError):
    pass


class NotAGroup(TcdError):
    def __init__(self, law, witness):
        self.law = law
        self.witness = tuple(witness)
        super().__init__(f"{law} fails at {self.witness}")


class ClosureTooLarge(TcdError):
    pass


class GroupMismatch(TcdError):
    pass


class UnboundComponent(TcdError):
    def __init__(self, name):
        super().__init__(f"component {name!r} has no binding")
        self.name = name


class InvalidBinding(TcdError):
    def __init__(self, name, violation):
        super().__init__(f"binding for {name!r} is not a valid arrow: {violation}")
        self.name = name
        self.violation = violation


class NotScalar(TcdError):
    pass


class NotClosed(TcdError):
    pass


class HasComponents(TcdError):
    pass


class BudgetExceeded(TcdError):
    pass


class BadParam(TcdError):
    pass


def _word(w):
    return ",".join(w) if w else "I"
