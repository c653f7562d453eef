"""Exception types shared across the package."""


class LimdensError(Exception):
    pass


class ParseError(LimdensError, ValueError):
    """Syntax error at a known offset in the input text."""

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        if text:
            message = f"{message} at position {pos}: {text!r}"
        super().__init__(message)


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


class UnknownNameError(LimdensError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown name"


class BudgetExceeded(LimdensError):
    pass


class InfiniteStructureError(LimdensError):
    pass


class UnsupportedError(LimdensError):
    pass


class RankZeroError(LimdensError):
    """G(V) is finite, so no projection onto an infinite cyclic factor exists."""


class NotCertifiedError(LimdensError):
    """A symbol has no inverse word provable from the declared relations."""


class HypothesisError(LimdensError):
    """Precondition of a locality check does not hold."""

    def __init__(self, message, gap=None, threshold=None):
        self.gap = gap
        self.threshold = threshold
        super().__init__(message)
