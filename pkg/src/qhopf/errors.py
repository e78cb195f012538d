"""Exception types shared across the engine modules."""


class RingError(Exception):
    pass


class NegativeHbarValuation(RingError):
    """A term of negative total hbar-degree survived cancellation."""


class NegativeZValuation(RingError):
    """A term of negative total z-degree survived cancellation."""


class FuelExhausted(Exception):
    """Normal ordering did not reach a fixpoint within the fuel budget."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class LegMismatch(Exception):
    """Tensor operands with different leg counts."""


class NonLinearEImage(Exception):
    """Morphism image of an exponential-capable generator is not linear."""


class ParseError(Exception):
    """Definition-source error, carrying a 1-based line/column position."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)


class UnknownGenerator(ParseError):
    pass


class NonLinearExpArgument(ParseError):
    pass


class IncompleteTable(ParseError):
    pass


class UnknownCatalogEntry(KeyError):
    pass
