"""Exception hierarchy shared by all iimkit modules."""


class IIMError(Exception):
    """Base class for iimkit errors."""


class GraphError(IIMError, ValueError):
    """Malformed graph input: out-of-range endpoint, self-loop, bad vertex id."""


class EdgeListParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SizeLimitError(IIMError):
    """An exact solver was asked to work above its configured vertex limit."""

    def __init__(self, what: str, n: int, limit: int):
        super().__init__(f"{what}: {n} vertices exceeds limit {limit}")
        self.n = n
        self.limit = limit


class BudgetExceededError(IIMError):
    """Exhaustive enumeration would exceed the configured bit budget."""

    def __init__(self, bits: int, budget: int):
        super().__init__(f"enumeration needs 2^{bits} sequences, budget is 2^{budget}")
        self.bits = bits
        self.budget = budget


class ChoiceLengthError(IIMError, ValueError):
    pass


class IsolatedVertexError(IIMError, ValueError):
    def __init__(self, vertices):
        self.vertices = list(vertices)
        super().__init__(f"graph has isolated vertices {self.vertices[:8]}")


class ConvergenceError(IIMError, ArithmeticError):
    pass


class PreconditionError(IIMError, ValueError):
    """Inputs violate a stated precondition of a construction or check."""


class ValidationError(IIMError):
    """A constructed object failed its own post-hoc validation."""
