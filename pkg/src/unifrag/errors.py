"""Exception hierarchy shared by the whole package."""


class LogicError(Exception):
    """Base class for all errors raised by unifrag."""


class ParseError(LogicError):
    """Syntax error in a formula, concept or role text, with position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class VocabularyError(LogicError):
    """Unknown relation symbol, or a symbol used at the wrong arity class."""


class ArityError(LogicError):
    """Argument count of an atom disagrees with the declared arity."""


class StructureError(LogicError):
    """A structure document violates one of the structure invariants."""


class EvalError(LogicError):
    """Evaluation failed: unbound variable, bad assignment, or misuse."""


class FragmentGateError(LogicError):
    """Input refused because it falls outside the fragment a translation
    or search routine is defined for (distinct from a parse error)."""


class CellLimitError(LogicError):
    """Model search refused: the interpretation space at the requested
    domain size exceeds the configured cell limit."""
