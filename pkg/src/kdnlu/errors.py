"""Exception types shared across the package.

Every error raised by kdnlu derives from KdnluError so callers can catch
the whole family at once; the CLI maps them onto exit codes.
"""

from __future__ import annotations


class KdnluError(Exception):
    """Base class for all kdnlu errors."""


# --- syntax ---------------------------------------------------------------

class EmptyInput(KdnluError):
    """Tokenizer got text with no tokens."""


class UnparsableSentence(KdnluError):
    """No grammar rule applies; carries the token index of the failure."""

    def __init__(self, message: str, token_index: int):
        super().__init__(message)
        self.token_index = token_index


class MalformedTree(KdnluError):
    """Bracketed tree text is imbalanced; carries the character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(message)
        self.offset = offset


# --- lexicon --------------------------------------------------------------

class LexiconFormatError(KdnluError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DanglingRole(LexiconFormatError):
    """A semantic template references a role absent from the frame syntax."""


# --- semantic generation ----------------------------------------------------

class VerbNotInTree(KdnluError):
    pass


class UnboundRole(KdnluError):
    pass


class UnmappedBePattern(KdnluError):
    pass


# --- engine -----------------------------------------------------------------

class EngineError(KdnluError):
    pass


class RuleSyntaxError(EngineError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnstratifiableProgram(EngineError):
    def __init__(self, cycle: list[str]):
        super().__init__("negation cycle through " + " -> ".join(cycle))
        self.cycle = cycle


class NonterminationGuard(EngineError):
    """Goal recursion exceeded the depth bound; a bug or unsupported recursion."""


class Floundering(EngineError):
    """A named variable was unbound under negation at call time."""


class BuiltinTypeError(EngineError):
    def __init__(self, message: str, argument=None):
        super().__init__(message)
        self.argument = argument


# --- knowledge / question side ----------------------------------------------

class UnsupportedQuestion(KdnluError):
    def __init__(self, message: str, shape: str = ""):
        super().__init__(message)
        self.shape = shape


class MissingEntity(KdnluError):
    pass


class NoAnswer(KdnluError):
    pass


# --- dialog -------------------------------------------------------------------

class IncompleteSlots(KdnluError):
    def __init__(self, missing: list[str]):
        super().__init__("missing slots: " + ", ".join(missing))
        self.missing = missing


class NoMoreOptions(KdnluError):
    pass


class UnknownInfoRequest(KdnluError):
    pass


# --- harness --------------------------------------------------------------------

class FormatError(KdnluError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
