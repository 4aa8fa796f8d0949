"""Exception types shared across the package."""


class FqxError(Exception):
    """Base class for all fqx errors."""


class XmlParseError(FqxError):
    """Malformed XML input. Carries source position when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class EmptyDocumentError(FqxError):
    """Input contained no usable XML content."""


class WrongNodeKindError(FqxError):
    """An operation received a text node where an element was required, or vice versa."""


class MissingStatisticsError(FqxError):
    """Requested a (term, node) pair that was never recorded in the document statistics."""


class UniverseMismatchError(FqxError):
    """A fuzzy set was applied to a context whose object/attribute universe differs."""


class IncompatibleContextsError(FqxError):
    """Contexts cannot be combined because their object lists differ."""


class UnknownAttributeError(FqxError):
    """A query named an attribute that is not a context column."""

    def __init__(self, name, suggestions=()):
        self.name = name
        self.suggestions = list(suggestions)
        hint = f"; did you mean: {', '.join(self.suggestions)}" if self.suggestions else ""
        super().__init__(f"unknown attribute {name!r}{hint}")


class DegreeRangeError(FqxError):
    """A membership degree fell outside its permitted range."""


class CrossLatticeError(FqxError):
    """Concepts from different lattices were compared or combined."""


class BundleFormatError(FqxError):
    """An index bundle file is corrupt or has an unsupported version."""


class SelectorError(FqxError):
    """An export selector named no existing lattice or context."""
