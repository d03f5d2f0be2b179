"""Exception hierarchy.

Two families matter to callers (and to the CLI exit-code contract):
semantic problems (:class:`SemanticError`, exit 1) and malformed input
(:class:`InputFormatError`, exit 2).  I/O failures are left as ``OSError``.
"""

from __future__ import annotations


class PlatrecError(Exception):
    """Base class for every error raised by this package."""


class SemanticError(PlatrecError):
    """Input is well-formed but violates a model invariant."""


class InputFormatError(PlatrecError):
    """Input could not be parsed or does not match its schema."""


class OntologyValidationError(SemanticError):
    def __init__(self, violations, message: str | None = None):
        self.violations = tuple(violations)
        if message is None:
            lines = [f"{len(self.violations)} ontology violation(s):"]
            lines += [f"  - {v}" for v in self.violations]
            message = "\n".join(lines)
        super().__init__(message)


class PatchError(SemanticError):
    def __init__(self, addition, reason: str):
        self.addition = addition
        self.reason = reason
        super().__init__(f"patch rejected at {addition}: {reason}")


class PlonSyntaxError(InputFormatError):
    """Lexical or syntax error in a PLON document, with 1-based position."""

    def __init__(self, message: str, line: int, column: int, expected=()):
        self.source = None  # file path, when parsed from a file
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"line {line}, column {column}: {message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)


class SchemaError(InputFormatError):
    """JSON document does not conform to its schema; ``path`` locates the field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


class SourceViewError(SemanticError):
    pass


class MappingError(SemanticError):
    def __init__(self, problems):
        self.problems = tuple(problems)
        super().__init__("mapping rejected:\n" + "\n".join(f"  - {p}" for p in self.problems))


class ViewError(SemanticError):
    pass


class RepositoryError(SemanticError):
    pass


class FixtureError(SemanticError):
    pass
