"""
Errors raised by complement-miner

Every error derives from ComplementMinerError and from the closest builtin,
so callers can catch either ``ComplementMinerError`` or e.g. ``ValueError``.
"""

from pathlib import Path


class ComplementMinerError(Exception):
    """Base class for all complement-miner errors"""


class CorpusValidationError(ComplementMinerError, ValueError):
    """A parsed sentence, review or annotation violates a model invariant"""


class CorpusFormatError(ComplementMinerError, ValueError):
    """A line-delimited record could not be decoded"""

    def __init__(
        self, message: str, *, path: str | Path | None = None, line: int | None = None
    ):
        self.path = str(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None and line is not None:
            location = f"{self.path}:{line}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class DuplicateSentenceError(CorpusFormatError):
    """Two gold records share one sentence id"""


class UnresolvedRelationError(ComplementMinerError, IndexError):
    """A relation endpoint does not resolve to a token of the sentence"""


class PathSyntaxError(ComplementMinerError, ValueError):
    """Malformed dependency-path DSL text"""

    def __init__(self, message: str, *, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")

    def caret(self) -> str:
        """Render the offending text with a caret under the error position"""
        return f"{self.text}\n{' ' * self.position}^"


class PathSemanticError(ComplementMinerError, ValueError):
    """Well-formed DSL text describing an invalid path"""


class ChunkError(ComplementMinerError, ValueError):
    """Noun-phrase chunking was asked to start from a non-noun"""


class DomainMismatchError(ComplementMinerError, ValueError):
    """Domain knowledge applied to a review of another category"""


class CategoryMixtureError(ComplementMinerError, ValueError):
    """Knowledge expansion received reviews from several categories"""


class SentenceMismatchError(ComplementMinerError, ValueError):
    """Predictions scored against the gold annotation of another sentence"""


class ConfigError(ComplementMinerError, ValueError):
    """Invalid configuration file or environment value"""
