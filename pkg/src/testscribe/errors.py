"""Exception types shared across the toolkit."""


class TestscribeError(Exception):
    """Base class for all toolkit errors."""


# --- script parsing ---

class ScriptSyntaxError(TestscribeError):
    """Malformed test script source, reported with a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class UnbalancedQuote(ScriptSyntaxError):
    pass


class UnterminatedCall(ScriptSyntaxError):
    pass


class EmptyCorpus(TestscribeError):
    pass


# --- layout / xpath ---

class XmlSyntaxError(TestscribeError):
    """Layout XML failed to parse; carries the (line, column) position."""

    def __init__(self, message: str, position=None):
        super().__init__(message)
        self.position = position


class XPathSyntaxError(TestscribeError):
    pass


class NoMatchError(TestscribeError):
    pass


class AmbiguousMatchError(TestscribeError):
    pass


class NotInTreeError(TestscribeError):
    pass


# --- gui intent ---

class EmptyGalleryError(TestscribeError):
    pass


# --- code intent ---

class EmptySnippetError(TestscribeError):
    pass


# --- backend bridge ---

class BackendError(TestscribeError):
    pass


class SpawnFailure(BackendError):
    pass


class HandshakeTimeout(BackendError):
    pass


class ProtocolError(BackendError):
    pass


class BackendFailure(BackendError):
    pass


class BackendTimeout(BackendError):
    pass


# --- pipeline ---

class BundleIncompleteError(TestscribeError):
    pass
