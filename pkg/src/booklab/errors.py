"""Exception hierarchy shared by every booklab module."""


class BooklabError(Exception):
    """Base class for all library errors."""


class DomainError(BooklabError, ValueError):
    """An argument lies outside the operation's domain."""


class FormatError(BooklabError, ValueError):
    """A kcg file could not be parsed."""


class PreconditionError(DomainError):
    """The inputs do not satisfy a hypothesis the operation relies on."""


class NoSpineError(BooklabError, LookupError):
    """The coloring has no monochromatic K_k in the requested color."""


class InconclusiveError(BooklabError):
    """An exhaustive procedure hit its work cap before deciding."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}
