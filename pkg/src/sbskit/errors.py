"""Exception hierarchy.

Each top-level family maps to a stable CLI exit code: configuration problems
exit 1, filesystem problems exit 2, bad data exits 3.
"""


class SbsKitError(Exception):
    exit_code = 3


class ConfigError(SbsKitError, ValueError):
    exit_code = 1


class IoError(SbsKitError, OSError):
    exit_code = 2


class DataError(SbsKitError, ValueError):
    exit_code = 3


# corpus
class FormatError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateIdError(DataError):
    pass


class EmptyKeywordList(DataError):
    pass


# networks and scoring
class UnknownNode(DataError):
    pass


class LabelCollision(DataError):
    pass


class EmptyInput(DataError):
    pass


class EmptyNetwork(DataError):
    pass


class UnknownCluster(DataError):
    pass


# lexicons
class ParseError(DataError):
    pass


class EmptyConstruct(ParseError):
    pass


class BadWildcard(ParseError):
    pass


class NoResolvableTerms(DataError):
    def __init__(self, construct: str, detail: str = ""):
        self.construct = construct
        msg = f"construct {construct!r} matches no term in the network vocabulary"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class OverlappingConstructs(DataError):
    pass


# reports
class ConstructSetMismatch(DataError):
    pass
