"""Exception hierarchy for the toolkit."""
from __future__ import annotations


class TreebankError(Exception):
    """Base class for every error raised by eojeolbank."""


# -- bracketed text --------------------------------------------------------

class BracketParseError(TreebankError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnbalancedBrackets(BracketParseError):
    def __init__(self, position: int):
        super().__init__("unbalanced brackets", position)


class EmptyConstituent(BracketParseError):
    def __init__(self, position: int):
        super().__init__("constituent without children", position)


class StrayToken(BracketParseError):
    def __init__(self, token: str, position: int):
        super().__init__(f"token {token!r} outside any tree", position)
        self.token = token


class BadLabel(BracketParseError):
    def __init__(self, label: str, position: int):
        super().__init__(f"malformed category label {label!r}", position)
        self.label = label


class DuplicateSentenceId(TreebankError, ValueError):
    pass


# -- morphology ------------------------------------------------------------

class MorphError(TreebankError, ValueError):
    pass


class MalformedSegment(MorphError):
    pass


class EmptyField(MorphError):
    pass


class MissingMorph(TreebankError):
    def __init__(self, index: int, surface: str):
        super().__init__(f"leaf {index} ({surface!r}) has no morphological segmentation")
        self.index = index
        self.surface = surface


# -- normalization ---------------------------------------------------------

class EmptyTree(TreebankError):
    """The whole sentence consisted of null material."""


class OrphanFunctional(TreebankError):
    def __init__(self, surface: str):
        super().__init__(f"functional leaf {surface!r} has no preceding host")
        self.surface = surface


class YieldMismatch(TreebankError):
    def __init__(self, expected, actual):
        super().__init__(f"eojeol sequence mismatch: expected {expected!r}, got {actual!r}")
        self.expected = expected
        self.actual = actual


class PassError(TreebankError):
    """A normalization pass failed; ``error`` holds the original exception."""

    def __init__(self, pass_name: str, error: Exception):
        super().__init__(f"{pass_name}: {error}")
        self.pass_name = pass_name
        self.error = error


# -- joint format ----------------------------------------------------------

class JointFormatError(TreebankError, ValueError):
    pass


class NotNormalized(JointFormatError):
    pass


class UnbalancedColumns(JointFormatError):
    pass


class ColumnCount(JointFormatError):
    def __init__(self, row: int, count: int):
        super().__init__(f"row {row}: expected 6 columns, found {count}")
        self.row = row
        self.count = count


class IdOrder(JointFormatError):
    pass


# -- dependencies ----------------------------------------------------------

class AllPunct(TreebankError):
    pass


class ConfigError(TreebankError, ValueError):
    pass
