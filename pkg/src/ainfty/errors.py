class AlgebraError(Exception):
    """Base class for structural failures in algebraic input"""


class RelationError(AlgebraError):
    """A defining identity (d^2 = 0, Leibniz, unit law) fails on concrete input"""


class TruncationError(AlgebraError):
    """Requested data lies outside the materialised bounds"""

    def __init__(self, message: str, required: dict = None):
        super().__init__(message)
        self.required = required or {}


class ObstructionError(AlgebraError):
    """An extension system is inconsistent; carries the witness"""

    def __init__(self, message: str, witness: dict = None):
        super().__init__(message)
        self.witness = witness or {}
