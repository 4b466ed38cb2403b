"""Exception hierarchy shared by every braidlie module."""

from __future__ import annotations


class BraidLieError(Exception):
    """Base class for all errors raised by braidlie."""


class DivisionByZero(BraidLieError, ZeroDivisionError):
    pass


class NotARootOfUnity(BraidLieError, ValueError):
    pass


# grading


class IllDefinedBicharacter(BraidLieError, ValueError):
    def __init__(self, i: int, j: int, detail: str = ""):
        self.i, self.j = i, j
        msg = f"bicharacter entry ({i}, {j}) violates the torsion congruence"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class InfiniteGroup(BraidLieError, ValueError):
    pass


class LengthMismatch(BraidLieError, ValueError):
    pass


class NotAZetaFamily(BraidLieError, ValueError):
    pass


# algebra


class TableMismatch(BraidLieError, ValueError):
    pass


class InhomogeneousWord(BraidLieError, ValueError):
    pass


class InhomogeneousRelation(BraidLieError, ValueError):
    pass


class OrientationFailure(BraidLieError, ValueError):
    pass


class DegreeOverflow(BraidLieError, ValueError):
    def __init__(self, word, bound: int):
        self.word, self.bound = word, bound
        super().__init__(f"word of length {len(word)} exceeds degree bound {bound}")


class IncompleteRewriteSystem(BraidLieError, ValueError):
    pass


class InfiniteDimensional(BraidLieError, ValueError):
    pass


# lie


class DegreeMismatch(BraidLieError, ValueError):
    pass


class NotPrimitiveRoot(BraidLieError, ValueError):
    pass


class PairNotMinusOneFamily(BraidLieError, ValueError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"pair (h, g_{i + 1}) is not a (-1)-family")


class MissingBracket(BraidLieError, KeyError):
    def __init__(self, zeta, family):
        self.zeta, self.family = zeta, family
        super().__init__(f"no bracket declared for zeta={zeta} on {family}")

    def __str__(self) -> str:
        return self.args[0]


class LieValidationFailure(BraidLieError, ValueError):
    pass


# hopf


class AntipodeNotFound(BraidLieError, ValueError):
    pass


# cli


class ParseError(BraidLieError, ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(BraidLieError, ValueError):
    def __init__(self, block: str, reason: str):
        self.block, self.reason = block, reason
        super().__init__(f"[{block}] {reason}")


class UnknownCommand(BraidLieError, ValueError):
    pass
