"""Exception hierarchy shared by every module.

Errors that certify a failed identity carry the offending residual so the
caller (and the CLI report) can show what did not vanish.
"""

from __future__ import annotations


class GbxError(Exception):
    """Base class for all library errors."""


class ResidualError(GbxError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


# scalar coefficients
class DivisionByZero(GbxError, ZeroDivisionError):
    pass


class UnknownCoordinate(GbxError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class PoleAtPoint(GbxError):
    pass


class NegativeBaseFractionalPower(GbxError):
    pass


class NonRationalValue(GbxError):
    pass


class NotRepresentable(GbxError):
    """A value exists but falls outside the coefficient field."""


# graded algebra
class ContextMismatch(GbxError):
    pass


class WrongBidegree(GbxError):
    pass


class NotHomogeneous(GbxError):
    pass


# algebroids
class NotAStructure(ResidualError):
    pass


class NotAMultivector(GbxError):
    pass


class NotAForm(GbxError):
    pass


class NotASection(GbxError):
    pass


class NotAnEndomorphism(GbxError):
    pass


class SingularWeight(GbxError):
    pass


# tensors and compatibilities
class Degenerate(GbxError):
    pass


class NotInvertibleOnChart(GbxError):
    pass


class SkewConditionFails(ResidualError):
    pass


class SideConditionFails(ResidualError):
    pass


class MissingTensor(GbxError):
    pass


class NotPoisson(ResidualError):
    pass


class TorsionNonzero(ResidualError):
    pass


# Courant side
class NotOrthogonal(GbxError):
    pass


class SquareMismatch(GbxError):
    pass


# Monge-Ampere
class WrongDegree(GbxError):
    pass


class NotABaseFunction(GbxError):
    pass


class EffectivityRequired(ResidualError):
    pass


class NotClosed(ResidualError):
    pass


class PfaffianNotUnit(GbxError):
    pass


# DSL
class DslError(GbxError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


class DslSyntaxError(DslError):
    pass


class DslTypeError(DslError):
    pass


class UnboundName(DslError):
    pass
