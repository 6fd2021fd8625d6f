"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class CnndError(Exception):
    """Base class for all package errors."""


class DomainError(CnndError, ValueError):
    """A function was evaluated outside its real domain."""


class DivisionByZero(CnndError, ZeroDivisionError):
    """Division by a jet whose value is (numerically) zero."""


class ExprSyntaxError(CnndError, SyntaxError):
    """Malformed expression source.

    ``offset`` is the 0-based character offset of the offending token and
    ``expected`` the set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifier(CnndError, NameError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        # NameError.__init__ resets ``name``, so set attributes afterwards.
        self.name = name
        self.offset = offset


class NotSpacelike(CnndError):
    """The induced metric is not positive definite at the point."""


class NotCnnd(CnndError):
    """The normal part of Z is not lightlike at the point."""

    def __init__(self, message: str, point: tuple[float, float] | None = None, zperp_norm2: float | None = None):
        self.point = point
        self.zperp_norm2 = zperp_norm2
        super().__init__(message)


class DegenerateZperp(CnndError):
    """The normal part of Z vanishes (Z is tangent to the surface)."""

    def __init__(self, message: str, point: tuple[float, float] | None = None):
        self.point = point
        super().__init__(message)


class BetaResidual(CnndError):
    """B(., Z_top) is not parallel to Z_perp within tolerance."""


class AZero(CnndError):
    """An operation requiring a != 0 was called where a vanishes."""


class DegenerateFormula(CnndError):
    """A closed-form direction formula collapses to the zero vector."""


class AlphaVanishes(CnndError):
    """The family-2 profile function vanishes on the sampled domain."""


class Diverged(CnndError):
    """Damped Gauss-Newton could not reduce the residual."""


class SingularJacobian(CnndError):
    def __init__(self, message: str, node: tuple[float, float] | None = None):
        self.node = node
        super().__init__(message)


class ConfigError(CnndError):
    """Invalid run configuration; ``location`` names the section/key or line."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
